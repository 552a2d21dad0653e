#ifndef TCPLAN_SERIALIZE_HPP_
#define TCPLAN_SERIALIZE_HPP_

#include <json.hpp>

#include "tcplan/core.hpp"
#include "tcplan/eval.hpp"
#include "tcplan/gbdt.hpp"
#include "tcplan/rdmodel.hpp"
#include "tcplan/solver.hpp"
#include "tcplan/svm.hpp"

// JSON conversions for the domain and model types. Doubles round-trip
// exactly through nlohmann's serializer, so persisted models reproduce
// bit-identical predictions.

namespace tcplan {

using Json = nlohmann::json;

void to_json(Json& j, const Preset& p);
void from_json(const Json& j, Preset& p);

void to_json(Json& j, const OperatingGrid& grid);
void from_json(const Json& j, OperatingGrid& grid);

void to_json(Json& j, const SegmentFeatures& f);
void from_json(const Json& j, SegmentFeatures& f);

void to_json(Json& j, const Budgets& b);
void from_json(const Json& j, Budgets& b);

void to_json(Json& j, const RDCurve& c);
void from_json(const Json& j, RDCurve& c);

void to_json(Json& j, const LogCurve& c);
void from_json(const Json& j, LogCurve& c);

void to_json(Json& j, const ClusterModel& m);
void from_json(const Json& j, ClusterModel& m);

void to_json(Json& j, const TreeNode& n);
void from_json(const Json& j, TreeNode& n);

void to_json(Json& j, const RegressionTree& t);
void from_json(const Json& j, RegressionTree& t);

void to_json(Json& j, const TimeModel& m);
void from_json(const Json& j, TimeModel& m);

void to_json(Json& j, const Standardizer& s);
void from_json(const Json& j, Standardizer& s);

void to_json(Json& j, const BinarySvm& s);
void from_json(const Json& j, BinarySvm& s);

void to_json(Json& j, const RDClassModel& m);
void from_json(const Json& j, RDClassModel& m);

void to_json(Json& j, const ModelSet& m);
void from_json(const Json& j, ModelSet& m);

void to_json(Json& j, const Solution& s);
void from_json(const Json& j, Solution& s);

void to_json(Json& j, const SweepRow& r);
void from_json(const Json& j, SweepRow& r);

void to_json(Json& j, const SweepReport& r);
void from_json(const Json& j, SweepReport& r);

}  // namespace tcplan

#endif  // TCPLAN_SERIALIZE_HPP_
