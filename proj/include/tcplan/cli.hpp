#ifndef TCPLAN_CLI_HPP_
#define TCPLAN_CLI_HPP_

#include <string>
#include <vector>

namespace tcplan {

// Command-line entry point. Subcommands: gen-data, cluster, train-time,
// train-rd, select-features, plan, sweep-rate, sweep-time, bd-rate,
// report. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 infeasible plan.
int cli_main(int argc, const char* const* argv);

// Convenience wrapper for in-process invocations; args exclude argv[0].
int cli_main(const std::vector<std::string>& args);

}  // namespace tcplan

#endif  // TCPLAN_CLI_HPP_
