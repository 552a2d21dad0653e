#ifndef TCPLAN_ERROR_HPP_
#define TCPLAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tcplan {

// Invalid domain values or malformed input data (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tcplan

#endif  // TCPLAN_ERROR_HPP_
