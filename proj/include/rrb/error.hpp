#pragma once

#include <stdexcept>
#include <string>

namespace rrb {

/// Raised for bad user-supplied input: wrong dimensions, out-of-range
/// parameters, malformed files. The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rrb
