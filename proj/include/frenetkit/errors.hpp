#pragma once

#include <stdexcept>
#include <string>

namespace frenetkit {

// Invalid or inconsistent input data (bad scene records, degenerate
// geometry, out-of-range Frenet coordinates). The CLI maps this to exit
// code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace frenetkit
