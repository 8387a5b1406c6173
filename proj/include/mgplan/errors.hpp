#pragma once

#include <stdexcept>
#include <string>

namespace mgplan {

// Bad or inconsistent input data (configuration, CSV files, sizing out of bounds).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size/volume/memory limit would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgplan
