#pragma once

#include <stdexcept>
#include <string>

namespace anisoframe {

struct InvalidIndex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an exhaustive method is asked for more than it can enumerate.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

struct Unsupported : std::logic_error {
  using std::logic_error::logic_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace anisoframe
