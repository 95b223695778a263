#pragma once

#include <stdexcept>
#include <string>

namespace liejets {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace liejets
