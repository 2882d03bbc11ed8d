#pragma once

#include <stdexcept>

namespace twsent {

// Bad configuration or unusable input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A prerequisite artifact is missing; exit code 3.
struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twsent
