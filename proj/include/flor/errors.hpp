#pragma once

#include <stdexcept>

namespace flor {

// Error taxonomy mirrored by the CLI exit codes: configuration errors exit
// with 1, I/O errors with 2, optimization failures (non-finite loss) with 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flor
