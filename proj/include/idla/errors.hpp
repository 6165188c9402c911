#pragma once

#include <stdexcept>
#include <string>

namespace idla {

// Configuration / argument problems map to CLI exit code 2,
// runtime budget problems to exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ConfigError {
    using ConfigError::ConfigError;
};

struct InvalidAngle : ConfigError {
    using ConfigError::ConfigError;
};

struct EmptyFamily : ConfigError {
    using ConfigError::ConfigError;
};

struct UnsupportedDimension : ConfigError {
    using ConfigError::ConfigError;
};

struct StepBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingWaveData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A walk wandered outside the packable coordinate range for the current
// dimension. Practically unreachable at sane step budgets; kept loud.
struct CoordinateOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace idla
