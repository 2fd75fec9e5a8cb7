#pragma once

#include <stdexcept>
#include <string>

namespace parapde {

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Picard iteration failed to contract within the step budget.
struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace parapde
