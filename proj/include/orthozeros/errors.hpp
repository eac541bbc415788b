#pragma once

#include <stdexcept>
#include <string>

namespace oz {

// Invalid arguments or violated preconditions.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A weight that fails the positivity requirements.
struct WeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative procedure did not reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural property that must hold did not (zero counts, root counts).
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oz
