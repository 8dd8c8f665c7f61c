#pragma once

#include <stdexcept>
#include <string>

namespace totient {

// Invalid run parameters (window bounds, limits, flag values).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Caller violated an operation's precondition, e.g. base primes too short
// for the requested window.
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

// Argument outside the mathematical domain of the operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A checkpoint on disk belongs to a different request or is malformed.
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace totient
