#pragma once

#include <stdexcept>

namespace pcc {

// Error taxonomy, mapped to CLI exit codes:
//   InvariantError -> 2, GuardError -> 3, ConfigError -> 4.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Contract violations.
struct OverlapError : InvariantError { using InvariantError::InvariantError; };
struct WitnessNotFound : InvariantError { using InvariantError::InvariantError; };

// Resource / search limits.
struct RetriesExhausted : GuardError { using GuardError::GuardError; };
struct SearchExhausted : GuardError { using GuardError::GuardError; };
struct EmptyRangeError : GuardError { using GuardError::GuardError; };

// Bad parameter domains (e.g. iterated log undefined at this N).
struct DomainError : ConfigError { using ConfigError::ConfigError; };

}  // namespace pcc
