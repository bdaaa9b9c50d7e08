#pragma once

#include <stdexcept>
#include <string>

namespace springerlab {

// Raised when a computation cannot decide a value at the working precision.
// Callers are expected to raise precision and retry.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what, int suggested = -1)
        : std::runtime_error(what), suggested_(suggested) {}
    int suggested_precision() const { return suggested_; }

private:
    int suggested_;
};

// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Two local fields that do not sit in a common Eisenstein-over-unramified tower.
class TowerMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed textual input.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace springerlab
