#pragma once

#include <stdexcept>
#include <string>

namespace uavsizer {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input value violates an invariant (bad field in a file, bad argument).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or is not in the expected format.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A query falls outside a curve's measured range. Extrapolation is refused.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested thrust exceeds what the measured curve can deliver.
class InsufficientThrustError : public DomainError {
public:
    InsufficientThrustError(const std::string& message, double deficit_kgf)
        : DomainError(message), deficit_kgf_(deficit_kgf) {}

    /// How far above the curve maximum the request was, in kgf per motor.
    double deficit_kgf() const noexcept { return deficit_kgf_; }

private:
    double deficit_kgf_;
};

}  // namespace uavsizer
