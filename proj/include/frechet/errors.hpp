#pragma once

#include <stdexcept>
#include <string>

namespace frechet {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad literals, arity/dimension mismatches, mixed primes.
struct UsageError : Error {
    using Error::Error;
};

/// Mathematically invalid request at a specific point: division by zero,
/// probe outside the declared domain, insufficient p-adic precision.
struct DomainError : Error {
    using Error::Error;
};

/// A linear map that must be invertible is (numerically) singular.
struct SingularMapError : DomainError {
    using DomainError::DomainError;
};

/// Smoothness-policy violation: an operation that relies on symmetry of the
/// second derivative was given a non-archimedean field together with an
/// expression that is not certified analytic (rational operations only).
struct MinSmoothnessError : DomainError {
    using DomainError::DomainError;
};

} // namespace frechet
