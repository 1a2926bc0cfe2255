#pragma once

#include <stdexcept>
#include <string>

namespace conformal2d {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point outside the domain of a field or map.
struct DomainError : Error {
    using Error::Error;
};

/// Evaluation too close to the pole of a Möbius map.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

/// Eigenvalue pair outside the admissible cone of a curvature function.
struct ConeError : Error {
    using Error::Error;
};

/// No root of f(mu, mu) = 1 on the positive diagonal.
struct SeedError : Error {
    using Error::Error;
};

/// Radial solver could not bracket or resolve the lambda_1 root.
struct StepFailure : Error {
    using Error::Error;
};

struct FitDiverged : Error {
    using Error::Error;
};

/// B-covariance is only defined for holomorphic maps.
struct ConjugatingUnsupported : Error {
    using Error::Error;
};

/// Malformed configuration or field/map specification.
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace conformal2d
