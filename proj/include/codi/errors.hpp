#pragma once

#include <stdexcept>
#include <string>

namespace codi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
struct IoError : Error {
    using Error::Error;
};

// File exists but its contents are not a supported format.
struct FormatError : Error {
    using Error::Error;
};

// A parameter violates its documented range or a precondition.
struct ParamError : Error {
    using Error::Error;
};

// The composed diffusion weight is identically zero.
struct DegenerateWeightError : Error {
    using Error::Error;
};

// NaN/Inf appeared during iteration.
struct NumericalError : Error {
    using Error::Error;
};

// A histogram or point set over an empty domain.
struct EmptyDomainError : Error {
    using Error::Error;
};

// Bad key, value, or cross-field constraint in a pipeline config.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace codi
