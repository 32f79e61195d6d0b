#pragma once

#include <stdexcept>
#include <string>

namespace bsvi {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An obstacle description violates (A1)/(A2) or its oracle misbehaves.
struct InvalidObstacleError : Error {
    using Error::Error;
};

// The numeric prox/penalty root-find failed to converge.
struct NumericProxError : Error {
    using Error::Error;
};

// A forward simulation or a time step produced NaN/inf.
struct DivergedError : Error {
    using Error::Error;
};

// Least-squares normal equations are rank deficient (and ridge == 0).
struct DegenerateRegressionError : Error {
    using Error::Error;
};

// Run configuration is invalid; message lists every violation found.
struct ConfigError : Error {
    using Error::Error;
};

// Terminal data falls outside Dom(phi) beyond tolerance.
struct InfeasibleTerminalError : Error {
    using Error::Error;
};

}  // namespace bsvi
