#pragma once
#include <stdexcept>
#include <string>

namespace zoll {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Profile fails the odd-family constraints (sum of coefficients nonzero,
// or sup |h| >= 1).
struct ProfileInvalid : Error {
    using Error::Error;
};

// Pointwise evaluation requested inside the pole guard band.
struct PoleEvaluation : Error {
    using Error::Error;
};

// Adaptive step controller could not meet tolerance.
struct StepUnderflow : Error {
    using Error::Error;
};

// Shooting fan failed to connect two points at max resolution.
struct NoConnectionFound : Error {
    using Error::Error;
};

// exact-zoll mode demanded for a metric with no passing certification run.
struct NotCertifiedZoll : Error {
    using Error::Error;
};

// Value is not an integer multiple of 2*pi within tolerance.
struct NotMultipleOf2Pi : Error {
    using Error::Error;
};

// Curve shrank below collapse tolerance during shortening.
struct CollapseDetected : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace zoll
