#pragma once

#include <stdexcept>
#include <string>

namespace ggme {

// Base for everything we throw on purpose. CLI maps these to exit code 3,
// bad user input to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Raised when a GIG density degenerates (b ~ 0) and the caller did not ask
// for the gamma limit.
struct DegenerateGig : Error {
    explicit DegenerateGig(const std::string& msg) : Error(msg) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

// An estimator produced -inf / NaN in a place where that is not a valid
// reported value (e.g. all restricted-chain density terms truncated away).
struct EstimatorFailure : Error {
    explicit EstimatorFailure(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace ggme
