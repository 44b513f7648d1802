#pragma once

#include <stdexcept>
#include <string>

namespace mograph {

/// Raised when inputs violate a documented precondition (bad shapes, bad
/// files, out-of-range parameters). Maps to process exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a computation cannot produce a result (no RANSAC consensus,
/// singular matrix, unmatched tokens). Maps to process exit code 3.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mograph
