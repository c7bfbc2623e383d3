#pragma once

#include <stdexcept>
#include <string>

namespace cqexp {

// Bad input: dimension mismatch, broken invariant, unmet precondition.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Computation would exceed the configured enumeration/memory budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver hit its iteration cap before reaching the requested
// certified gap. Carries the best bracket found so callers can decide.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double lower, double upper, long iterations)
        : std::runtime_error(what), lower(lower), upper(upper), iterations(iterations) {}

    double lower;
    double upper;
    long iterations;
};

} // namespace cqexp
