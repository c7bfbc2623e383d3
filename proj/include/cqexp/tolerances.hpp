#pragma once

#include <cstddef>

namespace cqexp {

// All numeric tolerances used across the library, in one record.
struct Tolerances {
    double hermiticity = 1e-12;       // |M - M^dag| entrywise, relative to scale
    double trace_one = 1e-10;         // |tr rho - 1|
    double psd_floor = -1e-10;        // smallest admissible eigenvalue of a state
    double support_cutoff = 1e-12;    // eigenvalues below cutoff * lambda_max are zero
    double support_violation = 1e-10; // state mass outside supp(sigma) -> +inf
    double unitarity = 1e-9;          // |V V^dag - id|
    double action_match = 1e-8;       // |V phi V^dag - phi'| Frobenius, group actions
    double prob_sum = 1e-12;          // |sum p - 1|
    double scalar_opt_x = 1e-10;      // golden-section tolerance in alpha / s
    double solver_gap = 1e-8;         // default certified-gap target
    double e0_value = 1e-9;           // e0_opt convergence tolerance on value
    double critical_rate = 1e-6;      // bisection tolerance in rate
    double slope_step = 1e-4;         // finite-difference step for E_sp slopes, bits
    double phase_pivot = 1e-9;        // first component treated as nonzero for phase fixing
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

// Enumeration / memory limits for the exact finite-n machinery.
struct Budget {
    std::size_t max_pure_dim = std::size_t{1} << 20; // total pure-state dimension
    std::size_t max_enumeration = std::size_t{1} << 20;
};

inline const Budget& default_budget() {
    static const Budget b{};
    return b;
}

} // namespace cqexp
