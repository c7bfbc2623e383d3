#pragma once

#include <vector>

#include "cqexp/matrix.hpp"
#include "cqexp/states.hpp"

namespace cqexp {

// Certified bracket around a value that is approached from both sides.
struct CertifiedValue {
    double lower = 0.0;
    double upper = 0.0;

    double gap() const { return upper - lower; }
    double mid() const { return 0.5 * (lower + upper); }
};

struct Ensemble {
    Ensemble(ProbabilityVector priors, std::vector<Matrix> states,
             const Tolerances& tol = default_tolerances());

    ProbabilityVector priors;
    std::vector<Matrix> states;

    int size() const { return priors.size(); }
    int dim() const { return static_cast<int>(states[0].rows()); }
};

// Exact binary guessing probability (1 + ||p0 rho0 - p1 rho1||_1) / 2.
double helstrom(double p0, const Matrix& rho0, double p1, const Matrix& rho1,
                const Tolerances& tol = default_tolerances());

// Pi_x = S^(-1/2) p_x rho_x S^(-1/2) with S the average state; the kernel
// of S is assigned to hypothesis 0.
struct PGMResult {
    std::vector<Matrix> operators;
    double success = 0.0;
};
PGMResult pretty_good_measurement(const Ensemble& e,
                                  const Tolerances& tol = default_tolerances());

// Optimal guessing probability with a primal/dual certificate: lower from
// PGM plus measurement-improvement iteration, upper from a dual-feasible
// operator dominating every weighted state.
struct PguessResult {
    CertifiedValue value;
    long iterations = 0;
    std::vector<Matrix> measurement; // achieving the lower bound
    Matrix dual;                     // sigma-hat with tr = upper bound
};
PguessResult pguess(const Ensemble& e, double tol_gap = default_tolerances().solver_gap,
                    long cap = 10000, const Tolerances& tol = default_tolerances());

// max over density sigma of F(rho_XQ, pi_X (x) sigma)^2 for a CQ state with
// k classical values of weights w_x and conditional states rho_x. Lower
// bound from alternating Uhlmann/marginal updates, upper bound from an
// Alberti-type dual certificate; both sides of the squared objective.
struct MaxFidelityResult {
    CertifiedValue value;
    long iterations = 0;
    Matrix optimizer; // best sigma found
};
MaxFidelityResult max_fidelity_uniform(std::int64_t k, const std::vector<double>& weights,
                                       const std::vector<Matrix>& states,
                                       double tol_gap = default_tolerances().solver_gap,
                                       long cap = 10000,
                                       const Tolerances& tol = default_tolerances());

// Convenience overload: extracts the diagonal blocks of a CQ state.
MaxFidelityResult max_fidelity_uniform(const BipartiteState& rho_xq,
                                       double tol_gap = default_tolerances().solver_gap,
                                       long cap = 10000,
                                       const Tolerances& tol = default_tolerances());

} // namespace cqexp
