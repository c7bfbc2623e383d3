#pragma once

#include "cqexp/extended.hpp"
#include "cqexp/matrix.hpp"

namespace cqexp {

// Logarithms are base two throughout; rates and entropies are in bits.

struct BipartiteState {
    BipartiteState(DensityMatrix s, int dim_a, int dim_b);

    DensityMatrix state;
    int dimA;
    int dimB;

    Matrix marginal_a() const;
    Matrix marginal_b() const;
};

// Petz Renyi relative entropy of order alpha:
//   (1/(alpha-1)) log tr[rho^alpha sigma^(1-alpha)]
// with support-convention powers. +inf when alpha > 1 and
// supp(rho) is not contained in supp(sigma), or when the states are
// orthogonal and alpha < 1. alpha = 1 dispatches to the Umegaki limit.
ExtendedReal petz_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                             double alpha, const Tolerances& tol = default_tolerances());

// Sandwiched (minimal) Renyi relative entropy:
//   (1/(alpha-1)) log tr[(sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha]
ExtendedReal sandwiched_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double alpha, const Tolerances& tol = default_tolerances());

// Umegaki relative entropy tr[rho(log rho - log sigma)] on the support.
ExtendedReal umegaki_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                const Tolerances& tol = default_tolerances());

// Relaxed variants: the second argument may be any PSD matrix (such as
// id_A (x) sigma_B). Used by the conditional entropies.
ExtendedReal petz_divergence_psd(const Matrix& rho, const Matrix& sigma, double alpha,
                                 const Tolerances& tol = default_tolerances());
ExtendedReal sandwiched_divergence_psd(const Matrix& rho, const Matrix& sigma, double alpha,
                                       const Tolerances& tol = default_tolerances());
ExtendedReal umegaki_divergence_psd(const Matrix& rho, const Matrix& sigma,
                                    const Tolerances& tol = default_tolerances());

// Optimizing marginal of the Petz conditional entropy (quantum Sibson
// identity): normalize((tr_A[rho_AB^alpha])^(1/alpha)).
DensityMatrix sibson_optimizer(const BipartiteState& rho_ab, double alpha,
                               const Tolerances& tol = default_tolerances());

// H-bar_alpha^up(A|B): -D-bar_alpha(rho_AB, id_A (x) sigma*_B) with the
// Sibson optimizer. alpha = 1 gives the von Neumann conditional entropy.
double cond_entropy_petz_up(const BipartiteState& rho_ab, double alpha,
                            const Tolerances& tol = default_tolerances());

// H-tilde_alpha^down(A|B): -D-tilde_alpha(rho_AB, id_A (x) rho_B).
double cond_entropy_sand_down(const BipartiteState& rho_ab, double alpha,
                              const Tolerances& tol = default_tolerances());

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol = default_tolerances());
double von_neumann_cond(const BipartiteState& rho_ab,
                        const Tolerances& tol = default_tolerances());

} // namespace cqexp
