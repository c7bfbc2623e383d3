#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cqexp/errors.hpp"
#include "cqexp/tolerances.hpp"

namespace cqexp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Dense Hermitian linear algebra on the support: spectral decompositions,
// fractional powers, fidelity, trace norm, tensor products, partial traces.

bool is_hermitian(const Matrix& m, double tol = default_tolerances().hermiticity);
void require_hermitian(const Matrix& m, const char* who,
                       double tol = default_tolerances().hermiticity);

// Eigenvalues sorted descending; eigenvector phases fixed so the first
// nonzero component of each column is real positive. Deterministic given
// identical floating-point environment.
struct SpectralDecomposition {
    RVector eigenvalues;
    Matrix eigenvectors; // columns

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }
};

SpectralDecomposition herm_eig(const Matrix& m,
                               const Tolerances& tol = default_tolerances());

// A^p on the support: eigenvalues below support_cutoff * lambda_max are
// treated as exactly zero and 0^p := 0 for every p, including p <= 0.
Matrix mat_pow(const Matrix& a, double p, const Tolerances& tol = default_tolerances());

// Projector onto the support of a PSD matrix.
Matrix support_projector(const Matrix& a, const Tolerances& tol = default_tolerances());

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& a, const Tolerances& tol = default_tolerances());

// ||rho^{1/2} sigma^{1/2}||_1, the root fidelity. Accepts PSD inputs.
double fidelity(const Matrix& rho, const Matrix& sigma,
                const Tolerances& tol = default_tolerances());

Matrix kron(const Matrix& a, const Matrix& b);

// Reduce to the subsystems listed in `keep` (ascending indices into `dims`).
Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims,
                     const std::vector<int>& keep);

// Unit-trace PSD matrix; validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, const Tolerances& tol = default_tolerances());

    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

private:
    Matrix m_;
};

DensityMatrix pure_state(const CVector& amplitudes,
                         const Tolerances& tol = default_tolerances());

} // namespace cqexp
