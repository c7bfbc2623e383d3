#include "cqexp/entropy.hpp"

#include <cmath>
#include <sstream>

namespace cqexp {

namespace {

constexpr double kLog2e = 1.4426950408889634; // log2(e)

void require_alpha(double alpha) {
    if (!(alpha > 0.0)) {
        std::ostringstream os;
        os << "Renyi order must be positive, got " << alpha;
        throw ValidationError(os.str());
    }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << who << ": dimension mismatch " << a.rows() << " vs " << b.rows();
        throw ValidationError(os.str());
    }
}

// Mass of rho outside the support of sigma.
double mass_outside_support(const Matrix& rho, const Matrix& sigma, const Tolerances& tol) {
    const Matrix kernel =
        Matrix::Identity(sigma.rows(), sigma.cols()) - support_projector(sigma, tol);
    return (kernel * rho).trace().real();
}

double safe_log2(double x) {
    return std::log2(std::max(x, 1e-300));
}

} // namespace

BipartiteState::BipartiteState(DensityMatrix s, int dim_a, int dim_b)
    : state(std::move(s)), dimA(dim_a), dimB(dim_b) {
    if (dimA < 1 || dimB < 1 || dimA * dimB != state.dim()) {
        throw ValidationError("BipartiteState: dimA * dimB must equal state dimension");
    }
}

Matrix BipartiteState::marginal_a() const {
    return partial_trace(state.matrix(), {dimA, dimB}, {0});
}

Matrix BipartiteState::marginal_b() const {
    return partial_trace(state.matrix(), {dimA, dimB}, {1});
}

ExtendedReal petz_divergence_psd(const Matrix& rho, const Matrix& sigma, double alpha,
                                 const Tolerances& tol) {
    require_alpha(alpha);
    require_same_dim(rho, sigma, "petz_divergence");
    if (alpha == 1.0) return umegaki_divergence_psd(rho, sigma, tol);
    if (alpha > 1.0 && mass_outside_support(rho, sigma, tol) > tol.support_violation) {
        return ExtendedReal::infinity();
    }
    const double t = (mat_pow(rho, alpha, tol) * mat_pow(sigma, 1.0 - alpha, tol))
                         .trace()
                         .real();
    if (alpha < 1.0 && t <= tol.support_violation * tol.support_violation) {
        return ExtendedReal::infinity(); // orthogonal supports
    }
    return ExtendedReal(safe_log2(t) / (alpha - 1.0));
}

ExtendedReal sandwiched_divergence_psd(const Matrix& rho, const Matrix& sigma, double alpha,
                                       const Tolerances& tol) {
    require_alpha(alpha);
    require_same_dim(rho, sigma, "sandwiched_divergence");
    if (alpha == 1.0) return umegaki_divergence_psd(rho, sigma, tol);
    if (alpha > 1.0 && mass_outside_support(rho, sigma, tol) > tol.support_violation) {
        return ExtendedReal::infinity();
    }
    const Matrix s = mat_pow(sigma, (1.0 - alpha) / (2.0 * alpha), tol);
    const Matrix sandwiched = s * rho * s;
    SpectralDecomposition eig = herm_eig(sandwiched, tol);
    const double lmax = eig.eigenvalues.size() > 0 ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
    double t = 0.0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        const double v = eig.eigenvalues(i);
        if (v > tol.support_cutoff * lmax && v > 0.0) t += std::pow(v, alpha);
    }
    if (alpha < 1.0 && t <= tol.support_violation * tol.support_violation) {
        return ExtendedReal::infinity();
    }
    return ExtendedReal(safe_log2(t) / (alpha - 1.0));
}

ExtendedReal umegaki_divergence_psd(const Matrix& rho, const Matrix& sigma,
                                    const Tolerances& tol) {
    require_same_dim(rho, sigma, "umegaki_divergence");
    if (mass_outside_support(rho, sigma, tol) > tol.support_violation) {
        return ExtendedReal::infinity();
    }
    SpectralDecomposition rho_eig = herm_eig(rho, tol);
    double rho_log_term = 0.0;
    const double rho_max = rho_eig.eigenvalues.size() > 0 ? rho_eig.eigenvalues(0) : 0.0;
    for (int i = 0; i < rho_eig.eigenvalues.size(); ++i) {
        const double v = rho_eig.eigenvalues(i);
        if (v > tol.support_cutoff * std::max(rho_max, 0.0) && v > 0.0) {
            rho_log_term += v * std::log2(v);
        }
    }
    SpectralDecomposition sig_eig = herm_eig(sigma, tol);
    const double sig_max = sig_eig.eigenvalues.size() > 0 ? sig_eig.eigenvalues(0) : 0.0;
    RVector logs(sig_eig.eigenvalues.size());
    for (int i = 0; i < sig_eig.eigenvalues.size(); ++i) {
        const double v = sig_eig.eigenvalues(i);
        logs(i) = (v > tol.support_cutoff * std::max(sig_max, 0.0) && v > 0.0)
                      ? std::log2(v)
                      : 0.0; // support convention; excluded mass checked above
    }
    const Matrix log_sigma =
        sig_eig.eigenvectors * logs.asDiagonal() * sig_eig.eigenvectors.adjoint();
    const double cross = (rho * log_sigma).trace().real();
    return ExtendedReal(rho_log_term - cross);
}

ExtendedReal petz_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                             double alpha, const Tolerances& tol) {
    return petz_divergence_psd(rho.matrix(), sigma.matrix(), alpha, tol);
}

ExtendedReal sandwiched_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double alpha, const Tolerances& tol) {
    return sandwiched_divergence_psd(rho.matrix(), sigma.matrix(), alpha, tol);
}

ExtendedReal umegaki_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                const Tolerances& tol) {
    return umegaki_divergence_psd(rho.matrix(), sigma.matrix(), tol);
}

DensityMatrix sibson_optimizer(const BipartiteState& rho_ab, double alpha,
                               const Tolerances& tol) {
    require_alpha(alpha);
    const Matrix powered = mat_pow(rho_ab.state.matrix(), alpha, tol);
    Matrix reduced = partial_trace(powered, {rho_ab.dimA, rho_ab.dimB}, {1});
    // The normalization makes the result scale-invariant; dividing by the
    // top eigenvalue first keeps the 1/alpha power finite for small alpha.
    const double top = herm_eig(reduced, tol).eigenvalues(0);
    if (top <= 0.0) throw ValidationError("sibson_optimizer: degenerate input state");
    const Matrix root = mat_pow(reduced / top, 1.0 / alpha, tol);
    const double norm = root.trace().real();
    if (norm <= 0.0) throw ValidationError("sibson_optimizer: degenerate input state");
    return DensityMatrix(root / norm, tol);
}

namespace {

double finite_or_throw(const ExtendedReal& v, const char* who) {
    if (v.is_infinite()) {
        std::ostringstream os;
        os << who << ": divergence is infinite for a valid state, input is degenerate";
        throw ValidationError(os.str());
    }
    return v.value();
}

} // namespace

double cond_entropy_petz_up(const BipartiteState& rho_ab, double alpha,
                            const Tolerances& tol) {
    require_alpha(alpha);
    if (alpha == 1.0) return von_neumann_cond(rho_ab, tol);
    const DensityMatrix opt = sibson_optimizer(rho_ab, alpha, tol);
    const Matrix ref = kron(Matrix::Identity(rho_ab.dimA, rho_ab.dimA), opt.matrix());
    const ExtendedReal d = petz_divergence_psd(rho_ab.state.matrix(), ref, alpha, tol);
    return -finite_or_throw(d, "cond_entropy_petz_up");
}

double cond_entropy_sand_down(const BipartiteState& rho_ab, double alpha,
                              const Tolerances& tol) {
    require_alpha(alpha);
    if (alpha == 1.0) return von_neumann_cond(rho_ab, tol);
    const Matrix ref = kron(Matrix::Identity(rho_ab.dimA, rho_ab.dimA), rho_ab.marginal_b());
    const ExtendedReal d = sandwiched_divergence_psd(rho_ab.state.matrix(), ref, alpha, tol);
    return -finite_or_throw(d, "cond_entropy_sand_down");
}

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol) {
    SpectralDecomposition eig = herm_eig(rho, tol);
    const double lmax = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
    double h = 0.0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        const double v = eig.eigenvalues(i);
        if (v > tol.support_cutoff * std::max(lmax, 0.0) && v > 0.0) {
            h -= v * std::log2(v);
        }
    }
    return h;
}

double von_neumann_cond(const BipartiteState& rho_ab, const Tolerances& tol) {
    return von_neumann_entropy(rho_ab.state.matrix(), tol) -
           von_neumann_entropy(rho_ab.marginal_b(), tol);
}

} // namespace cqexp
