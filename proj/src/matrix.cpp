#include "cqexp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cqexp {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, max_abs(m));
    return max_abs(m - m.adjoint()) <= tol * scale;
}

void require_hermitian(const Matrix& m, const char* who, double tol) {
    if (!is_hermitian(m, tol)) {
        std::ostringstream os;
        os << who << ": matrix is not Hermitian within tolerance " << tol;
        throw ValidationError(os.str());
    }
}

SpectralDecomposition herm_eig(const Matrix& m, const Tolerances& tol) {
    require_hermitian(m, "herm_eig", tol.hermiticity);
    const Matrix sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("herm_eig: eigensolver failed to converge");
    }

    const int n = static_cast<int>(m.rows());
    SpectralDecomposition out;
    out.eigenvalues = RVector(n);
    out.eigenvectors = Matrix(n, n);
    // Eigen returns ascending order; flip to descending.
    for (int k = 0; k < n; ++k) {
        out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    // Phase convention: first nonzero component real positive.
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const Complex v = out.eigenvectors(i, k);
            if (std::abs(v) > tol.phase_pivot) {
                out.eigenvectors.col(k) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
    return out;
}

namespace {

// Eigenvalues of a PSD matrix, clamped to the support convention.
// Throws if a negative eigenvalue exceeds tolerance.
struct SupportEig {
    RVector eigenvalues; // clamped, zero outside support
    Matrix eigenvectors;
};

SupportEig support_eig(const Matrix& a, const char* who, const Tolerances& tol) {
    SpectralDecomposition eig = herm_eig(a, tol);
    const double lmax = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
    const double floor = tol.psd_floor * std::max(1.0, lmax);
    const double cutoff = tol.support_cutoff * std::max(lmax, 0.0);
    SupportEig out{eig.eigenvalues, std::move(eig.eigenvectors)};
    for (int i = 0; i < out.eigenvalues.size(); ++i) {
        const double v = out.eigenvalues(i);
        if (v < floor) {
            std::ostringstream os;
            os << who << ": negative eigenvalue " << v << " beyond tolerance";
            throw ValidationError(os.str());
        }
        out.eigenvalues(i) = (v <= cutoff) ? 0.0 : v;
    }
    return out;
}

} // namespace

Matrix mat_pow(const Matrix& a, double p, const Tolerances& tol) {
    if (!std::isfinite(p)) throw ValidationError("mat_pow: exponent must be finite");
    if (p == 1.0) {
        require_hermitian(a, "mat_pow", tol.hermiticity);
        return (a + a.adjoint()) / 2.0;
    }
    SupportEig eig = support_eig(a, "mat_pow", tol);
    RVector powered(eig.eigenvalues.size());
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        const double v = eig.eigenvalues(i);
        powered(i) = (v == 0.0) ? 0.0 : std::pow(v, p);
    }
    return eig.eigenvectors * powered.asDiagonal() * eig.eigenvectors.adjoint();
}

Matrix support_projector(const Matrix& a, const Tolerances& tol) {
    SupportEig eig = support_eig(a, "support_projector", tol);
    RVector indicator(eig.eigenvalues.size());
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        indicator(i) = eig.eigenvalues(i) > 0.0 ? 1.0 : 0.0;
    }
    return eig.eigenvectors * indicator.asDiagonal() * eig.eigenvectors.adjoint();
}

double trace_norm(const Matrix& a, const Tolerances& tol) {
    SpectralDecomposition eig = herm_eig(a, tol);
    return eig.eigenvalues.cwiseAbs().sum();
}

double fidelity(const Matrix& rho, const Matrix& sigma, const Tolerances& tol) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw ValidationError("fidelity: dimension mismatch");
    }
    const Matrix product = mat_pow(rho, 0.5, tol) * mat_pow(sigma, 0.5, tol);
    Eigen::JacobiSVD<Matrix> svd(product);
    return svd.singularValues().sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
    long total = 1;
    for (int d : dims) {
        if (d <= 0) throw ValidationError("partial_trace: subsystem dims must be positive");
        total *= d;
    }
    if (total != rho.rows() || rho.rows() != rho.cols()) {
        throw ValidationError("partial_trace: product of dims does not match matrix dimension");
    }
    for (size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= static_cast<int>(dims.size())) {
            throw ValidationError("partial_trace: keep index out of range");
        }
        if (i > 0 && keep[i] <= keep[i - 1]) {
            throw ValidationError("partial_trace: keep indices must be strictly increasing");
        }
    }

    std::vector<int> traced;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);
    }

    // Strides of each subsystem in the flattened row-major index.
    std::vector<long> stride(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
        stride[i] = stride[i + 1] * dims[i + 1];
    }

    long dim_keep = 1, dim_traced = 1;
    for (int i : keep) dim_keep *= dims[i];
    for (int i : traced) dim_traced *= dims[i];

    auto expand = [&](long composite, const std::vector<int>& subs) {
        long idx = 0;
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            const int s = subs[i];
            idx += (composite % dims[s]) * stride[s];
            composite /= dims[s];
        }
        return idx;
    };

    Matrix out = Matrix::Zero(dim_keep, dim_keep);
    for (long r = 0; r < dim_keep; ++r) {
        const long rbase = expand(r, keep);
        for (long c = 0; c < dim_keep; ++c) {
            const long cbase = expand(c, keep);
            Complex sum = 0.0;
            for (long t = 0; t < dim_traced; ++t) {
                const long off = expand(t, traced);
                sum += rho(rbase + off, cbase + off);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
    require_hermitian(m_, "DensityMatrix", tol.hermiticity);
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace_one) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr << " differs from 1 beyond tolerance";
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver((m_ + m_.adjoint()) / 2.0);
    if (solver.eigenvalues().minCoeff() < tol.psd_floor) {
        std::ostringstream os;
        os << "DensityMatrix: eigenvalue " << solver.eigenvalues().minCoeff()
           << " below admissible floor";
        throw ValidationError(os.str());
    }
}

DensityMatrix pure_state(const CVector& amplitudes, const Tolerances& tol) {
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw ValidationError("pure_state: amplitudes are not normalized");
    }
    return DensityMatrix(amplitudes * amplitudes.adjoint() / (norm * norm), tol);
}

} // namespace cqexp
