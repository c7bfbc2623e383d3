#include "cqexp/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqexp {

namespace {

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

Matrix positive_part(const Matrix& m, const Tolerances& tol) {
    SpectralDecomposition eig = herm_eig(m, tol);
    RVector clamped = eig.eigenvalues.cwiseMax(0.0);
    return eig.eigenvectors * clamped.asDiagonal() * eig.eigenvectors.adjoint();
}

double lambda_max(const Matrix& m, const Tolerances& tol) {
    return herm_eig(m, tol).eigenvalues(0);
}

} // namespace

Ensemble::Ensemble(ProbabilityVector priors_in, std::vector<Matrix> states_in,
                   const Tolerances& tol)
    : priors(std::move(priors_in)), states(std::move(states_in)) {
    if (priors.size() != static_cast<int>(states.size()) || states.empty()) {
        throw ValidationError("Ensemble: need one state per prior");
    }
    for (const Matrix& s : states) {
        if (s.rows() != states[0].rows()) {
            throw ValidationError("Ensemble: states must share one dimension");
        }
        DensityMatrix validate(s, tol);
    }
}

double helstrom(double p0, const Matrix& rho0, double p1, const Matrix& rho1,
                const Tolerances& tol) {
    if (rho0.rows() != rho1.rows()) throw ValidationError("helstrom: dimension mismatch");
    return 0.5 * (1.0 + trace_norm(p0 * rho0 - p1 * rho1, tol));
}

PGMResult pretty_good_measurement(const Ensemble& e, const Tolerances& tol) {
    if (e.size() < 2) throw ValidationError("pretty_good_measurement: need k >= 2");
    const int k = e.size();
    const int dim = e.dim();
    Matrix avg = Matrix::Zero(dim, dim);
    for (int x = 0; x < k; ++x) avg += e.priors[x] * e.states[x];
    const Matrix root = mat_pow(avg, -0.5, tol);

    PGMResult out;
    out.operators.reserve(k);
    for (int x = 0; x < k; ++x) {
        out.operators.push_back(hermitize(root * (e.priors[x] * e.states[x]) * root));
    }
    out.operators[0] += Matrix::Identity(dim, dim) - support_projector(avg, tol);
    for (int x = 0; x < k; ++x) {
        out.success += (out.operators[x] * (e.priors[x] * e.states[x])).trace().real();
    }
    return out;
}

PguessResult pguess(const Ensemble& e, double tol_gap, long cap, const Tolerances& tol) {
    const int k = e.size();
    const int dim = e.dim();

    PguessResult out;
    if (k == 1) {
        out.value = CertifiedValue{1.0, 1.0};
        out.measurement = {Matrix::Identity(dim, dim)};
        out.dual = e.states[0];
        return out;
    }

    std::vector<Matrix> weighted(k);
    for (int x = 0; x < k; ++x) weighted[x] = e.priors[x] * e.states[x];

    std::vector<Matrix> povm = pretty_good_measurement(e, tol).operators;
    double best_lower = 0.0;
    // The average state dominates every weighted member, so it is a dual
    // feasible starter of trace one.
    Matrix best_dual = Matrix::Zero(dim, dim);
    for (int x = 0; x < k; ++x) best_dual += weighted[x];
    out.dual = best_dual;
    double best_upper = 1.0;

    auto primal_value = [&](const std::vector<Matrix>& ops) {
        double value = 0.0;
        for (int x = 0; x < k; ++x) value += (weighted[x] * ops[x]).trace().real();
        return value;
    };

    // Projective polish: for linearly independent pure-state ensembles the
    // optimal measurement is an orthonormal decoding basis, which the
    // fixed-point iteration approaches only linearly. Jacobi-style pairwise
    // rotations of the basis extracted from the decoder operator, with
    // greedy reassignment of basis vectors to hypotheses, converge to such
    // optima at machine precision.
    auto projective_polish = [&](const std::vector<Matrix>& current) {
        Matrix y = Matrix::Zero(dim, dim);
        for (int x = 0; x < k; ++x) y += weighted[x] * current[x];
        Matrix basis = herm_eig(hermitize(y), tol).eigenvectors;
        std::vector<int> assign(dim, 0);
        for (int sweep = 0; sweep < 64; ++sweep) {
            for (int i = 0; i < dim; ++i) {
                double best = -1.0;
                for (int x = 0; x < k; ++x) {
                    const double v =
                        (basis.col(i).adjoint() * weighted[x] * basis.col(i))(0, 0).real();
                    if (v > best) {
                        best = v;
                        assign[i] = x;
                    }
                }
            }
            double max_rotation = 0.0;
            for (int i = 0; i < dim; ++i) {
                for (int j = i + 1; j < dim; ++j) {
                    if (assign[i] == assign[j]) continue;
                    const Matrix d = weighted[assign[i]] - weighted[assign[j]];
                    Eigen::Matrix2cd block;
                    block(0, 0) = (basis.col(i).adjoint() * d * basis.col(i))(0, 0);
                    block(0, 1) = (basis.col(i).adjoint() * d * basis.col(j))(0, 0);
                    block(1, 0) = std::conj(block(0, 1));
                    block(1, 1) = (basis.col(j).adjoint() * d * basis.col(j))(0, 0);
                    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> rot(block);
                    const Eigen::Vector2cd top = rot.eigenvectors().col(1);
                    const Eigen::Vector2cd bottom = rot.eigenvectors().col(0);
                    const CVector ei = basis.col(i) * top(0) + basis.col(j) * top(1);
                    const CVector ej = basis.col(i) * bottom(0) + basis.col(j) * bottom(1);
                    max_rotation = std::max(max_rotation, std::abs(top(1)));
                    basis.col(i) = ei;
                    basis.col(j) = ej;
                }
            }
            if (max_rotation < 1e-15) break;
        }
        std::vector<Matrix> candidate(k, Matrix::Zero(dim, dim));
        for (int i = 0; i < dim; ++i) {
            candidate[assign[i]] += basis.col(i) * basis.col(i).adjoint();
        }
        return candidate;
    };

    // Complementary-slackness rounding: the optimal measurement is supported
    // on the near-kernels of sigma-hat - rho~_x. Rank-deficient optima make
    // the fixed-point tail slow; this jump recovers them directly.
    auto rounded_from_dual = [&](const Matrix& sigma_hat, double current) {
        std::vector<Matrix> best_ops;
        double best_value = current;
        for (double threshold : {1e-3, 1e-5, 1e-7, 1e-9}) {
            std::vector<Matrix> kernels(k, Matrix::Zero(dim, dim));
            Matrix total = Matrix::Zero(dim, dim);
            for (int x = 0; x < k; ++x) {
                const SpectralDecomposition eig =
                    herm_eig(hermitize(sigma_hat - weighted[x]), tol);
                const double scale = std::max(std::abs(eig.eigenvalues(0)), 1e-30);
                for (int i = 0; i < dim; ++i) {
                    if (eig.eigenvalues(i) <= threshold * scale) {
                        kernels[x] += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
                    }
                }
                total += kernels[x];
            }
            if (total.norm() <= 1e-14) continue;
            const Matrix root = mat_pow(total, -0.5, tol);
            std::vector<Matrix> candidate(k);
            for (int x = 0; x < k; ++x) candidate[x] = hermitize(root * kernels[x] * root);
            candidate[0] += Matrix::Identity(dim, dim) - support_projector(total, tol);
            const double value = primal_value(candidate);
            if (value > best_value) {
                best_value = value;
                best_ops = std::move(candidate);
            }
        }
        return best_ops;
    };

    for (long iter = 0; iter <= cap; ++iter) {
        out.iterations = iter;
        if (iter > 0 && iter % 32 == 0) {
            std::vector<Matrix> projective = projective_polish(povm);
            if (primal_value(projective) > primal_value(povm)) povm = std::move(projective);
            std::vector<Matrix> rounded = rounded_from_dual(best_dual, primal_value(povm));
            if (!rounded.empty()) povm = std::move(rounded);
        }
        const double value = primal_value(povm);
        if (value > best_lower) {
            best_lower = value;
            out.measurement = povm;
        }

        Matrix y = Matrix::Zero(dim, dim);
        for (int x = 0; x < k; ++x) y += weighted[x] * povm[x];
        y = hermitize(y);

        // Two dual-feasible candidates: a uniform shift by the worst
        // eigenvalue deficit, and a per-hypothesis positive-part lift.
        double deficit = 0.0;
        Matrix lift = Matrix::Zero(dim, dim);
        for (int x = 0; x < k; ++x) {
            const Matrix diff = weighted[x] - y;
            deficit = std::max(deficit, lambda_max(diff, tol));
            lift += positive_part(diff, tol);
        }
        const Matrix shifted = y + deficit * Matrix::Identity(dim, dim);
        const Matrix lifted = y + lift;
        const Matrix& dual =
            shifted.trace().real() <= lifted.trace().real() ? shifted : lifted;
        const double upper = dual.trace().real();
        if (upper < best_upper) {
            best_upper = upper;
            out.dual = dual;
            best_dual = dual;
        }

        if (best_upper - best_lower <= tol_gap) {
            out.value = CertifiedValue{best_lower, std::max(best_upper, best_lower)};
            return out;
        }
        if (iter == cap) break;

        // Measurement-improvement fixed point.
        Matrix r = Matrix::Zero(dim, dim);
        for (int x = 0; x < k; ++x) r += weighted[x] * povm[x] * weighted[x];
        r = hermitize(r);
        const Matrix rih = mat_pow(r, -0.5, tol);
        std::vector<Matrix> next(k);
        for (int x = 0; x < k; ++x) {
            next[x] = hermitize(rih * weighted[x] * povm[x] * weighted[x] * rih);
        }
        next[0] += Matrix::Identity(dim, dim) - support_projector(r, tol);
        povm = std::move(next);
    }

    std::ostringstream os;
    os << "pguess: certified gap " << best_upper - best_lower << " above tolerance "
       << tol_gap << " after " << cap << " iterations";
    throw SolverError(os.str(), best_lower, best_upper, cap);
}

namespace {

double fidelity_sum(const std::vector<double>& coeff, const std::vector<Matrix>& states,
                    const Matrix& sigma, const Tolerances& tol) {
    double sum = 0.0;
    for (size_t x = 0; x < states.size(); ++x) {
        if (coeff[x] > 0.0) sum += coeff[x] * fidelity(states[x], sigma, tol);
    }
    return sum;
}

// Upper bound on max_sigma sum_x c_x F(rho_x, sigma) from the variational
// form F(rho, sigma) <= (tr[rho W] + tr[sigma W^-1]) / 2, valid for every
// positive W. The minimizing choice near the optimum is
// W = rho^(-1/2) (rho^(1/2) sigma rho^(1/2))^(1/2) rho^(-1/2), taken on the
// support of rho and extended by an arbitrarily large multiple of the
// kernel projector; in that limit the rho term is tr[(rho^(1/2) sigma
// rho^(1/2))^(1/2)] and W^-1 vanishes on the kernel.
double alberti_upper(const std::vector<double>& coeff, const std::vector<Matrix>& states,
                     const Matrix& sigma, const Tolerances& tol) {
    const int dim = static_cast<int>(sigma.rows());
    const double eps = 1e-12;
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix sigma_reg = (1.0 - eps) * sigma + (eps / dim) * id;

    double state_term = 0.0;
    Matrix inv_sum = Matrix::Zero(dim, dim);
    for (size_t x = 0; x < states.size(); ++x) {
        if (coeff[x] <= 0.0) continue;
        const Matrix rho_half = mat_pow(states[x], 0.5, tol);
        const Matrix mid = hermitize(rho_half * sigma_reg * rho_half);
        SpectralDecomposition eig = herm_eig(mid, tol);
        const double top = std::max(eig.eigenvalues(0), 0.0);
        RVector inv_root(eig.eigenvalues.size());
        for (int i = 0; i < eig.eigenvalues.size(); ++i) {
            const double v = eig.eigenvalues(i);
            if (v > tol.support_cutoff * top && v > 0.0) {
                state_term += coeff[x] * std::sqrt(v);
                inv_root(i) = 1.0 / std::sqrt(v);
            } else {
                inv_root(i) = 0.0;
            }
        }
        const Matrix mid_inv_root =
            eig.eigenvectors * inv_root.asDiagonal() * eig.eigenvectors.adjoint();
        inv_sum += coeff[x] * hermitize(rho_half * mid_inv_root * rho_half);
    }
    return 0.5 * state_term + 0.5 * lambda_max(hermitize(inv_sum), tol);
}

} // namespace

MaxFidelityResult max_fidelity_uniform(std::int64_t k, const std::vector<double>& weights,
                                       const std::vector<Matrix>& states, double tol_gap,
                                       long cap, const Tolerances& tol) {
    if (weights.size() != states.size() || states.empty()) {
        throw ValidationError("max_fidelity_uniform: need one state per weight");
    }
    if (k < static_cast<std::int64_t>(weights.size())) {
        throw ValidationError("max_fidelity_uniform: k smaller than block count");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < -1e-12) throw ValidationError("max_fidelity_uniform: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) {
        throw ValidationError("max_fidelity_uniform: weights must sum to one");
    }

    const int dim = static_cast<int>(states[0].rows());
    std::vector<double> coeff(weights.size());
    std::vector<Matrix> roots(weights.size());
    Matrix sigma = Matrix::Zero(dim, dim);
    for (size_t x = 0; x < weights.size(); ++x) {
        coeff[x] = std::sqrt(std::max(weights[x], 0.0) / static_cast<double>(k));
        if (weights[x] > 0.0) {
            roots[x] = mat_pow(states[x], 0.5, tol);
            sigma += weights[x] * states[x];
        }
    }
    sigma = hermitize(sigma);

    MaxFidelityResult out;
    double best_lower = 0.0;
    double best_upper = 1.0;
    for (long iter = 0; iter <= cap; ++iter) {
        out.iterations = iter;
        const double sqrt_value = fidelity_sum(coeff, states, sigma, tol);
        if (sqrt_value * sqrt_value > best_lower) {
            best_lower = sqrt_value * sqrt_value;
            out.optimizer = sigma;
        }
        const double sqrt_upper = alberti_upper(coeff, states, sigma, tol);
        best_upper = std::min(best_upper, std::max(sqrt_upper * sqrt_upper, best_lower));

        if (best_upper - best_lower <= tol_gap) {
            out.value = CertifiedValue{best_lower, best_upper};
            return out;
        }
        if (iter == cap) break;

        // Uhlmann step: optimal unitary per block, then the optimal root.
        const Matrix sigma_half = mat_pow(sigma, 0.5, tol);
        Matrix l = Matrix::Zero(dim, dim);
        for (size_t x = 0; x < weights.size(); ++x) {
            if (coeff[x] <= 0.0) continue;
            const Matrix kx = roots[x] * sigma_half;
            Eigen::JacobiSVD<Matrix> svd(kx, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Matrix ux = svd.matrixV() * svd.matrixU().adjoint();
            l += coeff[x] * ux * roots[x];
        }
        const Matrix h_pos = positive_part(hermitize(l), tol);
        const double norm = h_pos.norm();
        if (norm <= 1e-290) {
            throw SolverError("max_fidelity_uniform: degenerate iterate", best_lower,
                              best_upper, iter);
        }
        sigma = hermitize((h_pos / norm) * (h_pos / norm));
    }

    std::ostringstream os;
    os << "max_fidelity_uniform: certified gap " << best_upper - best_lower
       << " above tolerance " << tol_gap << " after " << cap << " iterations";
    throw SolverError(os.str(), best_lower, best_upper, cap);
}

MaxFidelityResult max_fidelity_uniform(const BipartiteState& rho_xq, double tol_gap,
                                       long cap, const Tolerances& tol) {
    const int k = rho_xq.dimA;
    const int dim = rho_xq.dimB;
    const Matrix& full = rho_xq.state.matrix();
    std::vector<double> weights(k);
    std::vector<Matrix> states(k);
    double off_diag = 0.0;
    for (int x = 0; x < k; ++x) {
        for (int y = 0; y < k; ++y) {
            const Matrix block = full.block(x * dim, y * dim, dim, dim);
            if (x == y) continue;
            off_diag = std::max(off_diag, block.cwiseAbs().maxCoeff());
        }
        const Matrix block = full.block(x * dim, x * dim, dim, dim);
        weights[x] = block.trace().real();
        states[x] = weights[x] > 1e-15 ? Matrix(block / weights[x])
                                       : Matrix(Matrix::Zero(dim, dim));
    }
    if (off_diag > 1e-10) {
        throw ValidationError("max_fidelity_uniform: state is not classical on X");
    }
    return max_fidelity_uniform(k, weights, states, tol_gap, cap, tol);
}

} // namespace cqexp
