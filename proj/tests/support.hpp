#pragma once

// Shared test utilities: deterministic random instances and independent
// classical oracles. The oracles use plain scalar arithmetic on
// probability vectors only, so they share no code path with the library
// implementations they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cqexp/entropy.hpp"
#include "cqexp/matrix.hpp"
#include "cqexp/rng.hpp"
#include "cqexp/states.hpp"

namespace testsupport {

using cqexp::CVector;
using cqexp::Complex;
using cqexp::Matrix;

inline CVector random_unit_vector(cqexp::DeterministicRng& rng, int dim) {
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
    return v / v.norm();
}

inline Matrix random_density(cqexp::DeterministicRng& rng, int dim, int rank = -1) {
    if (rank < 1) rank = dim;
    Matrix g(dim, rank);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < rank; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline Matrix random_hermitian(cqexp::DeterministicRng& rng, int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    return (g + g.adjoint()) / 2.0;
}

inline std::vector<double> random_distribution(cqexp::DeterministicRng& rng, int n) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        p[i] = -std::log(std::max(rng.uniform01(), 1e-12)) + 0.05;
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

inline cqexp::CQChannel random_pure_channel(cqexp::DeterministicRng& rng, int d, int dim) {
    std::vector<cqexp::DensityMatrix> outputs;
    for (int z = 0; z < d; ++z) outputs.push_back(cqexp::pure_state(random_unit_vector(rng, dim)));
    return cqexp::CQChannel(std::move(outputs));
}

inline cqexp::CQChannel random_mixed_channel(cqexp::DeterministicRng& rng, int d, int dim,
                                             int rank = -1) {
    std::vector<cqexp::DensityMatrix> outputs;
    for (int z = 0; z < d; ++z) {
        outputs.emplace_back(random_density(rng, dim, rank));
    }
    return cqexp::CQChannel(std::move(outputs));
}

// Random pure tripartite state as a bipartite pair of marginals.
struct Tripartite {
    cqexp::BipartiteState ab;
    cqexp::BipartiteState ac;
};

inline Tripartite random_tripartite(cqexp::DeterministicRng& rng, int da, int db, int dc) {
    const CVector psi = random_unit_vector(rng, da * db * dc);
    const Matrix full = psi * psi.adjoint();
    const Matrix rho_ab = cqexp::partial_trace(full, {da, db, dc}, {0, 1});
    const Matrix rho_ac = cqexp::partial_trace(full, {da, db, dc}, {0, 2});
    return Tripartite{
        cqexp::BipartiteState(cqexp::DensityMatrix(rho_ab), da, db),
        cqexp::BipartiteState(cqexp::DensityMatrix(rho_ac), da, dc),
    };
}

// ---- classical oracles -------------------------------------------------

inline double classical_renyi_divergence(const std::vector<double>& p,
                                         const std::vector<double>& q, double alpha) {
    double t = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0 && q[i] > 0.0) t += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
    }
    return std::log2(t) / (alpha - 1.0);
}

inline double classical_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double t = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) t += p[i] * (std::log2(p[i]) - std::log2(q[i]));
    }
    return t;
}

// E_0 for a discrete memoryless channel, W[y][x] = W(y|x).
inline double classical_gallager_e0(double s, const std::vector<double>& p,
                                    const std::vector<std::vector<double>>& w) {
    const double inv = 1.0 / (1.0 + s);
    double total = 0.0;
    for (const std::vector<double>& row : w) {
        double inner = 0.0;
        for (size_t x = 0; x < p.size(); ++x) {
            if (p[x] > 0.0 && row[x] > 0.0) inner += p[x] * std::pow(row[x], inv);
        }
        total += std::pow(inner, 1.0 + s);
    }
    return -std::log2(total);
}

inline std::vector<std::vector<double>> bsc_transition(double p) {
    return {{1.0 - p, p}, {p, 1.0 - p}};
}

inline double classical_bsc_e0(double s, double p) {
    const double inv = 1.0 / (1.0 + s);
    return s - (1.0 + s) * std::log2(std::pow(p, inv) + std::pow(1.0 - p, inv));
}

// Dense scan plus local refinement; independent of the library optimizer.
inline double scan_maximize(const std::function<double(double)>& f, double lo, double hi,
                            int coarse = 4096, int refine_rounds = 40) {
    double best_x = lo, best = f(lo);
    for (int i = 0; i <= coarse; ++i) {
        const double x = lo + (hi - lo) * i / coarse;
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - (hi - lo) / coarse);
    double b = std::min(hi, best_x + (hi - lo) / coarse);
    for (int round = 0; round < refine_rounds; ++round) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (f(m1) < f(m2)) {
            a = m1;
        } else {
            b = m2;
        }
    }
    const double x = 0.5 * (a + b);
    return std::max(best, f(x));
}

// Optimal classical MAP guessing value sum_y max_x p_x W(y|x).
inline double classical_map_value(const std::vector<double>& priors,
                                  const std::vector<std::vector<double>>& w) {
    double total = 0.0;
    for (const std::vector<double>& row : w) {
        double best = 0.0;
        for (size_t x = 0; x < priors.size(); ++x) best = std::max(best, priors[x] * row[x]);
        total += best;
    }
    return total;
}

// Classical Sibson-optimized conditional Renyi entropy of a joint pmf
// P[z][b], H_alpha_up(Z|B) = alpha/(1-alpha) log sum_b (sum_z P^alpha)^(1/alpha).
inline double classical_cond_renyi_up(const std::vector<std::vector<double>>& joint,
                                      double alpha) {
    const size_t cols = joint[0].size();
    double outer = 0.0;
    for (size_t b = 0; b < cols; ++b) {
        double inner = 0.0;
        for (size_t z = 0; z < joint.size(); ++z) {
            if (joint[z][b] > 0.0) inner += std::pow(joint[z][b], alpha);
        }
        outer += std::pow(inner, 1.0 / alpha);
    }
    return alpha / (1.0 - alpha) * std::log2(outer);
}

inline double classical_cond_entropy(const std::vector<std::vector<double>>& joint) {
    double h_joint = 0.0, h_b = 0.0;
    const size_t cols = joint[0].size();
    for (size_t b = 0; b < cols; ++b) {
        double pb = 0.0;
        for (size_t z = 0; z < joint.size(); ++z) {
            pb += joint[z][b];
            if (joint[z][b] > 0.0) h_joint -= joint[z][b] * std::log2(joint[z][b]);
        }
        if (pb > 0.0) h_b -= pb * std::log2(pb);
    }
    return h_joint - h_b;
}

// Diagonal embedding of a classical channel column pmf per input.
inline cqexp::CQChannel diagonal_channel(const std::vector<std::vector<double>>& w) {
    const size_t d = w[0].size();
    const size_t ydim = w.size();
    std::vector<cqexp::DensityMatrix> outputs;
    for (size_t x = 0; x < d; ++x) {
        Matrix m = Matrix::Zero(ydim, ydim);
        for (size_t y = 0; y < ydim; ++y) m(y, y) = w[y][x];
        outputs.emplace_back(std::move(m));
    }
    return cqexp::CQChannel(std::move(outputs));
}

inline cqexp::CQChannel bsc_embedding(double p) { return diagonal_channel(bsc_transition(p)); }

} // namespace testsupport
