#include "cqexp/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace cqexp {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<Complex> omega_table(std::int64_t d) {
    std::vector<Complex> w(d);
    for (std::int64_t k = 0; k < d; ++k) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d);
        w[k] = Complex(std::cos(phase), std::sin(phase));
    }
    return w;
}

} // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> p, const Tolerances& tol)
    : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("ProbabilityVector: empty");
    double sum = 0.0;
    for (double& v : p_) {
        if (v < -tol.prob_sum) {
            throw ValidationError("ProbabilityVector: negative probability");
        }
        v = std::max(v, 0.0);
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol.prob_sum) {
        std::ostringstream os;
        os << "ProbabilityVector: sum " << sum << " differs from 1 beyond tolerance";
        throw ValidationError(os.str());
    }
}

ProbabilityVector ProbabilityVector::uniform(int n) {
    return ProbabilityVector(std::vector<double>(n, 1.0 / n));
}

CQChannel::CQChannel(std::vector<DensityMatrix> outputs, const Tolerances&)
    : outputs_(std::move(outputs)) {
    if (outputs_.size() < 2) throw ValidationError("CQChannel: need at least two inputs");
    for (const DensityMatrix& m : outputs_) {
        if (m.dim() != outputs_[0].dim()) {
            throw ValidationError("CQChannel: outputs must share one dimension");
        }
    }
}

BipartiteState build_cq_state(const ProbabilityVector& p, const CQChannel& w) {
    if (p.size() != w.d()) {
        throw ValidationError("build_cq_state: distribution size differs from alphabet");
    }
    const int d = static_cast<int>(w.d());
    const int b = w.output_dim();
    Matrix state = Matrix::Zero(d * b, d * b);
    for (int z = 0; z < d; ++z) {
        state.block(z * b, z * b, b, b) = p[z] * w.output(z).matrix();
    }
    return BipartiteState(DensityMatrix(std::move(state)), d, b);
}

std::int64_t PurifiedSource::dim_a_total() const { return ipow(d, copies); }
std::int64_t PurifiedSource::dim_aprime_total() const { return ipow(d, copies); }
std::int64_t PurifiedSource::dim_b_total() const { return ipow(dim_b, copies); }
std::int64_t PurifiedSource::dim_c_total() const { return ipow(dim_c, copies); }

namespace {

void check_pure_dim(std::int64_t dim, const Budget& budget) {
    if (dim > static_cast<std::int64_t>(budget.max_pure_dim)) {
        std::ostringstream os;
        os << "pure-state dimension " << dim << " exceeds budget " << budget.max_pure_dim;
        throw ResourceError(os.str());
    }
}

// Eigenpairs of each output above the support cutoff.
struct OutputSpectrum {
    std::vector<RVector> values;
    std::vector<Matrix> vectors;
    int max_rank = 1;
};

OutputSpectrum output_spectra(const CQChannel& w, const Tolerances& tol) {
    OutputSpectrum s;
    for (std::int64_t z = 0; z < w.d(); ++z) {
        SpectralDecomposition eig = herm_eig(w.output(z).matrix(), tol);
        const double lmax = std::max(eig.eigenvalues(0), 0.0);
        int rank = 0;
        for (int i = 0; i < eig.eigenvalues.size(); ++i) {
            if (eig.eigenvalues(i) > tol.support_cutoff * lmax) ++rank;
        }
        s.max_rank = std::max(s.max_rank, std::max(rank, 1));
        s.values.push_back(std::move(eig.eigenvalues));
        s.vectors.push_back(std::move(eig.eigenvectors));
    }
    return s;
}

} // namespace

PurifiedSource purify_source(const ProbabilityVector& p, const CQChannel& w,
                             const Tolerances& tol, const Budget& budget) {
    if (p.size() != w.d()) {
        throw ValidationError("purify_source: distribution size differs from alphabet");
    }
    const std::int64_t d = w.d();
    const int b = w.output_dim();
    const OutputSpectrum spectra = output_spectra(w, tol);
    const int c = spectra.max_rank;
    check_pure_dim(d * d * b * c, budget);

    PurifiedSource psi;
    psi.d = d;
    psi.copies = 1;
    psi.dim_b = b;
    psi.dim_c = c;
    psi.distribution = p.values();
    psi.amplitudes = CVector::Zero(d * d * b * c);
    for (std::int64_t z = 0; z < d; ++z) {
        const double root_p = std::sqrt(p[static_cast<int>(z)]);
        for (int j = 0; j < c && j < b; ++j) {
            const double lambda = std::max(spectra.values[z](j), 0.0);
            if (lambda <= 0.0) continue;
            const double root_l = std::sqrt(lambda);
            for (int bi = 0; bi < b; ++bi) {
                const std::int64_t idx = ((z * d + z) * b + bi) * c + j;
                psi.amplitudes(idx) = root_p * root_l * spectra.vectors[z](bi, j);
            }
        }
    }
    return psi;
}

PurifiedSource build_conjugate_source(const ProbabilityVector& p, const CQChannel& w,
                                      const Tolerances& tol, const Budget& budget) {
    if (p.size() != w.d()) {
        throw ValidationError("build_conjugate_source: distribution size differs from alphabet");
    }
    const std::int64_t d = w.d();
    const int cdim = w.output_dim(); // side information lives on C
    const OutputSpectrum spectra = output_spectra(w, tol);
    const int bdim = spectra.max_rank; // purifying ancilla
    check_pure_dim(d * d * bdim * cdim, budget);
    const std::vector<Complex> omega = omega_table(d);

    PurifiedSource psi;
    psi.d = d;
    psi.copies = 1;
    psi.dim_b = bdim;
    psi.dim_c = cdim;
    psi.distribution = p.values();
    psi.amplitudes = CVector::Zero(d * d * bdim * cdim);
    const double root_d = std::sqrt(static_cast<double>(d));
    for (std::int64_t x = 0; x < d; ++x) {
        const double root_p = std::sqrt(p[static_cast<int>(x)]);
        for (int j = 0; j < bdim && j < cdim; ++j) {
            const double lambda = std::max(spectra.values[x](j), 0.0);
            if (lambda <= 0.0) continue;
            const double root_l = std::sqrt(lambda);
            for (int ci = 0; ci < cdim; ++ci) {
                const Complex theta_amp = root_l * spectra.vectors[x](ci, j);
                for (std::int64_t a = 0; a < d; ++a) {
                    // <a|x~> = omega^(a x) / sqrt(d)
                    const std::int64_t idx = ((a * d + x) * bdim + j) * cdim + ci;
                    psi.amplitudes(idx) +=
                        root_p * omega[(a * x) % d] / root_d * theta_amp;
                }
            }
        }
    }
    return psi;
}

namespace {

struct KeepLayout {
    std::vector<std::int64_t> dims;      // [A', B, C] totals
    std::vector<bool> kept;              // per subsystem
    std::int64_t kept_dim = 1;
    std::int64_t traced_dim = 1;
};

KeepLayout keep_layout(const PurifiedSource& psi, const std::vector<Subsystem>& keep) {
    if (keep.empty()) throw ValidationError("measurement: keep set must be non-empty");
    std::set<Subsystem> selected(keep.begin(), keep.end());
    KeepLayout layout;
    layout.dims = {psi.dim_aprime_total(), psi.dim_b_total(), psi.dim_c_total()};
    layout.kept = {selected.count(Subsystem::APrime) > 0, selected.count(Subsystem::B) > 0,
                   selected.count(Subsystem::C) > 0};
    for (int i = 0; i < 3; ++i) {
        (layout.kept[i] ? layout.kept_dim : layout.traced_dim) *= layout.dims[i];
    }
    return layout;
}

// Conditional block from an unnormalized post-measurement vector on A'BC.
Matrix block_from_vector(const CVector& v, const KeepLayout& layout) {
    Matrix grouped(layout.kept_dim, layout.traced_dim);
    std::int64_t idx = 0;
    for (std::int64_t i0 = 0; i0 < layout.dims[0]; ++i0) {
        for (std::int64_t i1 = 0; i1 < layout.dims[1]; ++i1) {
            for (std::int64_t i2 = 0; i2 < layout.dims[2]; ++i2, ++idx) {
                std::int64_t k = 0, t = 0;
                const std::int64_t comp[3] = {i0, i1, i2};
                for (int s = 0; s < 3; ++s) {
                    if (layout.kept[s]) {
                        k = k * layout.dims[s] + comp[s];
                    } else {
                        t = t * layout.dims[s] + comp[s];
                    }
                }
                grouped(k, t) = v(idx);
            }
        }
    }
    return grouped * grouped.adjoint();
}

MeasuredBlocks measure_blocks(const PurifiedSource& psi, const std::vector<Subsystem>& keep,
                              bool conjugate_basis) {
    const KeepLayout layout = keep_layout(psi, keep);
    const std::int64_t da = psi.dim_a_total();
    const std::int64_t rest = psi.amplitudes.size() / da;
    const std::vector<Complex> omega = omega_table(psi.d);

    MeasuredBlocks out;
    out.outcomes = da;
    out.weights.resize(da, 0.0);
    out.states.resize(da);
    const double scale = 1.0 / std::sqrt(static_cast<double>(da));
    for (std::int64_t x = 0; x < da; ++x) {
        CVector v;
        if (conjugate_basis) {
            v = CVector::Zero(rest);
            const FieldVector xd = decode_digits(x, psi.d, psi.copies);
            for (std::int64_t a = 0; a < da; ++a) {
                const FieldVector ad = decode_digits(a, psi.d, psi.copies);
                std::int64_t dot = 0;
                for (int i = 0; i < psi.copies; ++i) dot += xd[i] * ad[i];
                // <x~^n|a^n> = d^(-n/2) omega^(-x.a)
                const Complex coeff = scale * std::conj(omega[dot % psi.d]);
                v += coeff * psi.amplitudes.segment(a * rest, rest);
            }
        } else {
            v = psi.amplitudes.segment(x * rest, rest);
        }
        Matrix block = block_from_vector(v, layout);
        const double weight = block.trace().real();
        out.weights[x] = std::max(weight, 0.0);
        if (weight > 1e-15) {
            out.states[x] = block / weight;
        } else {
            out.states[x] = Matrix::Zero(layout.kept_dim, layout.kept_dim);
        }
    }
    return out;
}

} // namespace

MeasuredBlocks measure_conjugate_blocks(const PurifiedSource& psi,
                                        const std::vector<Subsystem>& keep) {
    return measure_blocks(psi, keep, true);
}

MeasuredBlocks measure_computational_blocks(const PurifiedSource& psi,
                                            const std::vector<Subsystem>& keep) {
    return measure_blocks(psi, keep, false);
}

BipartiteState MeasuredBlocks::to_bipartite(const Tolerances& tol) const {
    const std::int64_t block_dim = states.empty() ? 1 : states[0].rows();
    Matrix state = Matrix::Zero(outcomes * block_dim, outcomes * block_dim);
    for (std::int64_t x = 0; x < outcomes; ++x) {
        state.block(x * block_dim, x * block_dim, block_dim, block_dim) =
            weights[x] * states[x];
    }
    return BipartiteState(DensityMatrix(std::move(state), tol),
                          static_cast<int>(outcomes), static_cast<int>(block_dim));
}

BipartiteState measure_conjugate(const PurifiedSource& psi,
                                 const std::vector<Subsystem>& keep,
                                 const Tolerances& tol) {
    return measure_conjugate_blocks(psi, keep).to_bipartite(tol);
}

PurifiedSource tensor_power(const PurifiedSource& psi, int n, const Budget& budget) {
    if (n < 1) throw ValidationError("tensor_power: n must be positive");
    if (n == 1) return psi;
    const std::int64_t unit = psi.amplitudes.size();
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(unit);
    if (total > static_cast<double>(budget.max_pure_dim)) {
        throw ResourceError("tensor_power: total dimension exceeds budget");
    }

    PurifiedSource out;
    out.d = psi.d;
    out.copies = psi.copies * n;
    out.dim_b = psi.dim_b;
    out.dim_c = psi.dim_c;
    out.distribution = psi.distribution;
    const std::int64_t da = psi.dim_a_total();
    const std::int64_t db = psi.dim_b_total();
    const std::int64_t dc = psi.dim_c_total();
    const std::int64_t out_da = ipow(da, n);
    const std::int64_t out_db = ipow(db, n);
    const std::int64_t out_dc = ipow(dc, n);
    out.amplitudes = CVector(out_da * out_da * out_db * out_dc);

    std::vector<std::int64_t> ai(n), pi(n), bi(n), ci(n);
    auto split = [n](std::int64_t idx, std::int64_t radix, std::vector<std::int64_t>& digits) {
        for (int i = n - 1; i >= 0; --i) {
            digits[i] = idx % radix;
            idx /= radix;
        }
    };
    std::int64_t flat = 0;
    for (std::int64_t a = 0; a < out_da; ++a) {
        split(a, da, ai);
        for (std::int64_t ap = 0; ap < out_da; ++ap) {
            split(ap, da, pi);
            for (std::int64_t b = 0; b < out_db; ++b) {
                split(b, db, bi);
                for (std::int64_t c = 0; c < out_dc; ++c, ++flat) {
                    split(c, dc, ci);
                    Complex amp = 1.0;
                    for (int i = 0; i < n && amp != Complex(0.0); ++i) {
                        amp *= psi.amplitudes(((ai[i] * da + pi[i]) * db + bi[i]) * dc + ci[i]);
                    }
                    out.amplitudes(flat) = amp;
                }
            }
        }
    }
    return out;
}

PurifiedSource apply_linear_permutation(const PurifiedSource& psi, const FieldMatrix& m) {
    if (m.rows() != psi.copies || m.cols() != psi.copies) {
        throw ValidationError("apply_linear_permutation: matrix must be copies x copies");
    }
    if (m.modulus() != psi.d) {
        throw ValidationError("apply_linear_permutation: modulus differs from alphabet");
    }
    invert(m); // throws on singular input

    const std::int64_t da = psi.dim_a_total();
    const std::int64_t rest = psi.amplitudes.size() / da;
    PurifiedSource out = psi;
    for (std::int64_t a = 0; a < da; ++a) {
        const FieldVector z = decode_digits(a, psi.d, psi.copies);
        const std::int64_t target = encode_digits(m.apply(z), psi.d);
        out.amplitudes.segment(target * rest, rest) = psi.amplitudes.segment(a * rest, rest);
    }
    return out;
}

namespace {

bool matrices_close(const Matrix& a, const Matrix& b, double tol) {
    return (a - b).norm() <= tol;
}

} // namespace

bool is_symmetric(const CQChannel& w, const GroupAction& action, const Tolerances& tol) {
    const std::int64_t d = w.d();
    if (static_cast<std::int64_t>(action.unitaries.size()) != d) {
        throw ValidationError("is_symmetric: need one unitary per input");
    }
    const int dim = w.output_dim();
    for (const Matrix& v : action.unitaries) {
        if (v.rows() != dim || v.cols() != dim) {
            throw ValidationError("is_symmetric: unitary dimension mismatch");
        }
        if ((v * v.adjoint() - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() >
            tol.unitarity) {
            throw ValidationError("is_symmetric: supplied matrix is not unitary");
        }
    }
    for (std::int64_t z = 0; z < d; ++z) {
        for (std::int64_t zp = 0; zp < d; ++zp) {
            int matches = 0;
            for (std::int64_t g = 0; g < d; ++g) {
                const Matrix moved =
                    action.unitaries[g] * w.output(z).matrix() * action.unitaries[g].adjoint();
                if (matrices_close(moved, w.output(zp).matrix(), tol.action_match)) ++matches;
            }
            if (matches != 1) return false;
        }
    }
    return true;
}

namespace {

SymmetricChannel certify(CQChannel channel, GroupAction action, const Tolerances& tol) {
    if (!is_symmetric(channel, action, tol)) {
        throw ValidationError("symmetric_channel: action is not simply transitive");
    }
    return SymmetricChannel{std::move(channel), std::move(action)};
}

} // namespace

SymmetricChannel symmetric_channel_classical(const std::vector<double>& noise_pmf,
                                             const Tolerances& tol) {
    const int d = static_cast<int>(noise_pmf.size());
    ProbabilityVector q(noise_pmf, tol); // validates
    std::vector<DensityMatrix> outputs;
    for (int z = 0; z < d; ++z) {
        Matrix phi = Matrix::Zero(d, d);
        for (int j = 0; j < d; ++j) phi(j, j) = q[(j - z + d) % d];
        outputs.emplace_back(std::move(phi), tol);
    }
    GroupAction action;
    for (int z = 0; z < d; ++z) {
        Matrix shift = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) shift((i + z) % d, i) = 1.0;
        action.unitaries.push_back(std::move(shift));
    }
    return certify(CQChannel(std::move(outputs), tol), std::move(action), tol);
}

SymmetricChannel symmetric_channel_dihedral(double theta, const Tolerances& tol) {
    CVector up(2), down(2);
    up << std::cos(theta), std::sin(theta);
    down << std::cos(theta), -std::sin(theta);
    std::vector<DensityMatrix> outputs{pure_state(up, tol), pure_state(down, tol)};
    GroupAction action;
    action.unitaries.push_back(Matrix::Identity(2, 2));
    Matrix reflect = Matrix::Zero(2, 2);
    reflect(0, 0) = 1.0;
    reflect(1, 1) = -1.0;
    action.unitaries.push_back(std::move(reflect));
    return certify(CQChannel(std::move(outputs), tol), std::move(action), tol);
}

SymmetricChannel symmetric_channel_from_unitaries(const DensityMatrix& phi0,
                                                  std::vector<Matrix> unitaries,
                                                  const Tolerances& tol) {
    std::vector<DensityMatrix> outputs;
    for (const Matrix& v : unitaries) {
        outputs.emplace_back(v * phi0.matrix() * v.adjoint(), tol);
    }
    return certify(CQChannel(std::move(outputs), tol), GroupAction{std::move(unitaries)}, tol);
}

std::optional<GroupAction> find_action_over_candidates(const CQChannel& w,
                                                       const std::vector<Matrix>& candidates,
                                                       const Tolerances& tol) {
    const std::int64_t d = w.d();
    GroupAction action;
    for (std::int64_t z = 0; z < d; ++z) {
        bool found = false;
        for (const Matrix& v : candidates) {
            const Matrix moved = v * w.output(0).matrix() * v.adjoint();
            if (matrices_close(moved, w.output(z).matrix(), tol.action_match)) {
                action.unitaries.push_back(v);
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    if (!is_symmetric(w, action, tol)) return std::nullopt;
    return action;
}

SymmetricChannel bsc_channel(double p, const Tolerances& tol) {
    return symmetric_channel_classical({1.0 - p, p}, tol);
}

} // namespace cqexp
