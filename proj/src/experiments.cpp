#include "cqexp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqexp/rng.hpp"

namespace cqexp {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void require_prime_alphabet(const Source& source) {
    if (!is_prime(source.w.d())) {
        throw ValidationError("coding experiments require a prime alphabet size");
    }
}

void require_shape(const FieldMatrix& h, const Source& source, int n, const char* who) {
    if (h.modulus() != source.w.d()) {
        std::ostringstream os;
        os << who << ": matrix modulus differs from alphabet size";
        throw ValidationError(os.str());
    }
    if (h.cols() != n) {
        std::ostringstream os;
        os << who << ": matrix has " << h.cols() << " columns, expected " << n;
        throw ValidationError(os.str());
    }
    if (row_reduce(h).rank != h.rows()) {
        std::ostringstream os;
        os << who << ": matrix is not full row rank";
        throw ValidationError(os.str());
    }
}

// Product distribution and product output states over all of Z_d^n.
struct ProductEnumeration {
    std::vector<double> probs;
    std::vector<Matrix> states;
};

ProductEnumeration enumerate_products(const Source& source, int n, const Budget& budget) {
    const std::int64_t d = source.w.d();
    const std::int64_t total = ipow(d, n);
    const double state_dim = std::pow(static_cast<double>(source.w.output_dim()), n);
    if (total > static_cast<std::int64_t>(budget.max_enumeration) ||
        state_dim > static_cast<double>(budget.max_pure_dim)) {
        throw ResourceError("enumerate_products: instance exceeds enumeration budget");
    }
    ProductEnumeration out;
    out.probs.resize(total);
    out.states.resize(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const FieldVector digits = decode_digits(idx, d, n);
        double prob = 1.0;
        Matrix state = Matrix::Identity(1, 1);
        for (int i = 0; i < n; ++i) {
            prob *= source.p[static_cast<int>(digits[i])];
            state = kron(state, source.w.output(digits[i]).matrix());
        }
        out.probs[idx] = prob;
        out.states[idx] = std::move(state);
    }
    return out;
}

struct CosetProblem {
    FieldVector syndrome;
    double prob = 0.0;
    std::vector<double> priors; // normalized within the coset
    std::vector<Matrix> states;
};

std::vector<CosetProblem> split_by_syndrome(const Source& source, int n,
                                            const FieldMatrix& h, const Budget& budget) {
    const std::int64_t d = source.w.d();
    const ProductEnumeration prod = enumerate_products(source, n, budget);
    const std::int64_t syndromes = ipow(d, h.rows());

    std::vector<CosetProblem> cells(syndromes);
    for (std::int64_t s = 0; s < syndromes; ++s) {
        cells[s].syndrome = decode_digits(s, d, h.rows());
    }
    const std::int64_t total = ipow(d, n);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const FieldVector z = decode_digits(idx, d, n);
        const std::int64_t s = encode_digits(h.apply(z), d);
        cells[s].prob += prod.probs[idx];
        cells[s].priors.push_back(prod.probs[idx]);
        cells[s].states.push_back(prod.states[idx]);
    }
    for (CosetProblem& cell : cells) {
        if (cell.prob > 0.0) {
            for (double& p : cell.priors) p /= cell.prob;
        }
    }
    return cells;
}

} // namespace

ExperimentReport dc_error_exact(const Source& source, int n, const FieldMatrix& h,
                                double tol_gap, const Tolerances& tol,
                                const Budget& budget) {
    require_prime_alphabet(source);
    require_shape(h, source, n, "dc_error_exact");

    ExperimentReport report;
    report.n = n;
    report.d = source.w.d();
    report.m = h.rows();
    report.rate = std::log2(static_cast<double>(report.d)) * h.rows() / n;

    double success_lower = 0.0;
    double pgm_success = 0.0;
    for (const CosetProblem& cell : split_by_syndrome(source, n, h, budget)) {
        SyndromeCell out_cell;
        out_cell.syndrome = cell.syndrome;
        out_cell.prob = cell.prob;
        if (cell.prob <= 0.0) {
            out_cell.value = CertifiedValue{1.0, 1.0};
            out_cell.secondary = 1.0;
        } else {
            const Ensemble ensemble(ProbabilityVector(cell.priors, tol), cell.states, tol);
            const PguessResult pg = pguess(ensemble, tol_gap, 10000, tol);
            out_cell.value = pg.value;
            out_cell.secondary = ensemble.size() >= 2
                                     ? pretty_good_measurement(ensemble, tol).success
                                     : 1.0;
        }
        success_lower += out_cell.prob * out_cell.value.lower;
        pgm_success += out_cell.prob * out_cell.secondary;
        report.cert_gap += out_cell.prob * out_cell.value.gap();
        report.per_syndrome.push_back(std::move(out_cell));
    }
    report.measured = std::clamp(1.0 - success_lower, 0.0, 1.0);
    report.measured_alt = std::clamp(1.0 - pgm_success, 0.0, 1.0);
    return report;
}

namespace {

struct HashedBlocks {
    std::int64_t k = 1;
    std::vector<double> weights;
    std::vector<Matrix> states;
};

// Group weighted states by the value of a linear map applied to the index.
HashedBlocks group_by_map(const FieldMatrix& map, std::int64_t d, int n,
                          const std::vector<double>& weights,
                          const std::vector<Matrix>& states) {
    HashedBlocks out;
    out.k = ipow(d, map.rows());
    const std::int64_t total = ipow(d, n);
    const Eigen::Index dim = states.empty() ? 1 : states[0].rows();
    out.weights.assign(out.k, 0.0);
    out.states.assign(out.k, Matrix::Zero(dim, dim));
    for (std::int64_t idx = 0; idx < total; ++idx) {
        if (weights[idx] <= 0.0) continue;
        const std::int64_t target = encode_digits(map.apply(decode_digits(idx, d, n)), d);
        out.weights[target] += weights[idx];
        out.states[target] += weights[idx] * states[idx];
    }
    for (std::int64_t b = 0; b < out.k; ++b) {
        if (out.weights[b] > 0.0) out.states[b] /= out.weights[b];
    }
    return out;
}

} // namespace

ExperimentReport pa_distance_exact(const Source& source, int n,
                                   const FieldMatrix& extractor, double tol_gap,
                                   const Tolerances& tol, const Budget& budget) {
    require_prime_alphabet(source);
    require_shape(extractor, source, n, "pa_distance_exact");

    const std::int64_t d = source.w.d();
    const ProductEnumeration prod = enumerate_products(source, n, budget);
    const HashedBlocks blocks = group_by_map(extractor, d, n, prod.probs, prod.states);

    Matrix marginal = Matrix::Zero(blocks.states[0].rows(), blocks.states[0].cols());
    for (std::int64_t b = 0; b < blocks.k; ++b) {
        marginal += blocks.weights[b] * blocks.states[b];
    }

    ExperimentReport report;
    report.n = n;
    report.d = d;
    report.m = n - extractor.rows();
    report.rate = std::log2(static_cast<double>(d)) * extractor.rows() / n;

    double root_fidelity = 0.0;
    for (std::int64_t b = 0; b < blocks.k; ++b) {
        SyndromeCell cell;
        cell.syndrome = decode_digits(b, d, extractor.rows());
        cell.prob = blocks.weights[b];
        double block_f = 0.0;
        if (blocks.weights[b] > 0.0) {
            block_f = fidelity(blocks.states[b], marginal, tol);
            root_fidelity +=
                std::sqrt(blocks.weights[b] / static_cast<double>(blocks.k)) * block_f;
        }
        cell.value = CertifiedValue{block_f, block_f};
        report.per_syndrome.push_back(std::move(cell));
    }
    const double f_squared = root_fidelity * root_fidelity;
    report.measured = std::sqrt(std::clamp(1.0 - f_squared, 0.0, 1.0));
    report.measured_alt = f_squared;

    const MaxFidelityResult opt =
        max_fidelity_uniform(blocks.k, blocks.weights, blocks.states, tol_gap, 10000, tol);
    report.cert_gap = opt.value.gap();
    // Optimized fidelity rides along in the last per-syndrome slot.
    SyndromeCell opt_cell;
    opt_cell.syndrome = FieldVector{};
    opt_cell.prob = 1.0;
    opt_cell.value = opt.value;
    report.per_syndrome.push_back(std::move(opt_cell));
    return report;
}

DualityReport duality_check(const Source& source, int n, const FieldMatrix& h,
                            double tol_gap, const Tolerances& tol, const Budget& budget) {
    require_prime_alphabet(source);
    require_shape(h, source, n, "duality_check");
    const std::int64_t d = source.w.d();

    DualityReport report;

    // Guessing side: exact per-coset decomposition.
    double lower = 0.0, upper = 0.0;
    for (const CosetProblem& cell : split_by_syndrome(source, n, h, budget)) {
        if (cell.prob <= 0.0) continue;
        const Ensemble ensemble(ProbabilityVector(cell.priors, tol), cell.states, tol);
        const PguessResult pg = pguess(ensemble, tol_gap, 10000, tol);
        lower += cell.prob * pg.value.lower;
        upper += cell.prob * pg.value.upper;
    }
    report.pguess_side = CertifiedValue{lower, std::min(upper, 1.0)};

    // Fidelity side: conjugate measurement of the n-fold purification,
    // hashed by the dual extractor.
    const PurifiedSource psi = purify_source(source.p, source.w, tol, budget);
    const PurifiedSource psi_n = tensor_power(psi, n, budget);
    const MeasuredBlocks measured =
        measure_conjugate_blocks(psi_n, {Subsystem::APrime, Subsystem::C});
    const LinearFunctionPair pair = complete_invertible(h);
    const DualMap dual = dual_map(pair.combined, h.rows());
    const HashedBlocks blocks =
        group_by_map(dual.hat, d, n, measured.weights, measured.states);
    const MaxFidelityResult mf =
        max_fidelity_uniform(blocks.k, blocks.weights, blocks.states, tol_gap, 10000, tol);
    report.fidelity_side = mf.value;

    report.gap = std::abs(report.pguess_side.mid() - report.fidelity_side.mid());
    return report;
}

DualityReport duality_check_conjugate(const Source& source, int n, const FieldMatrix& h,
                                      double tol_gap, const Tolerances& tol,
                                      const Budget& budget) {
    require_prime_alphabet(source);
    require_shape(h, source, n, "duality_check_conjugate");
    const std::int64_t d = source.w.d();

    // Derived compression problem: Z is uniform and the decoder holds the
    // per-copy conditional states on A'B.
    const PurifiedSource psi = build_conjugate_source(source.p, source.w, tol, budget);
    const MeasuredBlocks z_blocks =
        measure_computational_blocks(psi, {Subsystem::APrime, Subsystem::B});
    std::vector<DensityMatrix> derived;
    for (std::int64_t z = 0; z < d; ++z) {
        derived.emplace_back(z_blocks.states[z], tol);
    }
    const Source compression{ProbabilityVector::uniform(static_cast<int>(d)),
                             CQChannel(std::move(derived), tol)};

    DualityReport report;
    double lower = 0.0, upper = 0.0;
    for (const CosetProblem& cell : split_by_syndrome(compression, n, h, budget)) {
        if (cell.prob <= 0.0) continue;
        const Ensemble ensemble(ProbabilityVector(cell.priors, tol), cell.states, tol);
        const PguessResult pg = pguess(ensemble, tol_gap, 10000, tol);
        lower += cell.prob * pg.value.lower;
        upper += cell.prob * pg.value.upper;
    }
    report.pguess_side = CertifiedValue{lower, std::min(upper, 1.0)};

    // Security side: the hashed X register against the adversary's C^n.
    const ProductEnumeration prod = enumerate_products(source, n, budget);
    const LinearFunctionPair pair = complete_invertible(h);
    const DualMap dual = dual_map(pair.combined, h.rows());
    const HashedBlocks blocks = group_by_map(dual.hat, d, n, prod.probs, prod.states);
    const MaxFidelityResult mf =
        max_fidelity_uniform(blocks.k, blocks.weights, blocks.states, tol_gap, 10000, tol);
    report.fidelity_side = mf.value;

    report.gap = std::abs(report.pguess_side.mid() - report.fidelity_side.mid());
    return report;
}

CosetCodeReport code_from_compressor(const SymmetricChannel& w, int n, const FieldMatrix& h,
                                     double tol_gap, const Tolerances& tol,
                                     const Budget& budget) {
    if (!is_symmetric(w.channel, w.action, tol)) {
        throw ValidationError("code_from_compressor: channel is not certified symmetric");
    }
    const Source source{ProbabilityVector::uniform(static_cast<int>(w.channel.d())),
                        w.channel};
    require_prime_alphabet(source);
    require_shape(h, source, n, "code_from_compressor");

    CosetCodeReport report;
    double best = 2.0;
    std::int64_t best_index = -1;
    const std::vector<CosetProblem> cells = split_by_syndrome(source, n, h, budget);
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(cells.size()); ++s) {
        const CosetProblem& cell = cells[s];
        const Ensemble ensemble(ProbabilityVector(cell.priors, tol), cell.states, tol);
        const PguessResult pg = pguess(ensemble, tol_gap, 10000, tol);
        const double error = 1.0 - pg.value.lower;
        report.coset_errors.push_back(error);
        report.average_error += cell.prob * error;
        if (error < best - 1e-15) { // ties keep the smallest syndrome
            best = error;
            best_index = s;
            report.best_error = CertifiedValue{std::clamp(1.0 - pg.value.upper, 0.0, 1.0),
                                               std::clamp(error, 0.0, 1.0)};
        }
    }
    report.best_syndrome = cells[best_index].syndrome;
    report.codewords = coset_enumerate(h, report.best_syndrome, budget);
    return report;
}

namespace {

FieldVector sample_field_vector(DeterministicRng& rng, std::int64_t d, int len) {
    FieldVector seed(len, 0);
    for (int i = 0; i < len; ++i) seed[i] = rng.uniform_int(d);
    return seed;
}

} // namespace

ToeplitzResult sample_full_rank_toeplitz(DeterministicRng& rng, std::int64_t d, int m,
                                         int n, int& resamples) {
    ToeplitzResult t = toeplitz(sample_field_vector(rng, d, m + n - 1), m, n, d);
    while (!t.full_row_rank) {
        if (++resamples > 1000) {
            throw SolverError("sample_full_rank_toeplitz: no full-rank draw", 0.0, 1.0,
                              resamples);
        }
        t = toeplitz(sample_field_vector(rng, d, m + n - 1), m, n, d);
    }
    return t;
}

std::vector<ScanCell> rate_scan(ScanMode mode, const Source& source,
                                const std::optional<GroupAction>& action,
                                const std::vector<int>& ns,
                                const std::vector<double>& rates, int trials,
                                std::uint64_t seed, std::optional<double> k_constant,
                                double tol_gap, const Tolerances& tol,
                                const Budget& budget) {
    require_prime_alphabet(source);
    if (mode == ScanMode::CC && !action.has_value()) {
        throw ValidationError("rate_scan: channel-coding scans require a symmetry action");
    }
    const std::int64_t d = source.w.d();
    const double logd = std::log2(static_cast<double>(d));

    // Exponent-bound inputs, fixed across cells.
    const BipartiteState psi_zb = build_cq_state(source.p, source.w);
    const double h_cond = von_neumann_cond(psi_zb, tol);

    std::vector<ScanCell> table;
    for (size_t ni = 0; ni < ns.size(); ++ni) {
        const int n = ns[ni];
        for (size_t ri = 0; ri < rates.size(); ++ri) {
            const double requested = rates[ri];
            const int units = std::clamp(
                static_cast<int>(std::lround(requested * n / logd)), 0, n);
            // units counts syndrome symbols (DC) or extracted symbols (PA/CC).
            const int m = mode == ScanMode::DC ? units : n - units;
            const double rate = logd * (mode == ScanMode::DC ? m : n - m) / n;
            for (int t = 0; t < trials; ++t) {
                ScanCell cell;
                cell.n = n;
                cell.m = m;
                cell.rate = rate;
                cell.seed = mix_seed(seed, (static_cast<std::uint64_t>(ni) << 32) | ri,
                                     static_cast<std::uint64_t>(t));
                DeterministicRng rng(cell.seed);
                try {
                    if (mode == ScanMode::DC) {
                        const ToeplitzResult h =
                            sample_full_rank_toeplitz(rng, d, m, n, cell.resamples);
                        cell.measured =
                            dc_error_exact(source, n, h.matrix, tol_gap, tol, budget)
                                .measured;
                    } else if (mode == ScanMode::PA) {
                        const ToeplitzResult g =
                            sample_full_rank_toeplitz(rng, d, n - m, n, cell.resamples);
                        cell.measured =
                            pa_distance_exact(source, n, g.matrix, tol_gap, tol, budget)
                                .measured;
                    } else {
                        const ToeplitzResult h =
                            sample_full_rank_toeplitz(rng, d, m, n, cell.resamples);
                        const SymmetricChannel sym{source.w, *action};
                        cell.measured = code_from_compressor(sym, n, h.matrix, tol_gap,
                                                             tol, budget)
                                            .best_error.upper;
                    }
                } catch (const ValidationError& e) {
                    cell.status = std::string("failed:") + e.what();
                } catch (const ResourceError& e) {
                    cell.status = std::string("failed:") + e.what();
                } catch (const SolverError& e) {
                    cell.status = std::string("failed:") + e.what();
                }
                if (cell.resamples > 0 && cell.status == "ok") {
                    cell.status = "ok;resampled=" + std::to_string(cell.resamples);
                }

                // Each bound column fails independently: a rate outside one
                // bound's validity region leaves only that column unset.
                auto attach = [](std::optional<ExtendedReal>& slot, auto&& compute) {
                    try {
                        slot = compute();
                    } catch (const ValidationError&) {
                    }
                };
                if (mode == ScanMode::DC) {
                    attach(cell.bound_lower, [&] {
                        return dc_exponent_lower(psi_zb, rate, tol).exponent;
                    });
                    attach(cell.bound_sp, [&] {
                        return dc_sphere_packing(psi_zb, rate, 1e-4, tol).exponent;
                    });
                    if (k_constant && cell.bound_sp) {
                        attach(cell.prefactor_rhs, [&] {
                            auto curve = [&](double r) {
                                return dc_sphere_packing(psi_zb, r, 1e-4, tol).exponent;
                            };
                            const ExtendedReal slope =
                                sp_slope(curve, rate, h_cond + 2.0 * tol.slope_step, logd,
                                         tol.slope_step);
                            return finite_n_prefactor(PrefactorForm::DataCompression,
                                                      *cell.bound_sp, slope, n, *k_constant);
                        });
                    }
                } else if (mode == ScanMode::PA) {
                    attach(cell.bound_lower, [&] {
                        return pa_exponent_lower(psi_zb, rate, tol).exponent;
                    });
                    attach(cell.bound_sp, [&] {
                        return pa_sphere_packing(psi_zb, rate, 64.0, tol).exponent;
                    });
                    if (k_constant && cell.bound_sp) {
                        attach(cell.prefactor_rhs, [&] {
                            auto curve = [&](double r) {
                                return pa_sphere_packing(psi_zb, r, 64.0, tol).exponent;
                            };
                            const ExtendedReal slope =
                                sp_slope(curve, rate, 1e-9, logd - 1e-9, tol.slope_step);
                            return finite_n_prefactor(PrefactorForm::PrivacyAmplification,
                                                      *cell.bound_sp, slope, n, *k_constant);
                        });
                    }
                } else {
                    attach(cell.bound_lower, [&] {
                        const SymmetricChannel sym{source.w, *action};
                        return cc_exponent_lower(sym, rate, tol).exponent;
                    });
                    attach(cell.bound_sp, [&] {
                        return cc_sphere_packing(source.w, rate, 64.0, &*action, tol)
                            .exponent;
                    });
                }
                table.push_back(std::move(cell));
            }
        }
    }
    return table;
}

} // namespace cqexp
