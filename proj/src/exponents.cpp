#include "cqexp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cqexp {

std::string to_string(CurveFlag flag) {
    switch (flag) {
        case CurveFlag::Interior: return "interior";
        case CurveFlag::Boundary: return "boundary";
        case CurveFlag::Diverged: return "diverged";
    }
    return "unknown";
}

void ExponentCurve::validate_monotone(double tol) const {
    for (size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].rate <= samples[i - 1].rate) {
            throw ValidationError("ExponentCurve: rates must be strictly increasing");
        }
        const ExtendedReal& prev = samples[i - 1].exponent;
        const ExtendedReal& cur = samples[i].exponent;
        if (prev.is_infinite()) continue;
        if (cur.is_infinite() || cur.value() > prev.value() + tol) {
            throw ValidationError("ExponentCurve: exponent must be nonincreasing in rate");
        }
    }
}

RateRegion::RateRegion(std::int64_t d, double r_dc_in, double r_pa_in)
    : r_dc(r_dc_in), r_pa(r_pa_in) {
    const double logd = std::log2(static_cast<double>(d));
    if (std::abs(r_dc + r_pa - logd) > 1e-12) {
        throw ValidationError("RateRegion: R_dc + R_pa must equal log d");
    }
}

RateRegion RateRegion::from_dc(std::int64_t d, double r_dc) {
    return RateRegion(d, r_dc, std::log2(static_cast<double>(d)) - r_dc);
}

RateRegion RateRegion::from_pa(std::int64_t d, double r_pa) {
    return RateRegion(d, std::log2(static_cast<double>(d)) - r_pa, r_pa);
}

namespace {

struct ScalarOpt {
    double x = 0.0;
    double value = 0.0;
};

// Coarse pre-scan to bracket the maximum, then golden section. The
// objectives are continuous but not guaranteed unimodal, so the scan picks
// the bracket and the endpoints are always checked.
ScalarOpt maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double xtol, int scan_points = 64) {
    ScalarOpt best{lo, f(lo)};
    const double hi_val = f(hi);
    if (hi_val > best.value) best = {hi, hi_val};

    int best_idx = -1;
    std::vector<double> xs(scan_points), vals(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        xs[i] = lo + (hi - lo) * (i + 0.5) / scan_points;
        vals[i] = f(xs[i]);
        if (vals[i] > best.value) {
            best = {xs[i], vals[i]};
            best_idx = i;
        }
    }
    double a = lo, b = hi;
    if (best_idx >= 0) {
        a = best_idx > 0 ? xs[best_idx - 1] : lo;
        b = best_idx + 1 < scan_points ? xs[best_idx + 1] : hi;
    }

    constexpr double kGolden = 0.6180339887498949;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (fm > best.value) best = {xm, fm};
    return best;
}

double log2d(std::int64_t d) { return std::log2(static_cast<double>(d)); }

void require_rate_in_open_interval(double rate, double hi, const char* who) {
    if (!(rate > 0.0) || !(rate < hi)) {
        std::ostringstream os;
        os << who << ": rate " << rate << " outside (0, " << hi << ")";
        throw ValidationError(os.str());
    }
}

double trace_power(const Matrix& m, double p, const Tolerances& tol) {
    SpectralDecomposition eig = herm_eig(m, tol);
    const double lmax = std::max(eig.eigenvalues(0), 0.0);
    double sum = 0.0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        const double v = eig.eigenvalues(i);
        if (v > tol.support_cutoff * lmax && v > 0.0) sum += std::pow(v, p);
    }
    return sum;
}

} // namespace

double gallager_e0(double s, const ProbabilityVector& p, const CQChannel& w,
                   const Tolerances& tol) {
    if (s < 0.0) throw ValidationError("gallager_e0: s must be nonnegative");
    if (p.size() != w.d()) throw ValidationError("gallager_e0: distribution size mismatch");
    const double alpha = 1.0 / (1.0 + s);
    Matrix mixed = Matrix::Zero(w.output_dim(), w.output_dim());
    for (std::int64_t z = 0; z < w.d(); ++z) {
        if (p[static_cast<int>(z)] > 0.0) {
            mixed += p[static_cast<int>(z)] * mat_pow(w.output(z).matrix(), alpha, tol);
        }
    }
    return -std::log2(trace_power(mixed, 1.0 + s, tol));
}

E0Identity e0_entropy_identity(double s, const CQChannel& w, const Tolerances& tol) {
    if (s < 0.0) throw ValidationError("e0_entropy_identity: s must be nonnegative");
    const ProbabilityVector uniform = ProbabilityVector::uniform(static_cast<int>(w.d()));
    E0Identity out;
    out.lhs = gallager_e0(s, uniform, w, tol);
    const BipartiteState psi = build_cq_state(uniform, w);
    const double alpha = 1.0 / (1.0 + s);
    out.rhs = s * (log2d(w.d()) - cond_entropy_petz_up(psi, alpha, tol));
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

HolevoCheck holevo_condition(const ProbabilityVector& p, double s, const CQChannel& w,
                             const Tolerances& tol) {
    if (s < 0.0) throw ValidationError("holevo_condition: s must be nonnegative");
    if (p.size() != w.d()) throw ValidationError("holevo_condition: distribution size mismatch");
    const double alpha = 1.0 / (1.0 + s);
    const std::int64_t d = w.d();
    std::vector<Matrix> powered;
    Matrix theta = Matrix::Zero(w.output_dim(), w.output_dim());
    for (std::int64_t z = 0; z < d; ++z) {
        powered.push_back(mat_pow(w.output(z).matrix(), alpha, tol));
        theta += static_cast<double>(d) * p[static_cast<int>(z)] * powered.back();
    }
    const Matrix theta_s = mat_pow(theta, s, tol);

    HolevoCheck out;
    std::vector<double> traces(d);
    double average = 0.0;
    for (std::int64_t z = 0; z < d; ++z) {
        traces[z] = (powered[z] * theta_s).trace().real();
        average += p[static_cast<int>(z)] * traces[z];
    }
    out.satisfied = true;
    for (std::int64_t z = 0; z < d; ++z) {
        const double residual = traces[z] - average;
        out.residuals.push_back(residual);
        if (residual < -1e-9) out.satisfied = false;
        if (p[static_cast<int>(z)] > 0.0 && std::abs(residual) > 1e-9) out.satisfied = false;
    }
    return out;
}

namespace {

std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, theta = 0.0;
    int support = 0;
    for (size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) {
            support = static_cast<int>(j + 1);
            theta = candidate;
        }
    }
    (void)support;
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

} // namespace

E0Opt e0_opt(double s, const CQChannel& w, double value_tol, long cap,
             const Tolerances& tol) {
    if (s < 0.0) throw ValidationError("e0_opt: s must be nonnegative");
    const int d = static_cast<int>(w.d());
    const double alpha = 1.0 / (1.0 + s);
    std::vector<Matrix> powered;
    for (int z = 0; z < d; ++z) powered.push_back(mat_pow(w.output(z).matrix(), alpha, tol));

    auto objective = [&](const std::vector<double>& p) {
        Matrix m = Matrix::Zero(w.output_dim(), w.output_dim());
        for (int z = 0; z < d; ++z) {
            if (p[z] > 0.0) m += p[z] * powered[z];
        }
        return trace_power(m, 1.0 + s, tol);
    };
    auto gradient = [&](const std::vector<double>& p) {
        Matrix m = Matrix::Zero(w.output_dim(), w.output_dim());
        for (int z = 0; z < d; ++z) {
            if (p[z] > 0.0) m += p[z] * powered[z];
        }
        const Matrix ms = mat_pow(m, s, tol);
        std::vector<double> g(d);
        for (int z = 0; z < d; ++z) {
            g[z] = (1.0 + s) * (powered[z] * ms).trace().real();
        }
        return g;
    };

    std::vector<double> p(d, 1.0 / d);
    double mu = objective(p);
    E0Opt out;
    auto finish = [&] {
        out.value = -std::log2(mu);
        out.optimizer = p;
        out.residuals = holevo_condition(ProbabilityVector(p, tol), s, w, tol).residuals;
        return out;
    };
    for (long iter = 0; iter <= cap; ++iter) {
        out.iterations = iter;
        const std::vector<double> grad = gradient(p);
        // Frank-Wolfe gap bounds mu(p) - mu* for the convex objective.
        double inner = 0.0, grad_min = grad[0];
        for (int z = 0; z < d; ++z) {
            inner += grad[z] * p[z];
            grad_min = std::min(grad_min, grad[z]);
        }
        const double fw_gap = inner - grad_min;
        if (fw_gap <= 0.5 * value_tol * mu * std::log(2.0)) return finish();
        if (iter == cap) break;

        double step = 1.0;
        bool moved = false;
        for (int tries = 0; tries < 80; ++tries) {
            std::vector<double> candidate(d);
            for (int z = 0; z < d; ++z) candidate[z] = p[z] - step * grad[z];
            candidate = project_simplex(std::move(candidate));
            double decrease_bound = 0.0;
            bool distinct = false;
            for (int z = 0; z < d; ++z) {
                decrease_bound += grad[z] * (p[z] - candidate[z]);
                distinct = distinct || candidate[z] != p[z];
            }
            // Monotone acceptance: near the optimum the measured decrease
            // underflows long before the iterate stops improving the
            // Frank-Wolfe certificate, so ties are allowed.
            const double mu_candidate = objective(candidate);
            if (distinct && decrease_bound > 0.0 && mu_candidate <= mu) {
                p = std::move(candidate);
                mu = mu_candidate;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        // Stationary within double precision: the ascent has converged and
        // the Holevo residuals certify the iterate.
        if (!moved) return finish();
    }

    const double best = -std::log2(mu);
    std::ostringstream os;
    os << "e0_opt: did not certify value tolerance " << value_tol << " at s=" << s;
    throw SolverError(os.str(), best, best + value_tol * 10, out.iterations);
}

CurvePoint cc_exponent_lower(const SymmetricChannel& w, double rate, const Tolerances& tol) {
    if (!is_symmetric(w.channel, w.action, tol)) {
        throw ValidationError("cc_exponent_lower: channel is not certified symmetric");
    }
    require_rate_in_open_interval(rate, log2d(w.channel.d()), "cc_exponent_lower");
    const ProbabilityVector uniform =
        ProbabilityVector::uniform(static_cast<int>(w.channel.d()));
    auto f = [&](double s) { return gallager_e0(s, uniform, w.channel, tol) - s * rate; };
    const ScalarOpt opt = maximize_scalar(f, 0.0, 1.0, tol.scalar_opt_x);
    CurvePoint point;
    point.rate = rate;
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    point.optimizer = opt.x;
    const bool at_edge = opt.x <= 2.0 * tol.scalar_opt_x || opt.x >= 1.0 - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

CurvePoint cc_sphere_packing(const CQChannel& w, double rate, double s_max,
                             const GroupAction* action, const Tolerances& tol) {
    require_rate_in_open_interval(rate, log2d(w.d()), "cc_sphere_packing");
    const bool uniform_optimal = action != nullptr && is_symmetric(w, *action, tol);
    const ProbabilityVector uniform = ProbabilityVector::uniform(static_cast<int>(w.d()));
    auto e0 = [&](double s) {
        return uniform_optimal ? gallager_e0(s, uniform, w, tol) : e0_opt(s, w).value;
    };
    auto f = [&](double s) { return e0(s) - s * rate; };
    const ScalarOpt opt = maximize_scalar(f, 0.0, s_max, tol.scalar_opt_x);

    CurvePoint point;
    point.rate = rate;
    point.optimizer = opt.x;
    const double probe = s_max * (1.0 - 1e-6);
    if (opt.x >= probe && f(s_max) > f(probe)) {
        point.exponent = ExtendedReal::infinity();
        point.optimizer = s_max;
        point.flag = CurveFlag::Diverged;
        return point;
    }
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    const bool at_edge =
        opt.x <= 2.0 * tol.scalar_opt_x || opt.x >= s_max - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

namespace {

void require_rate_above_entropy(double rate, double entropy, const char* who) {
    if (rate <= entropy) {
        std::ostringstream os;
        os << who << ": rate " << rate << " is at or below the conditional entropy "
           << entropy;
        throw ValidationError(os.str());
    }
}

} // namespace

CurvePoint dc_exponent_lower(const BipartiteState& psi_zb, double r_dc,
                             const Tolerances& tol) {
    require_rate_above_entropy(r_dc, von_neumann_cond(psi_zb, tol), "dc_exponent_lower");
    auto f = [&](double alpha) {
        return (1.0 - alpha) / alpha * (r_dc - cond_entropy_petz_up(psi_zb, alpha, tol));
    };
    const ScalarOpt opt = maximize_scalar(f, 0.5, 1.0, tol.scalar_opt_x);
    CurvePoint point;
    point.rate = r_dc;
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    point.optimizer = opt.x;
    const bool at_edge =
        opt.x <= 0.5 + 2.0 * tol.scalar_opt_x || opt.x >= 1.0 - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

CurvePoint dc_sphere_packing(const BipartiteState& psi_zb, double r_dc, double alpha_min,
                             const Tolerances& tol) {
    require_rate_above_entropy(r_dc, von_neumann_cond(psi_zb, tol), "dc_sphere_packing");
    auto f = [&](double alpha) {
        return (1.0 - alpha) / alpha * (r_dc - cond_entropy_petz_up(psi_zb, alpha, tol));
    };
    const ScalarOpt opt = maximize_scalar(f, alpha_min, 1.0, tol.scalar_opt_x);
    CurvePoint point;
    point.rate = r_dc;
    point.optimizer = opt.x;
    const double probe = alpha_min * (1.0 + 1e-3);
    if (opt.x <= probe && f(alpha_min) > f(probe)) {
        point.exponent = ExtendedReal::infinity();
        point.optimizer = alpha_min;
        point.flag = CurveFlag::Diverged;
        return point;
    }
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    const bool at_edge = opt.x <= alpha_min + 2.0 * tol.scalar_opt_x ||
                         opt.x >= 1.0 - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

CurvePoint pa_exponent_lower(const BipartiteState& psi_xq, double r_pa,
                             const Tolerances& tol) {
    const double entropy = von_neumann_cond(psi_xq, tol);
    if (r_pa >= entropy) {
        std::ostringstream os;
        os << "pa_exponent_lower: rate " << r_pa
           << " is at or above the conditional entropy " << entropy;
        throw ValidationError(os.str());
    }
    auto f = [&](double alpha) {
        return (alpha - 1.0) * (cond_entropy_sand_down(psi_xq, alpha, tol) - r_pa);
    };
    const ScalarOpt opt = maximize_scalar(f, 1.0, 2.0, tol.scalar_opt_x);
    CurvePoint point;
    point.rate = r_pa;
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    point.optimizer = opt.x;
    const bool at_edge =
        opt.x <= 1.0 + 2.0 * tol.scalar_opt_x || opt.x >= 2.0 - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

CurvePoint pa_sphere_packing(const BipartiteState& psi_xq, double r_pa, double alpha_max,
                             const Tolerances& tol) {
    auto f = [&](double alpha) {
        return (alpha - 1.0) * (cond_entropy_sand_down(psi_xq, alpha, tol) - r_pa);
    };
    const ScalarOpt opt = maximize_scalar(f, 1.0, alpha_max, tol.scalar_opt_x);
    CurvePoint point;
    point.rate = r_pa;
    point.optimizer = opt.x;
    const double probe = alpha_max * (1.0 - 1e-6);
    if (opt.x >= probe && f(alpha_max) > f(probe)) {
        point.exponent = ExtendedReal::infinity();
        point.optimizer = alpha_max;
        point.flag = CurveFlag::Diverged;
        return point;
    }
    point.exponent = ExtendedReal(std::max(opt.value, 0.0));
    const bool at_edge = opt.x <= 1.0 + 2.0 * tol.scalar_opt_x ||
                         opt.x >= alpha_max - 2.0 * tol.scalar_opt_x;
    point.flag = at_edge ? CurveFlag::Boundary : CurveFlag::Interior;
    return point;
}

ExtendedReal finite_n_prefactor(PrefactorForm form, ExtendedReal e_sp,
                                ExtendedReal e_sp_slope, long n, double k) {
    if (n < 2) throw ValidationError("finite_n_prefactor: n must be at least 2");
    if (e_sp.is_infinite() || e_sp_slope.is_infinite()) return ExtendedReal::infinity();
    const double log_term = std::log2(static_cast<double>(n)) / static_cast<double>(n);
    const double k_term = k / static_cast<double>(n);
    const double slope_weight = 1.0 + std::abs(e_sp_slope.value());
    if (form == PrefactorForm::DataCompression) {
        return ExtendedReal(e_sp.value() + 0.5 * slope_weight * log_term + k_term);
    }
    return ExtendedReal(0.5 * e_sp.value() + 0.25 * slope_weight * log_term + k_term);
}

ExtendedReal sp_slope(const std::function<ExtendedReal(double)>& curve, double rate,
                      double lo, double hi, double step) {
    double left = rate - step, right = rate + step;
    if (left < lo) left = rate;
    if (right > hi) right = rate;
    if (left == right) throw ValidationError("sp_slope: empty differencing interval");
    const ExtendedReal f_left = curve(left);
    const ExtendedReal f_right = curve(right);
    if (f_left.is_infinite() || f_right.is_infinite()) return ExtendedReal::infinity();
    return ExtendedReal((f_right.value() - f_left.value()) / (right - left));
}

namespace {

// Bisection on a monotone optimizer indicator over a rate interval.
CriticalRateResult bisect_crossing(const std::function<double(double)>& indicator,
                                   double lo, double hi, bool decreasing, double rate_tol) {
    constexpr int kScan = 32;
    double prev_rate = lo;
    double prev_val = indicator(lo);
    double bracket_lo = 0.0, bracket_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= kScan; ++i) {
        const double r = lo + (hi - lo) * i / kScan;
        const double v = indicator(r);
        const bool crossed = decreasing ? (prev_val >= 0.0 && v <= 0.0)
                                        : (prev_val <= 0.0 && v >= 0.0);
        if (crossed) {
            bracket_lo = prev_rate;
            bracket_hi = r;
            found = true;
            break;
        }
        prev_rate = r;
        prev_val = v;
    }
    if (!found) return CriticalRateResult{std::nullopt, true};
    while (bracket_hi - bracket_lo > rate_tol) {
        const double mid = 0.5 * (bracket_lo + bracket_hi);
        const double v = indicator(mid);
        const bool upper_side = decreasing ? v <= 0.0 : v >= 0.0;
        (upper_side ? bracket_hi : bracket_lo) = mid;
    }
    return CriticalRateResult{0.5 * (bracket_lo + bracket_hi), false};
}

} // namespace

CriticalRateResult critical_rate_dc(const BipartiteState& psi_zb, std::int64_t d,
                                    const Tolerances& tol) {
    const double entropy = von_neumann_cond(psi_zb, tol);
    const double hi = log2d(d);
    const double lo = entropy + 1e-6 * std::max(1.0, hi);
    if (lo >= hi) return CriticalRateResult{std::nullopt, true};
    auto indicator = [&](double r) {
        return dc_sphere_packing(psi_zb, r, 1e-4, tol).optimizer - 0.5;
    };
    return bisect_crossing(indicator, lo, hi * (1.0 - 1e-9), true, tol.critical_rate);
}

CriticalRateResult critical_rate_cc(const SymmetricChannel& w, const Tolerances& tol) {
    const double hi = log2d(w.channel.d());
    auto indicator = [&](double r) {
        const CurvePoint p = cc_sphere_packing(w.channel, r, 64.0, &w.action, tol);
        return 1.0 - p.optimizer; // >= 0 once s* <= 1
    };
    return bisect_crossing(indicator, 1e-6 * hi, hi * (1.0 - 1e-9), false, tol.critical_rate);
}

} // namespace cqexp
