#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cqexp/entropy.hpp"
#include "cqexp/extended.hpp"
#include "cqexp/states.hpp"

namespace cqexp {

enum class CurveFlag { Interior, Boundary, Diverged };

std::string to_string(CurveFlag flag);

struct CurvePoint {
    double rate = 0.0;
    ExtendedReal exponent;
    double optimizer = 0.0; // optimizing alpha or s
    CurveFlag flag = CurveFlag::Interior;
};

// Sampled rate -> exponent map; rates strictly increasing, exponents
// nonincreasing within tolerance for each bound family.
struct ExponentCurve {
    std::vector<CurvePoint> samples;

    void validate_monotone(double tol = 1e-9) const;
};

// R_dc = log d - R_pa, both in bits per symbol.
struct RateRegion {
    RateRegion(std::int64_t d, double r_dc, double r_pa);
    static RateRegion from_dc(std::int64_t d, double r_dc);
    static RateRegion from_pa(std::int64_t d, double r_pa);

    double r_dc;
    double r_pa;
};

// E_0(s, P, W) = -log tr[(sum_z P(z) phi(z)^(1/(1+s)))^(1+s)], in bits.
double gallager_e0(double s, const ProbabilityVector& p, const CQChannel& w,
                   const Tolerances& tol = default_tolerances());

// Both sides of E_0(s, P', W) = s (log d - H-bar_(1/(1+s))^up(Z|B)) at the
// uniform input, evaluated through independent code paths.
struct E0Identity {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};
E0Identity e0_entropy_identity(double s, const CQChannel& w,
                               const Tolerances& tol = default_tolerances());

// Input-optimality residuals: residual_z = tr[phi(z)^a Theta^s] minus the
// P-average of the same trace, Theta = sum_z d P(z) phi(z)^a, a = 1/(1+s).
// Satisfied iff every residual >= -1e-9 and |residual| <= 1e-9 where P > 0.
struct HolevoCheck {
    std::vector<double> residuals;
    bool satisfied = false;
};
HolevoCheck holevo_condition(const ProbabilityVector& p, double s, const CQChannel& w,
                             const Tolerances& tol = default_tolerances());

// max_P E_0(s, P, W), solved as the equivalent convex minimization of the
// trace functional over the simplex by projected gradient descent with a
// Frank-Wolfe gap certificate on the value.
struct E0Opt {
    double value = 0.0;
    std::vector<double> optimizer;
    std::vector<double> residuals; // Holevo residuals at the optimizer
    long iterations = 0;
};
E0Opt e0_opt(double s, const CQChannel& w,
             double value_tol = default_tolerances().e0_value, long cap = 200000,
             const Tolerances& tol = default_tolerances());

// Channel coding, symmetric channels: max_{s in [0,1]} (E_0(s, W) - s R).
CurvePoint cc_exponent_lower(const SymmetricChannel& w, double rate,
                             const Tolerances& tol = default_tolerances());

// Sphere packing: sup_{s >= 0} (E_0(s, W) - s R), capped at s_max with a
// divergence flag. The input distribution is optimized unless a certified
// action is supplied, in which case the uniform distribution is used.
CurvePoint cc_sphere_packing(const CQChannel& w, double rate, double s_max = 64.0,
                             const GroupAction* action = nullptr,
                             const Tolerances& tol = default_tolerances());

// Compression with quantum side information, rates above H(Z|B):
// max_{alpha in [1/2,1]} (1-alpha)/alpha (R_dc - H-bar_alpha^up(Z|B)).
CurvePoint dc_exponent_lower(const BipartiteState& psi_zb, double r_dc,
                             const Tolerances& tol = default_tolerances());

// sup over alpha in (0,1], evaluated down to alpha_min with divergence flag.
CurvePoint dc_sphere_packing(const BipartiteState& psi_zb, double r_dc,
                             double alpha_min = 1e-4,
                             const Tolerances& tol = default_tolerances());

// Privacy amplification, rates below H(X|Q):
// max_{alpha in [1,2]} (alpha-1)(H-tilde_alpha^down(X|Q) - R_pa).
CurvePoint pa_exponent_lower(const BipartiteState& psi_xq, double r_pa,
                             const Tolerances& tol = default_tolerances());

// sup over alpha >= 1, capped at alpha_max with divergence flag.
CurvePoint pa_sphere_packing(const BipartiteState& psi_xq, double r_pa,
                             double alpha_max = 64.0,
                             const Tolerances& tol = default_tolerances());

enum class PrefactorForm { DataCompression, PrivacyAmplification };

// Finite-n sphere-packing right-hand sides. DC form:
//   E_sp + (1/2)(1 + |E_sp'|) log(n)/n + K/n
// PA form:
//   E_sp/2 + (1/4)(1 + |E_sp'|) log(n)/n + K/n
// K is caller-supplied; the slope comes from sp_slope or a known value.
ExtendedReal finite_n_prefactor(PrefactorForm form, ExtendedReal e_sp,
                                ExtendedReal e_sp_slope, long n, double k);

// Central finite difference with the configured step, one-sided at edges.
ExtendedReal sp_slope(const std::function<ExtendedReal(double)>& curve, double rate,
                      double lo, double hi,
                      double step = default_tolerances().slope_step);

// Smallest rate at which the sphere-packing optimizer enters the lower
// bound's range (alpha* >= 1/2 for DC, s* <= 1 for CC), by bisection on the
// optimizer value. No crossing inside (0, log d) is a boundary outcome.
struct CriticalRateResult {
    std::optional<double> rate;
    bool boundary = false;
};
CriticalRateResult critical_rate_dc(const BipartiteState& psi_zb, std::int64_t d,
                                    const Tolerances& tol = default_tolerances());
CriticalRateResult critical_rate_cc(const SymmetricChannel& w,
                                    const Tolerances& tol = default_tolerances());

} // namespace cqexp
