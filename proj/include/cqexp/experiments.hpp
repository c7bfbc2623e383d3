#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqexp/discrimination.hpp"
#include "cqexp/exponents.hpp"
#include "cqexp/field.hpp"
#include "cqexp/states.hpp"

namespace cqexp {

// A source instance: input distribution plus the conditional output states.
// For compression experiments the outputs are the side information phi_B(z);
// for privacy amplification they are the adversary's states theta_C(x).
struct Source {
    ProbabilityVector p;
    CQChannel w;
};

struct SyndromeCell {
    FieldVector syndrome;
    double prob = 0.0;
    CertifiedValue value; // per-cell guessing probability or block fidelity
    double secondary = 0.0; // PGM success for compression cells
};

struct ExperimentReport {
    int n = 1;
    std::int64_t d = 2;
    int m = 0;
    double rate = 0.0;
    double measured = 0.0;     // P_err or purified distance
    double measured_alt = 0.0; // PGM-decoder error or squared fidelity
    double cert_gap = 0.0;
    std::uint64_t seed = 0;
    std::vector<SyndromeCell> per_syndrome;
};

// Exact compression error: P_err = 1 - sum over syndromes of
// Pr[syndrome] * pguess(coset ensemble), certified per coset. The
// PGM-decoder error is reported alongside as a cheap upper bound.
ExperimentReport dc_error_exact(const Source& source, int n, const FieldMatrix& h,
                                double tol_gap = default_tolerances().solver_gap,
                                const Tolerances& tol = default_tolerances(),
                                const Budget& budget = default_budget());

// Exact privacy-amplification security: purified distance of the hashed
// output to uniform times the actual marginal, plus the optimized
// max-fidelity value. The extractor matrix has n-m rows.
ExperimentReport pa_distance_exact(const Source& source, int n,
                                   const FieldMatrix& extractor,
                                   double tol_gap = default_tolerances().solver_gap,
                                   const Tolerances& tol = default_tolerances(),
                                   const Budget& budget = default_budget());

// Both sides of the guessing-probability/fidelity identity, via independent
// solvers; the dual extractor comes from complete_invertible + dual_map.
struct DualityReport {
    CertifiedValue pguess_side;
    CertifiedValue fidelity_side;
    double gap = 0.0;
};
DualityReport duality_check(const Source& source, int n, const FieldMatrix& h,
                            double tol_gap = default_tolerances().solver_gap,
                            const Tolerances& tol = default_tolerances(),
                            const Budget& budget = default_budget());

// Same identity for the conjugate-basis family: the source describes the
// privacy-amplification side (prior P_X plus adversary states theta_C(x));
// the compression side decodes the uniform conjugate variable from the
// derived per-copy conditional states on A'B.
DualityReport duality_check_conjugate(const Source& source, int n, const FieldMatrix& h,
                                      double tol_gap = default_tolerances().solver_gap,
                                      const Tolerances& tol = default_tolerances(),
                                      const Budget& budget = default_budget());

// Channel code from the best coset of the compression scheme; ties resolve
// to the lexicographically smallest syndrome.
struct CosetCodeReport {
    FieldVector best_syndrome;
    std::vector<FieldVector> codewords;
    CertifiedValue best_error;
    double average_error = 0.0;
    std::vector<double> coset_errors;
};
CosetCodeReport code_from_compressor(const SymmetricChannel& w, int n, const FieldMatrix& h,
                                     double tol_gap = default_tolerances().solver_gap,
                                     const Tolerances& tol = default_tolerances(),
                                     const Budget& budget = default_budget());

class DeterministicRng;

// Toeplitz hash from the PRNG stream, resampling rank-deficient draws and
// counting them.
ToeplitzResult sample_full_rank_toeplitz(DeterministicRng& rng, std::int64_t d, int m,
                                         int n, int& resamples);

enum class ScanMode { DC, PA, CC };

struct ScanCell {
    int n = 1;
    int m = 0;
    double rate = 0.0;
    double measured = 0.0;
    std::optional<ExtendedReal> bound_lower;
    std::optional<ExtendedReal> bound_sp;
    std::optional<ExtendedReal> prefactor_rhs;
    std::string status = "ok";
    std::uint64_t seed = 0;
    int resamples = 0;
};

// One row per (n, rate, trial): a fresh Toeplitz hash per trial, the exact
// measured value, and the exponent bounds at the realized rate.
// Deterministic given the seed; rank-deficient draws are resampled and
// counted. Per-cell failures mark the row instead of aborting the scan.
std::vector<ScanCell> rate_scan(ScanMode mode, const Source& source,
                                const std::optional<GroupAction>& action,
                                const std::vector<int>& ns,
                                const std::vector<double>& rates, int trials,
                                std::uint64_t seed, std::optional<double> k_constant,
                                double tol_gap = default_tolerances().solver_gap,
                                const Tolerances& tol = default_tolerances(),
                                const Budget& budget = default_budget());

} // namespace cqexp
