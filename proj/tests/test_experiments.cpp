#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqexp/experiments.hpp"
#include "cqexp/rng.hpp"
#include "support.hpp"

using namespace cqexp;
using namespace testsupport;

namespace {

CQChannel orthogonal_channel() {
    Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    one(1, 1) = 1.0;
    std::vector<DensityMatrix> outputs{DensityMatrix(zero), DensityMatrix(one)};
    return CQChannel(std::move(outputs));
}

CQChannel zero_plus_channel() {
    CVector zero(2), plus(2);
    zero << 1.0, 0.0;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    std::vector<DensityMatrix> outputs{pure_state(zero), pure_state(plus)};
    return CQChannel(std::move(outputs));
}

Source uniform_source(CQChannel w) {
    const int d = static_cast<int>(w.d());
    return Source{ProbabilityVector::uniform(d), std::move(w)};
}

FieldMatrix parity_check() { return FieldMatrix(2, 1, 2, {1, 1}); }

} // namespace

TEST_CASE("dc_error_exact trivial regimes") {
    // Full compression: nothing remains to guess.
    const Source src = uniform_source(zero_plus_channel());
    const ExperimentReport full =
        dc_error_exact(src, 1, FieldMatrix::identity(2, 1));
    CHECK(full.measured <= 1e-12);

    // No compression but perfect side information.
    const Source orth = uniform_source(orthogonal_channel());
    const ExperimentReport perfect = dc_error_exact(orth, 1, FieldMatrix(2, 0, 1));
    CHECK(perfect.measured <= 1e-9);
}

TEST_CASE("dc_error_exact matches the per-coset Helstrom oracle") {
    const Source src = uniform_source(zero_plus_channel());
    const ExperimentReport report = dc_error_exact(src, 2, parity_check(), 1e-10);

    // Coset {00, 11}: product states |00> and |++> with overlap 1/2;
    // coset {01, 10}: |0+> and |+0> with the same overlap.
    const double h = 0.5 * (1.0 + std::sqrt(1.0 - 0.25));
    CHECK(report.measured == doctest::Approx(1.0 - h).epsilon(1e-8));
    CHECK(report.cert_gap <= 1e-9);
    REQUIRE(report.per_syndrome.size() == 2);
    for (const SyndromeCell& cell : report.per_syndrome) {
        CHECK(cell.prob == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(cell.value.mid() == doctest::Approx(h).epsilon(1e-8));
    }

    // The optimal decoder is at least as good as the PGM decoder.
    CHECK(report.measured <= report.measured_alt + 1e-10);
}

TEST_CASE("dc_error_exact error is monotone in the compressed size") {
    DeterministicRng rng(111);
    const Source src{ProbabilityVector(random_distribution(rng, 2)),
                     random_pure_channel(rng, 2, 2)};
    // Nested rows: each H extends the previous one.
    const FieldMatrix h1(2, 1, 3, {1, 1, 0});
    const FieldMatrix h2(2, 2, 3, {1, 1, 0, 0, 1, 1});
    const FieldMatrix h3 = FieldMatrix::identity(2, 3);
    const double e0 = dc_error_exact(src, 3, FieldMatrix(2, 0, 3)).measured;
    const double e1 = dc_error_exact(src, 3, h1).measured;
    const double e2 = dc_error_exact(src, 3, h2).measured;
    const double e3 = dc_error_exact(src, 3, h3).measured;
    CHECK(e1 <= e0 + 1e-9);
    CHECK(e2 <= e1 + 1e-9);
    CHECK(e3 <= e2 + 1e-9);
    CHECK(e3 <= 1e-10);
}

TEST_CASE("dc_error_exact validates its inputs") {
    const Source src = uniform_source(zero_plus_channel());
    CHECK_THROWS_AS(dc_error_exact(src, 2, FieldMatrix(2, 2, 2, {1, 1, 1, 1})),
                    ValidationError); // rank deficient
    CHECK_THROWS_AS(dc_error_exact(src, 3, parity_check()), ValidationError); // wrong n
    Budget tiny;
    tiny.max_enumeration = 2;
    CHECK_THROWS_AS(dc_error_exact(src, 2, parity_check(), 1e-8, default_tolerances(), tiny),
                    ResourceError);
}

TEST_CASE("pa_distance_exact on extreme and random instances") {
    // Uniform X with trivial side information and a full-rank extractor:
    // the output is exactly uniform.
    std::vector<DensityMatrix> trivial{DensityMatrix(Matrix::Identity(1, 1)),
                                       DensityMatrix(Matrix::Identity(1, 1))};
    const Source no_info{ProbabilityVector::uniform(2), CQChannel(std::move(trivial))};
    const ExperimentReport clean =
        pa_distance_exact(no_info, 1, FieldMatrix::identity(2, 1));
    CHECK(clean.measured <= 1e-9);
    CHECK(clean.measured_alt == doctest::Approx(1.0).epsilon(1e-9));

    // One extracted bit whose value the adversary holds verbatim.
    const Source copied{ProbabilityVector::uniform(2), orthogonal_channel()};
    const ExperimentReport leaked =
        pa_distance_exact(copied, 1, FieldMatrix::identity(2, 1));
    CHECK(leaked.measured_alt == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(leaked.measured == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    // Distance and fidelity are complementary by definition.
    DeterministicRng rng(112);
    const Source random_src{ProbabilityVector(random_distribution(rng, 2)),
                            random_mixed_channel(rng, 2, 2)};
    const ExperimentReport r =
        pa_distance_exact(random_src, 2, FieldMatrix(2, 1, 2, {1, 1}));
    CHECK(r.measured * r.measured + r.measured_alt == doctest::Approx(1.0).epsilon(1e-10));
    // The optimized fidelity dominates the fixed-marginal fidelity.
    CHECK(r.per_syndrome.back().value.upper >= r.measured_alt - 1e-9);
}

TEST_CASE("duality_check closes the gap on small instances") {
    // Trivial hash: both sides compare against the unconditioned problem.
    DeterministicRng rng(113);
    const Source src{ProbabilityVector(random_distribution(rng, 2)),
                     random_pure_channel(rng, 2, 2)};
    const DualityReport trivial = duality_check(src, 1, FieldMatrix(2, 0, 1), 1e-8);
    CHECK(trivial.gap <= 1e-6);

    const Source zp = uniform_source(zero_plus_channel());
    const DualityReport m1 = duality_check(zp, 1, FieldMatrix::identity(2, 1), 1e-8);
    CHECK(m1.gap <= 1e-6);
    CHECK(m1.pguess_side.mid() == doctest::Approx(1.0).epsilon(1e-8));

    const DualityReport n2 = duality_check(zp, 2, parity_check(), 1e-8);
    CHECK(n2.gap <= 1e-6);
    CHECK(n2.pguess_side.gap() <= 1e-8);
    CHECK(n2.fidelity_side.gap() <= 1e-8);

    // Mixed-output source: the purifying system is nontrivial.
    const Source mixed{ProbabilityVector(random_distribution(rng, 2)),
                       random_mixed_channel(rng, 2, 2)};
    const DualityReport with_c = duality_check(mixed, 2, parity_check(), 1e-8);
    CHECK(with_c.gap <= 1e-6);
}

TEST_CASE("duality_check_conjugate closes the gap") {
    DeterministicRng rng(114);
    for (int trial = 0; trial < 3; ++trial) {
        const Source src{ProbabilityVector(random_distribution(rng, 2)),
                         random_mixed_channel(rng, 2, 2)};
        const DualityReport r1 = duality_check_conjugate(src, 1, FieldMatrix::identity(2, 1), 1e-8);
        CHECK(r1.gap <= 1e-6);
        const DualityReport r2 = duality_check_conjugate(src, 2, parity_check(), 1e-8);
        CHECK(r2.gap <= 1e-6);
    }
}

TEST_CASE("code_from_compressor picks the best coset") {
    // Orthogonal outputs: every coset decodes perfectly.
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    Matrix flip = Matrix::Zero(2, 2);
    flip(0, 1) = 1.0;
    flip(1, 0) = 1.0;
    const SymmetricChannel orth = symmetric_channel_from_unitaries(
        DensityMatrix(zero), {Matrix::Identity(2, 2), flip});
    const CosetCodeReport perfect = code_from_compressor(orth, 2, parity_check());
    for (double e : perfect.coset_errors) CHECK(e <= 1e-9);
    CHECK(perfect.best_syndrome == FieldVector{0});
    CHECK(perfect.codewords.size() == 2);

    // Dihedral qubit channel: the minimum never exceeds the average.
    const SymmetricChannel dihedral = symmetric_channel_dihedral(0.35);
    const CosetCodeReport report = code_from_compressor(dihedral, 2, parity_check());
    CHECK(report.best_error.upper <= report.average_error + 1e-12);
    CHECK(report.codewords.size() == 2);

    // BSC embedding matches an exhaustive classical maximum-likelihood oracle.
    const double p = 0.1;
    const SymmetricChannel bsc = bsc_channel(p);
    const FieldMatrix h(2, 1, 3, {1, 1, 1});
    const CosetCodeReport coded = code_from_compressor(bsc, 3, h);
    // Classical oracle: codebook = coset, channel = BSC^3, ML decoding.
    double best_classical = 1.0;
    for (std::int64_t syndrome = 0; syndrome < 2; ++syndrome) {
        const auto codebook = coset_enumerate(h, {syndrome});
        double success = 0.0;
        for (std::int64_t y = 0; y < 8; ++y) {
            const FieldVector yv = decode_digits(y, 2, 3);
            double best = 0.0;
            for (const FieldVector& c : codebook) {
                double like = 1.0;
                for (int i = 0; i < 3; ++i) like *= (yv[i] == c[i]) ? (1.0 - p) : p;
                best = std::max(best, like / codebook.size());
            }
            success += best;
        }
        best_classical = std::min(best_classical, 1.0 - success);
    }
    CHECK(coded.best_error.upper == doctest::Approx(best_classical).epsilon(1e-8));

    // Average coset error equals the compression error (exact identity).
    const Source src = uniform_source(bsc.channel);
    const ExperimentReport compression = dc_error_exact(src, 3, h);
    CHECK(coded.average_error == doctest::Approx(compression.measured).epsilon(1e-9));
}

TEST_CASE("rate_scan determinism and degenerate reproduction") {
    DeterministicRng rng(115);
    const Source src{ProbabilityVector(random_distribution(rng, 2)),
                     random_pure_channel(rng, 2, 2)};

    const std::vector<ScanCell> rows = rate_scan(ScanMode::DC, src, std::nullopt, {1, 2},
                                                 {0.5, 1.0}, 2, 424242, std::nullopt);
    CHECK(rows.size() == 8);
    const std::vector<ScanCell> again = rate_scan(ScanMode::DC, src, std::nullopt, {1, 2},
                                                  {0.5, 1.0}, 2, 424242, std::nullopt);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].measured == again[i].measured);
        CHECK(rows[i].seed == again[i].seed);
        CHECK(rows[i].status == again[i].status);
    }

    // A single full-compression cell reproduces dc_error_exact directly.
    const std::vector<ScanCell> single =
        rate_scan(ScanMode::DC, src, std::nullopt, {1}, {1.0}, 1, 7, std::nullopt);
    REQUIRE(single.size() == 1);
    CHECK(single[0].m == 1);
    const ExperimentReport direct = dc_error_exact(src, 1, FieldMatrix::identity(2, 1));
    CHECK(single[0].measured == doctest::Approx(direct.measured).epsilon(1e-12));

    // Measured decay is positive above the conditional entropy.
    const BipartiteState psi = build_cq_state(src.p, src.w);
    const double h_cond = von_neumann_cond(psi);
    const double rate = h_cond + 0.6 * (1.0 - h_cond);
    const std::vector<ScanCell> decay =
        rate_scan(ScanMode::DC, src, std::nullopt, {1, 2, 3}, {rate}, 1, 99, std::nullopt);
    for (const ScanCell& cell : decay) {
        CHECK(cell.status.substr(0, 2) == "ok");
        if (cell.measured > 0.0 && cell.m > 0 && cell.m < cell.n) {
            CHECK(-std::log2(cell.measured) / cell.n > 0.0);
        }
        CHECK(cell.bound_lower.has_value());
        CHECK(cell.bound_sp.has_value());
    }
}

TEST_CASE("rate_scan PA mode carries the finite-n right-hand side when K is given") {
    DeterministicRng rng(116);
    const Source src{ProbabilityVector(random_distribution(rng, 2)),
                     random_mixed_channel(rng, 2, 2)};
    const std::vector<ScanCell> rows =
        rate_scan(ScanMode::PA, src, std::nullopt, {2}, {0.5}, 1, 5, 1.5);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].prefactor_rhs.has_value());
    const std::vector<ScanCell> no_k =
        rate_scan(ScanMode::PA, src, std::nullopt, {2}, {0.5}, 1, 5, std::nullopt);
    CHECK_FALSE(no_k[0].prefactor_rhs.has_value());
    CHECK(rows[0].measured == no_k[0].measured);
}

TEST_CASE("rate_scan cc mode needs a symmetry action") {
    DeterministicRng rng(117);
    const Source src{ProbabilityVector::uniform(2), random_pure_channel(rng, 2, 2)};
    CHECK_THROWS_AS(
        rate_scan(ScanMode::CC, src, std::nullopt, {2}, {0.5}, 1, 1, std::nullopt),
        ValidationError);

    const SymmetricChannel bsc = bsc_channel(0.05);
    const Source bsc_src = uniform_source(bsc.channel);
    const std::vector<ScanCell> rows =
        rate_scan(ScanMode::CC, bsc_src, bsc.action, {2}, {0.5}, 1, 11, std::nullopt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status.substr(0, 2) == "ok");
    CHECK(rows[0].measured >= 0.0);
    CHECK(rows[0].bound_lower.has_value());
}

TEST_CASE("non-prime alphabets are rejected by the experiment layer") {
    DeterministicRng rng(118);
    const Source bad{ProbabilityVector::uniform(4), random_pure_channel(rng, 4, 2)};
    CHECK_THROWS_AS(dc_error_exact(bad, 1, FieldMatrix(2, 0, 1)), ValidationError);
}
