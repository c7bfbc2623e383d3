#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqexp/discrimination.hpp"
#include "support.hpp"

using namespace cqexp;
using namespace testsupport;

namespace {

Matrix ket_state(int dim, int k) {
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return m;
}

Matrix plus_state() {
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return plus * plus.adjoint();
}

void check_povm(const std::vector<Matrix>& ops, double tol = 1e-9) {
    REQUIRE(!ops.empty());
    Matrix sum = Matrix::Zero(ops[0].rows(), ops[0].cols());
    for (const Matrix& op : ops) {
        const SpectralDecomposition eig = herm_eig(op);
        CHECK(eig.eigenvalues.minCoeff() >= -tol);
        sum += op;
    }
    CHECK((sum - Matrix::Identity(sum.rows(), sum.cols())).norm() <= tol);
}

} // namespace

TEST_CASE("helstrom fixed values") {
    const Matrix zero = ket_state(2, 0);
    CHECK(helstrom(0.5, zero, 0.5, zero) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(helstrom(0.5, zero, 0.5, ket_state(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(helstrom(0.5, zero, 0.5, plus_state()) ==
          doctest::Approx(0.5 * (1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("pretty good measurement basics") {
    const Ensemble orthogonal(ProbabilityVector::uniform(2),
                              {ket_state(2, 0), ket_state(2, 1)});
    const PGMResult pgm_orth = pretty_good_measurement(orthogonal);
    CHECK(pgm_orth.success == doctest::Approx(1.0).epsilon(1e-10));
    check_povm(pgm_orth.operators);

    // Identical states, uniform priors: PGM succeeds with the max prior 1/k.
    DeterministicRng rng(91);
    const Matrix rho = random_density(rng, 2);
    const Ensemble identical(ProbabilityVector::uniform(4), {rho, rho, rho, rho});
    CHECK(pretty_good_measurement(identical).success ==
          doctest::Approx(0.25).epsilon(1e-10));

    // Identical states, skewed priors: PGM yields sum of squared priors.
    const Ensemble skewed(ProbabilityVector({0.9, 0.1}), {rho, rho});
    CHECK(pretty_good_measurement(skewed).success ==
          doctest::Approx(0.81 + 0.01).epsilon(1e-10));

    // Primal feasibility: PGM never beats the Helstrom value.
    const Ensemble binary(ProbabilityVector::uniform(2), {ket_state(2, 0), plus_state()});
    const double h = helstrom(0.5, ket_state(2, 0), 0.5, plus_state());
    CHECK(pretty_good_measurement(binary).success <= h + 1e-12);
    check_povm(pretty_good_measurement(binary).operators);
}

TEST_CASE("pguess brackets the Helstrom value on binary ensembles") {
    DeterministicRng rng(92);
    for (int trial = 0; trial < 12; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform_int(3));
        const std::vector<double> priors = random_distribution(rng, 2);
        const Matrix r0 = random_density(rng, dim);
        const Matrix r1 = random_density(rng, dim);
        const double exact = helstrom(priors[0], r0, priors[1], r1);
        const PguessResult pg =
            pguess(Ensemble(ProbabilityVector(priors), {r0, r1}), 1e-9);
        CHECK(pg.value.gap() <= 1e-9);
        CHECK(pg.value.lower <= exact + 1e-9);
        CHECK(pg.value.upper >= exact - 1e-9);
    }
}

TEST_CASE("pguess matches the classical MAP value on commuting ensembles") {
    DeterministicRng rng(93);
    for (int trial = 0; trial < 6; ++trial) {
        const std::vector<double> priors = random_distribution(rng, 4);
        std::vector<std::vector<double>> w(3, std::vector<double>(4));
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 4; ++x) w[y][x] = 0.0;
        }
        for (int x = 0; x < 4; ++x) {
            const std::vector<double> column = random_distribution(rng, 3);
            for (int y = 0; y < 3; ++y) w[y][x] = column[y];
        }
        std::vector<Matrix> states;
        for (int x = 0; x < 4; ++x) {
            Matrix m = Matrix::Zero(3, 3);
            for (int y = 0; y < 3; ++y) m(y, y) = w[y][x];
            states.push_back(std::move(m));
        }
        const double expected = classical_map_value(priors, w);
        const PguessResult pg = pguess(Ensemble(ProbabilityVector(priors), states), 1e-9);
        CHECK(std::abs(pg.value.mid() - expected) <= 1e-8);
    }
}

TEST_CASE("pguess on orthogonal and identical ensembles") {
    const Ensemble orthogonal(ProbabilityVector::uniform(3),
                              {ket_state(3, 0), ket_state(3, 1), ket_state(3, 2)});
    const PguessResult pg = pguess(orthogonal, 1e-10);
    CHECK(pg.value.lower == doctest::Approx(1.0).epsilon(1e-10));

    // Identical states: the optimum is the largest prior.
    DeterministicRng rng(94);
    const Matrix rho = random_density(rng, 2);
    const PguessResult skew =
        pguess(Ensemble(ProbabilityVector({0.7, 0.2, 0.1}), {rho, rho, rho}), 1e-8);
    CHECK(std::abs(skew.value.mid() - 0.7) <= 1e-7);

    // Single-hypothesis ensembles are certain.
    const PguessResult single = pguess(Ensemble(ProbabilityVector({1.0}), {rho}), 1e-12);
    CHECK(single.value.lower == 1.0);
    CHECK(single.value.upper == 1.0);
}

TEST_CASE("pguess certificates are feasible") {
    DeterministicRng rng(95);
    for (int trial = 0; trial < 5; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_int(3));
        const std::vector<double> priors = random_distribution(rng, k);
        std::vector<Matrix> states;
        for (int x = 0; x < k; ++x) states.push_back(random_density(rng, 4));
        const Ensemble e(ProbabilityVector(priors), states);
        const PguessResult pg = pguess(e, 1e-9);

        // Range and measurement validity.
        const double max_prior = *std::max_element(priors.begin(), priors.end());
        CHECK(pg.value.lower >= max_prior - 1e-9);
        CHECK(pg.value.upper <= 1.0 + 1e-9);
        check_povm(pg.measurement);

        // Dual operator dominates every weighted state.
        for (int x = 0; x < k; ++x) {
            const Matrix diff = pg.dual - priors[x] * states[x];
            CHECK(herm_eig(diff).eigenvalues.minCoeff() >= -1e-10);
        }
        // Reported upper bound is the dual trace.
        CHECK(pg.value.upper >= pg.dual.trace().real() - 1e-12);
    }
}

TEST_CASE("pguess raises a diagnostic error at an impossible cap") {
    DeterministicRng rng(96);
    const Matrix r0 = random_density(rng, 3);
    const Matrix r1 = random_density(rng, 3);
    const Ensemble e(ProbabilityVector::uniform(2), {r0, r1});
    CHECK_THROWS_AS(pguess(e, 1e-30, 1), SolverError);
    try {
        pguess(e, 1e-30, 1);
    } catch (const SolverError& err) {
        CHECK(err.lower > 0.5);
        CHECK(err.upper >= err.lower);
        CHECK(err.iterations == 1);
    }
}

TEST_CASE("max_fidelity_uniform on product and perfectly-recorded inputs") {
    DeterministicRng rng(97);
    const Matrix tau = random_density(rng, 3);
    // All conditionals equal: sigma = tau is optimal and the value is 1.
    const MaxFidelityResult product =
        max_fidelity_uniform(2, {0.5, 0.5}, {tau, tau}, 1e-9);
    CHECK(product.value.lower == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((product.optimizer - tau).norm() <= 1e-6);

    // Orthogonal pure conditionals, k=2: the optimum is one half for any priors.
    const MaxFidelityResult orth = max_fidelity_uniform(
        2, {0.35, 0.65}, {ket_state(2, 0), ket_state(2, 1)}, 1e-9);
    CHECK(orth.value.lower == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(orth.value.gap() <= 1e-9);
}

TEST_CASE("max_fidelity_uniform certified on random CQ blocks") {
    DeterministicRng rng(98);
    for (int trial = 0; trial < 8; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_int(3));
        const std::vector<double> weights = random_distribution(rng, k);
        std::vector<Matrix> states;
        for (int x = 0; x < k; ++x) states.push_back(random_density(rng, 3));
        const MaxFidelityResult mf = max_fidelity_uniform(k, weights, states, 1e-9);
        CHECK(mf.value.gap() <= 1e-9);
        CHECK(mf.value.lower >= 1.0 / k - 1e-9);
        CHECK(mf.value.upper <= 1.0 + 1e-9);

        // The certified upper bound dominates random feasible points.
        for (int probe = 0; probe < 20; ++probe) {
            const Matrix sigma = random_density(rng, 3);
            double value = 0.0;
            for (int x = 0; x < k; ++x) {
                value += std::sqrt(weights[x] / k) * fidelity(states[x], sigma);
            }
            CHECK(value * value <= mf.value.upper + 1e-9);
        }
    }
}

TEST_CASE("max_fidelity_uniform block-diagonal wrapper") {
    DeterministicRng rng(99);
    const ProbabilityVector p(random_distribution(rng, 2));
    const CQChannel w = random_mixed_channel(rng, 2, 2);
    const BipartiteState cq = build_cq_state(p, w);
    const MaxFidelityResult a = max_fidelity_uniform(cq, 1e-9);
    const MaxFidelityResult b = max_fidelity_uniform(
        2, {p[0], p[1]}, {w.output(0).matrix(), w.output(1).matrix()}, 1e-9);
    CHECK(std::abs(a.value.mid() - b.value.mid()) <= 1e-8);

    // Non-classical input is rejected.
    CVector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const BipartiteState entangled(pure_state(bell), 2, 2);
    CHECK_THROWS_AS(max_fidelity_uniform(entangled, 1e-9), ValidationError);
}
