#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqexp/matrix.hpp"
#include "support.hpp"

using namespace cqexp;
using testsupport::random_density;
using testsupport::random_hermitian;

namespace {

Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("herm_eig on simple fixed matrices") {
    SpectralDecomposition id2 = herm_eig(Matrix::Identity(2, 2));
    CHECK(id2.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(id2.eigenvalues(1) == doctest::Approx(1.0));

    SpectralDecomposition diag = herm_eig(diag2(3.0, 1.0));
    CHECK(diag.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(diag.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(std::abs(diag.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(diag.eigenvectors(1, 1)) == doctest::Approx(1.0));

    SpectralDecomposition px = herm_eig(pauli_x());
    CHECK(px.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(px.eigenvalues(1) == doctest::Approx(-1.0));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(herm_eig(bad), ValidationError);
}

TEST_CASE("herm_eig reconstruction and unitarity on random input") {
    DeterministicRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform_int(6));
        const Matrix m = random_hermitian(rng, dim);
        const SpectralDecomposition eig = herm_eig(m);
        CHECK((m - eig.reconstruct()).norm() <= 1e-9 * dim);
        CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::Identity(dim, dim))
                  .norm() <= 1e-9);
        for (int i = 0; i + 1 < dim; ++i) {
            CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i + 1));
        }
    }
}

TEST_CASE("herm_eig phase convention is deterministic") {
    DeterministicRng rng(12);
    const Matrix m = random_hermitian(rng, 5);
    const SpectralDecomposition a = herm_eig(m);
    const SpectralDecomposition b = herm_eig(m);
    CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
    for (int k = 0; k < 5; ++k) {
        for (int i = 0; i < 5; ++i) {
            const Complex v = a.eigenvectors(i, k);
            if (std::abs(v) > 1e-9) {
                CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
                CHECK(v.real() > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("mat_pow fixed cases and support convention") {
    for (double p : {-1.0, -0.5, 0.5, 2.0, 3.7}) {
        CHECK((mat_pow(Matrix::Identity(3, 3), p) - Matrix::Identity(3, 3)).norm() <= 1e-12);
    }
    const Matrix half = mat_pow(diag2(4.0, 0.0), 0.5);
    CHECK(half(0, 0).real() == doctest::Approx(2.0));
    CHECK(std::abs(half(1, 1)) <= 1e-12);

    const Matrix sq = mat_pow(diag2(0.5, 0.5), 2.0);
    CHECK(sq(0, 0).real() == doctest::Approx(0.25));
    CHECK(sq(1, 1).real() == doctest::Approx(0.25));

    // 0^p = 0 also for negative exponents: pseudo-power on the support.
    const Matrix pseudo = mat_pow(diag2(4.0, 0.0), -0.5);
    CHECK(pseudo(0, 0).real() == doctest::Approx(0.5));
    CHECK(std::abs(pseudo(1, 1)) <= 1e-12);
}

TEST_CASE("mat_pow rejects indefinite input") {
    CHECK_THROWS_AS(mat_pow(diag2(1.0, -0.5), 0.5), ValidationError);
}

TEST_CASE("mat_pow composition property on random PSD matrices") {
    DeterministicRng rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform_int(4));
        const Matrix a = random_density(rng, dim);
        const double p = 0.2 + rng.uniform01() * 2.0;
        const double q = 0.2 + rng.uniform01() * 2.0;
        CHECK((mat_pow(mat_pow(a, p), q) - mat_pow(a, p * q)).norm() <= 1e-8);
    }
    // Rank-deficient input, positive exponents.
    DeterministicRng rng2(22);
    const Matrix low = random_density(rng2, 4, 2);
    CHECK((mat_pow(mat_pow(low, 0.5), 3.0) - mat_pow(low, 1.5)).norm() <= 1e-8);
}

TEST_CASE("fidelity fixed values") {
    DeterministicRng rng(31);
    const Matrix rho = random_density(rng, 3);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(fidelity(diag2(1.0, 0.0), diag2(0.0, 1.0)) == doctest::Approx(0.0).epsilon(1e-12));

    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const Matrix plus_state = plus * plus.adjoint();
    CHECK(fidelity(diag2(1.0, 0.0), plus_state) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

    CHECK_THROWS_AS(fidelity(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                    ValidationError);
}

TEST_CASE("fidelity symmetry and range on random states") {
    DeterministicRng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix rho = random_density(rng, 4);
        const Matrix sigma = random_density(rng, 4);
        const double f1 = fidelity(rho, sigma);
        const double f2 = fidelity(sigma, rho);
        CHECK(std::abs(f1 - f2) <= 1e-10);
        CHECK(f1 * f1 >= 0.0);
        CHECK(f1 * f1 <= 1.0 + 1e-12);
        if ((rho - sigma).norm() > 1e-4) CHECK(f1 < 1.0);
    }
}

TEST_CASE("partial_trace on product and entangled states") {
    DeterministicRng rng(41);
    const Matrix rho_a = random_density(rng, 2);
    const Matrix sigma_b = random_density(rng, 3);
    const Matrix joint = kron(rho_a, sigma_b);
    CHECK((partial_trace(joint, {2, 3}, {0}) - rho_a).norm() <= 1e-12);
    CHECK((partial_trace(joint, {2, 3}, {1}) - sigma_b).norm() <= 1e-12);

    CVector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const Matrix bell_state = bell * bell.adjoint();
    CHECK((partial_trace(bell_state, {2, 2}, {0}) - Matrix::Identity(2, 2) / 2.0).norm() <=
          1e-12);

    CHECK_THROWS_AS(partial_trace(joint, {2, 2}, {0}), ValidationError);
}

TEST_CASE("partial_trace preserves trace and positivity on random states") {
    DeterministicRng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix rho = random_density(rng, 12);
        const Matrix reduced = partial_trace(rho, {2, 3, 2}, {0, 2});
        CHECK(reduced.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
        const SpectralDecomposition eig = herm_eig(reduced);
        CHECK(eig.eigenvalues.minCoeff() >= -1e-12);
    }
}

TEST_CASE("kron and trace_norm") {
    CHECK((kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Matrix::Identity(4, 4))
              .norm() == 0.0);
    CHECK(trace_norm(diag2(1.0, -1.0)) == doctest::Approx(2.0));
    CHECK(trace_norm(pauli_x()) == doctest::Approx(2.0));
}

TEST_CASE("DensityMatrix validation") {
    CHECK_THROWS_AS(DensityMatrix(diag2(0.75, 0.75)), ValidationError);  // trace 1.5
    CHECK_THROWS_AS(DensityMatrix(diag2(1.5, -0.5)), ValidationError);   // negative
    Matrix skew = Matrix::Zero(2, 2);
    skew(0, 0) = 1.0;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS((void)DensityMatrix(skew), ValidationError); // not Hermitian
    CHECK_NOTHROW([] { DensityMatrix ok(Matrix::Identity(2, 2) / 2.0); }());
}
