#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vdlab/laxcore.hpp"
#include "vdlab/random.hpp"

using namespace vdlab;

namespace {

PhasePoint point1() {
    Vec l(1), t(1);
    l << 0.8;
    t << 0.3;
    return {l, t};
}

}  // namespace

TEST_CASE("involution matrix blocks and involutivity") {
    const Mat c1 = involution_matrix(1);
    CHECK(c1(0, 0) == 0.0);
    CHECK(c1(0, 1) == 1.0);
    CHECK(c1(1, 0) == 1.0);
    CHECK(c1(1, 1) == 0.0);

    const Mat c2 = involution_matrix(2);
    CHECK(c2(0, 2) == 1.0);
    CHECK(c2(1, 3) == 1.0);
    CHECK(c2(2, 0) == 1.0);
    CHECK(c2(3, 1) == 1.0);
    CHECK(c2.cwiseAbs().sum() == doctest::Approx(4.0));

    for (int n : {1, 3, 5}) {
        const Mat c = involution_matrix(n);
        CHECK(((c * c) - Mat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("coupling parameter admissibility") {
    CHECK_THROWS_AS(CouplingParams(0.0, 0.9).validate(), ValidationError);
    CHECK_THROWS_AS(CouplingParams(0.6, 0.0).validate(), ValidationError);
    // sin(2 mu - nu) = 0 at nu = 2 mu
    CHECK_THROWS_AS(CouplingParams(0.6, 1.2).validate(), ValidationError);
    CHECK_NOTHROW(CouplingParams(0.6, 0.9).validate());
}

TEST_CASE("phase point chamber validation") {
    Vec l(2), t(2);
    l << 0.5, 1.0;  // wrong order
    t << 0.0, 0.0;
    CHECK_THROWS_AS(PhasePoint(l, t).validate(), ValidationError);
    l << 1.0, -0.2;  // not positive
    CHECK_THROWS_AS(PhasePoint(l, t).validate(), ValidationError);
    l << 1.0, 0.2;
    CHECK_NOTHROW(PhasePoint(l, t).validate());
}

TEST_CASE("n=1 bundle against independently evaluated constituents") {
    // expected values computed from a standalone scalar evaluation of the
    // z/u formulas at lambda=0.8, theta=0.3, mu=0.6, nu=0.9
    const CouplingParams c(0.6, 0.9);
    const LaxBundle b = build_bundle(point1(), c);

    CHECK(b.z[0].real() == doctest::Approx(-0.62160996827066439).epsilon(1e-12));
    CHECK(b.z[0].imag() == doctest::Approx(-0.8499008736735344).epsilon(1e-12));
    CHECK(b.u[0] == doctest::Approx(1.0529627000632518).epsilon(1e-12));

    // diagonal entries are |F_k|^2 = e^{Theta_k} u_k
    CHECK(b.L(0, 0).real() == doctest::Approx(std::exp(0.3) * b.u[0]).epsilon(1e-12));
    CHECK(b.L(1, 1).real() == doctest::Approx(std::exp(-0.3) * b.u[0]).epsilon(1e-12));
    CHECK(std::abs(b.L(0, 0).imag()) < 1e-14);

    // det(L) = +1: LCL = C forces det^2 = 1, positivity picks the sign
    CHECK(std::abs(b.L.determinant().real() - 1.0) < 1e-12);
    CHECK(std::abs(b.L.determinant().imag()) < 1e-12);
}

TEST_CASE("conjugation symmetry and modulus relations hold for every valid input") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        const CouplingParams c = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, n);
        const LaxBundle b = build_bundle(p, c);
        for (Eigen::Index a = 0; a < n; ++a) {
            CHECK(std::abs(b.z[n + a] - std::conj(b.z[a])) < 1e-12 * (1.0 + std::abs(b.z[a])));
            CHECK(std::abs(b.u[n + a] - b.u[a]) < 1e-12 * (1.0 + b.u[a]));
        }
        for (Eigen::Index j = 0; j < 2 * n; ++j)
            CHECK(std::abs(b.u[j] - std::abs(b.z[j])) < 1e-12 * (1.0 + b.u[j]));
        // u through the real product form agrees with |z|
        const Vec u = u_values(p.lambda, c);
        for (Eigen::Index a = 0; a < n; ++a)
            CHECK(u[a] == doctest::Approx(b.u[a]).epsilon(1e-12));
    }
}

TEST_CASE("quadratic group relation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        const CouplingParams c = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, n);
        const LaxBundle b = build_bundle(p, c);
        CHECK(group_relation_residual(b) < 1e-9);
    }
}

TEST_CASE("Hermiticity and positivity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 5);
        const CouplingParams c = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, n);
        const LaxBundle b = build_bundle(p, c);
        const double scale = std::max(1.0, b.L.cwiseAbs().maxCoeff());
        CHECK((b.L - b.L.adjoint()).cwiseAbs().maxCoeff() / scale < 1e-12);
        Eigen::SelfAdjointEigenSolver<CMat> es(b.L, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("Ruijsenaars type commutation relation") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 3;
        const CouplingParams c = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, n);
        const LaxBundle b = build_bundle(p, c);
        CHECK(commutation_residual(b, DoubledIndex::from(p), c) < 1e-9);
    }

    // entrywise form: 2 sinh(i mu + Lambda_k - Lambda_l) L_{kl} equals the
    // rank-one-plus-C right-hand side
    std::mt19937_64 rng2(17);
    const CouplingParams c = random_couplings(rng2);
    const PhasePoint p = random_phase_point(rng2, 2);
    const LaxBundle b = build_bundle(p, c);
    const DoubledIndex d = DoubledIndex::from(p);
    const Mat C = involution_matrix(2);
    for (Eigen::Index k = 0; k < 4; ++k)
        for (Eigen::Index l = 0; l < 4; ++l) {
            const Complex lhs =
                2.0 * std::sinh(Complex(d.Lambda[k] - d.Lambda[l], c.mu)) * b.L(k, l);
            const Complex rhs = Complex(0, 2.0 * std::sin(c.mu)) * b.F[k] * std::conj(b.F[l]) +
                                Complex(0, 2.0 * std::sin(c.mu - c.nu)) * C(k, l);
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
        }
}

TEST_CASE("Lax spectrum: reciprocal pairs, ordering, n=1 closed form") {
    const CouplingParams c(0.6, 0.9);
    const LaxBundle b = build_bundle(point1(), c);
    const Vec th = lax_spectrum(b);
    REQUIRE(th.size() == 1);
    // n=1: eigenvalues e^{+-2 theta_hat} with product 1, so
    // theta_hat = arccosh(tr L / 2)/2
    const double tr = b.L.trace().real();
    CHECK(th[0] == doctest::Approx(0.5 * std::acosh(tr / 2.0)).epsilon(1e-12));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 4;
        const CouplingParams cc = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, n);
        const Vec t = lax_spectrum(build_bundle(p, cc));
        for (Eigen::Index a = 0; a + 1 < n; ++a) CHECK(t[a] > t[a + 1]);
        CHECK(t[n - 1] > 0.0);

        // eigensolve + sort oracle for the pairing residual
        Eigen::SelfAdjointEigenSolver<CMat> es(build_bundle(p, cc).L, Eigen::EigenvaluesOnly);
        const Vec w = es.eigenvalues();
        for (Eigen::Index k = 0; k < n; ++k)
            CHECK(std::abs(std::log(w[k] * w[2 * n - 1 - k])) < 1e-9);
    }
}

TEST_CASE("c_conjugate gives the exact inverse") {
    std::mt19937_64 rng(29);
    const CouplingParams c = random_couplings(rng);
    const PhasePoint p = random_phase_point(rng, 3);
    const LaxBundle b = build_bundle(p, c);
    const CMat id = b.L * c_conjugate(b.L);
    CHECK((id - CMat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10 *
              std::max(1.0, b.L.cwiseAbs().maxCoeff()));
}
