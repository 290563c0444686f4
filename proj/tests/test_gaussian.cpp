#include <doctest.h>

#include <cmath>

#include "cvqss/gaussian.hpp"
#include "support/oracles.hpp"

using namespace cvqss;

namespace {
double qmi_of(const GaussianState& st) {
    return quantum_mutual_information(st, {0}, {1});
}
} // namespace

TEST_CASE("symplectic form") {
    const Matrix o1 = symplectic_form(1);
    CHECK(o1(0, 1) == 1.0);
    CHECK(o1(1, 0) == -1.0);
    CHECK(o1(0, 0) == 0.0);

    const Matrix o2 = symplectic_form(2);
    CHECK(o2.rows() == 4);
    CHECK((o2.block<2, 2>(0, 0) - o1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((o2.block<2, 2>(2, 2) - o1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(o2.block<2, 2>(0, 2).cwiseAbs().maxCoeff() == 0.0);

    for (int n : {1, 2, 3, 5}) {
        const Matrix o = symplectic_form(n);
        CHECK((o * o.transpose() - Matrix::Identity(2 * n, 2 * n))
                  .cwiseAbs()
                  .maxCoeff() == doctest::Approx(0.0));
        CHECK((o + o.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK_THROWS_AS(symplectic_form(0), std::invalid_argument);
}

TEST_CASE("is_symplectic") {
    CHECK(is_symplectic(Matrix::Identity(4, 4), 1e-12));
    Matrix s(2, 2);
    s << std::exp(-0.7), 0, 0, std::exp(0.7);
    CHECK(is_symplectic(s, 1e-12));
    Matrix bad(2, 2);
    bad << 2, 0, 0, 2;
    CHECK_FALSE(is_symplectic(bad, 1e-9));
    CHECK_THROWS_AS(is_symplectic(Matrix::Identity(3, 3), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("symplectic spectrum basics") {
    CHECK(symplectic_spectrum(Matrix::Identity(6, 6)).maxCoeff() ==
          doctest::Approx(1.0).epsilon(1e-12));

    Matrix v = Matrix::Zero(4, 4);
    v.diagonal() << 3, 3, 2, 2;
    const Vector nu = symplectic_spectrum(v);
    CHECK(nu[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(2.0).epsilon(1e-12));

    for (double s : {0.2, 0.9, 1.8}) {
        const Vector nu2 = symplectic_spectrum(tmsv_state({s, 0.0}).cov());
        CHECK(nu2[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(nu2[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    Matrix neg = Matrix::Identity(4, 4);
    neg(0, 0) = -1.0;
    CHECK_THROWS_AS(symplectic_spectrum(neg), std::domain_error);
}

TEST_CASE("spectrum invariance and determinant identity") {
    RngStream rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 4);
        const Matrix v = oracles::random_physical_cov(n, rng, 1.0, 4.0);
        const Vector nu = symplectic_spectrum(v);

        double prod = 1.0;
        for (int k = 0; k < n; ++k) prod *= nu[k] * nu[k];
        CHECK(prod == doctest::Approx(v.determinant()).epsilon(1e-8));

        const Matrix s = oracles::random_symplectic(n, rng).S();
        const Vector nu2 = symplectic_spectrum(
            ((s * v * s.transpose() + (s * v * s.transpose()).transpose()) / 2.0)
                .eval());
        for (int k = 0; k < n; ++k)
            CHECK(nu2[k] == doctest::Approx(nu[k]).epsilon(1e-8));
    }
}

TEST_CASE("two-mode symplectic eigenvalues") {
    using M2 = Eigen::Matrix2d;
    const auto [hi, lo] = two_mode_symplectic_eigenvalues(
        2.0 * M2::Identity(), 3.0 * M2::Identity(), M2::Zero());
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-12));

    const auto [h1, l1] = two_mode_symplectic_eigenvalues(
        M2::Identity(), M2::Identity(), M2::Zero());
    CHECK(h1 == doctest::Approx(1.0));
    CHECK(l1 == doctest::Approx(1.0));

    const double s = 0.8;
    M2 c;
    c << std::sinh(2 * s), 0, 0, -std::sinh(2 * s);
    const auto [h2, l2] = two_mode_symplectic_eigenvalues(
        std::cosh(2 * s) * M2::Identity(), std::cosh(2 * s) * M2::Identity(), c);
    CHECK(h2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-9));

    // p-only correlations without q partners violate the uncertainty bound
    M2 cbad;
    cbad << 0, 0, 0, -0.9;
    CHECK_THROWS_AS(two_mode_symplectic_eigenvalues(M2::Identity(),
                                                    M2::Identity(), cbad),
                    std::domain_error);
}

TEST_CASE("two-mode closed form agrees with the eigensolver route") {
    RngStream rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix v = oracles::random_physical_cov(2, rng, 1.0, 3.5);
        const auto [hi, lo] = two_mode_symplectic_eigenvalues(
            v.topLeftCorner<2, 2>(), v.bottomRightCorner<2, 2>(),
            v.topRightCorner<2, 2>());
        const Vector nu = symplectic_spectrum(v);
        CHECK(hi == doctest::Approx(nu[0]).epsilon(1e-8));
        CHECK(lo == doctest::Approx(nu[1]).epsilon(1e-8));
    }
}

TEST_CASE("entropies") {
    CHECK(entropy_g(1.0) == 0.0);
    CHECK(entropy_g(3.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy_g(5.0) == doctest::Approx(2.7548875021634682).epsilon(1e-12));

    CHECK(von_neumann_entropy(Matrix::Identity(4, 4)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    Matrix v = 3.0 * Matrix::Identity(2, 2);
    CHECK(von_neumann_entropy(v) == doctest::Approx(2.0).epsilon(1e-12));

    Matrix unphys = 0.5 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(von_neumann_entropy(unphys), std::domain_error);

    // monotone nondecreasing in nu
    double prev = 0.0;
    for (double nu = 1.0; nu < 8.0; nu += 0.25) {
        const double h = entropy_g(nu);
        CHECK(h >= prev - 1e-12);
        prev = h;
    }
}

TEST_CASE("shannon entropy") {
    Vector u(4);
    u << 0.25, 0.25, 0.25, 0.25;
    CHECK(shannon_entropy(ProbabilityVector(u)) ==
          doctest::Approx(2.0).epsilon(1e-12));

    Vector point(3);
    point << 1, 0, 0;
    CHECK(shannon_entropy(ProbabilityVector(point)) == 0.0);

    Vector biased(2);
    biased << 0.25, 0.75;
    CHECK(shannon_entropy(ProbabilityVector(biased)) ==
          doctest::Approx(0.8112781244591328).epsilon(1e-12));

    Vector bad(2);
    bad << 0.5, 0.6;
    CHECK_THROWS_AS(ProbabilityVector(bad), std::domain_error);
    Vector negv(2);
    negv << -0.5, 1.5;
    CHECK_THROWS_AS(ProbabilityVector(negv), std::domain_error);
}

TEST_CASE("partial trace") {
    const GaussianState tmsv = tmsv_state({0.6, 0.0});
    const GaussianState red = partial_trace(tmsv, {0});
    CHECK((red.cov() - std::cosh(1.2) * Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    const GaussianState same = partial_trace(tmsv, {0, 1});
    CHECK((same.cov() - tmsv.cov()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(partial_trace(tmsv, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(tmsv, {2}), std::invalid_argument);
}

TEST_CASE("quantum mutual information") {
    // product state: zero
    Matrix v = Matrix::Zero(4, 4);
    v.diagonal() << 2, 2, 3, 3;
    const GaussianState prod(2, Vector::Zero(4), v);
    CHECK(qmi_of(prod) <= 1e-9);

    // TMSV: 2 g(cosh 2s)
    for (double s : {0.4, 0.881373587019543}) {
        const GaussianState tmsv = tmsv_state({s, 0.0});
        CHECK(qmi_of(tmsv) ==
              doctest::Approx(2.0 * entropy_g(std::cosh(2 * s))).epsilon(1e-9));
    }
    // cosh 2s = 3 -> exactly 4 bits
    const double s3 = 0.5 * std::acosh(3.0);
    CHECK(qmi_of(tmsv_state({s3, 0.0})) == doctest::Approx(4.0).epsilon(1e-12));

    const GaussianState tmsv = tmsv_state({0.5, 0.0});
    CHECK_THROWS_AS(quantum_mutual_information(tmsv, {0, 1}, {1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantum_mutual_information(tmsv, {0}, {0}),
                    std::invalid_argument);
}

TEST_CASE("QMI nonnegative and RMIH identity on random states") {
    RngStream rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 2);
        const Matrix v = oracles::random_physical_cov(n, rng, 1.0, 3.0);
        const GaussianState st(n, Vector::Zero(2 * n), v);
        std::vector<int> a{0}, b;
        for (int m = 1; m < n; ++m) b.push_back(m);
        const double qmi = quantum_mutual_information(st, a, b);
        CHECK(qmi >= -1e-9);
        // I(A;B) = H(A) - H(A|B), H(A|B) = H(AB) - H(B)
        const double ha = von_neumann_entropy(partial_trace(st, a));
        const double hb = von_neumann_entropy(partial_trace(st, b));
        const double hab = von_neumann_entropy(st);
        CHECK(qmi == doctest::Approx(ha - (hab - hb)).epsilon(1e-9));
    }
}

TEST_CASE("apply gaussian map") {
    const GaussianState vac = GaussianState::vacuum(1);
    const auto id = SymplecticMap::identity(1);
    const GaussianState same = apply_gaussian_map(vac, id);
    CHECK((same.cov() - vac.cov()).cwiseAbs().maxCoeff() == 0.0);

    Vector d(2);
    d << 1.5, -2.0;
    const GaussianState moved =
        apply_gaussian_map(vac, SymplecticMap::displacement(d));
    CHECK(moved.mean()[0] == 1.5);
    CHECK(moved.mean()[1] == -2.0);
    CHECK((moved.cov() - vac.cov()).cwiseAbs().maxCoeff() == 0.0);

    const double s = 0.45;
    const GaussianState squeezed =
        apply_gaussian_map(vac, single_mode_squeezer({s, 0.0}));
    CHECK(squeezed.cov()(0, 0) == doctest::Approx(std::exp(-2 * s)).epsilon(1e-12));
    CHECK(squeezed.cov()(1, 1) == doctest::Approx(std::exp(2 * s)).epsilon(1e-12));

    Matrix bad = 2.0 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(SymplecticMap(bad, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("squeezers match the generator-exponential oracle") {
    RngStream rng(404);
    CHECK((single_mode_squeezer({0.0, 0.0}).S() - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK((two_mode_squeezer({0.0, 0.0}).S() - Matrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    for (int trial = 0; trial < 25; ++trial) {
        const double s = rng.uniform() * 2.0;
        const double th = rng.uniform() * 6.283185307179586;
        const Matrix s1 = single_mode_squeezer({s, th}).S();
        CHECK((s1 - oracles::expm(oracles::single_mode_generator(s, th)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK(is_symplectic(s1, 1e-9));
        const Matrix s2 = two_mode_squeezer({s, th}).S();
        CHECK((s2 - oracles::expm(oracles::two_mode_generator(s, th)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK(is_symplectic(s2, 1e-9));
    }
    CHECK_THROWS_AS(single_mode_squeezer(SqueezeParam(2.0, 0.0, 1.2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(two_mode_squeezer(SqueezeParam(2.0, 0.0, 1.2)),
                    std::invalid_argument);
}

TEST_CASE("tmsv state") {
    const GaussianState vac2 = tmsv_state({0.0, 0.0});
    CHECK((vac2.cov() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

    const double s = 0.7;
    const GaussianState t = tmsv_state({s, 0.0});
    const double ch = std::cosh(2 * s), sh = std::sinh(2 * s);
    CHECK(t.cov()(0, 0) == doctest::Approx(ch).epsilon(1e-12));
    CHECK(t.cov()(2, 2) == doctest::Approx(ch).epsilon(1e-12));
    CHECK(t.cov()(0, 2) == doctest::Approx(sh).epsilon(1e-12));
    CHECK(t.cov()(1, 3) == doctest::Approx(-sh).epsilon(1e-12));
    CHECK(t.cov()(0, 1) == doctest::Approx(0.0));

    const Vector nu_red = symplectic_spectrum(partial_trace(t, {0}).cov());
    CHECK(nu_red[0] == doctest::Approx(ch).epsilon(1e-12));
}

TEST_CASE("williamson decomposition") {
    const auto id = williamson_decomposition(Matrix::Identity(4, 4));
    CHECK(id.nu.minCoeff() == doctest::Approx(1.0).epsilon(1e-10));

    Matrix v3 = 3.0 * Matrix::Identity(2, 2);
    const auto w3 = williamson_decomposition(v3);
    CHECK(w3.nu[0] == doctest::Approx(3.0).epsilon(1e-10));
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal().setConstant(w3.nu[0]);
    CHECK((w3.S.S() * d * w3.S.S().transpose() - v3).cwiseAbs().maxCoeff() <
          1e-8);

    RngStream rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 4);
        const Matrix v = oracles::random_physical_cov(n, rng, 1.0, 4.0);
        const auto w = williamson_decomposition(v);
        CHECK(is_symplectic(w.S.S(), 1e-9));
        Matrix dd = Matrix::Zero(2 * n, 2 * n);
        for (int k = 0; k < n; ++k) {
            dd(2 * k, 2 * k) = w.nu[k];
            dd(2 * k + 1, 2 * k + 1) = w.nu[k];
        }
        CHECK((w.S.S() * dd * w.S.S().transpose() - v).cwiseAbs().maxCoeff() <
              1e-8);
        const Vector nu_ref = symplectic_spectrum(v);
        for (int k = 0; k < n; ++k)
            CHECK(w.nu[k] == doctest::Approx(nu_ref[k]).epsilon(1e-9));
    }

    Matrix sing = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(williamson_decomposition(sing), std::domain_error);
}

TEST_CASE("gaussian state validation") {
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(GaussianState(1, Vector::Zero(2), asym), std::domain_error);

    CHECK_THROWS_AS(GaussianState(1, Vector::Zero(2), 0.3 * Matrix::Identity(2, 2)),
                    std::domain_error);
    CHECK_THROWS_AS(GaussianState(2, Vector::Zero(2), Matrix::Identity(4, 4)),
                    std::invalid_argument);
}
