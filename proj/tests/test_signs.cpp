#include <doctest.h>

#include <cmath>
#include <vector>

#include "sscor/elliptical.hpp"
#include "sscor/rng.hpp"
#include "sscor/signs.hpp"

using namespace sscor;

TEST_CASE("spatial sign of simple vectors") {
    auto s = spatial_sign(std::vector<double>{3.0, 4.0});
    CHECK(s[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(0.8).epsilon(1e-15));

    auto z = spatial_sign(std::vector<double>{0.0, 0.0});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);

    auto a = spatial_sign(std::vector<double>{-2.0, 0.0});
    CHECK(a[0] == -1.0);
    CHECK(a[1] == 0.0);
}

TEST_CASE("spatial sign norm is 0 or 1") {
    rng::Stream gen(5, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double mag = std::exp(8.0 * (gen.next_unit() - 0.5));
        std::vector<double> x{mag * gen.next_normal(), mag * gen.next_normal()};
        auto s = spatial_sign(x);
        const double nrm = std::hypot(s[0], s[1]);
        CHECK(std::fabs(nrm - 1.0) <= 1e-12);
    }
}

TEST_CASE("sscm on hand-checkable configurations") {
    const std::vector<double> origin{0.0, 0.0};

    auto S1 = sscm(SampleMatrix::from_rows({{1, 0}, {-1, 0}}), origin);
    CHECK(S1(0, 0) == 1.0);
    CHECK(S1(0, 1) == 0.0);
    CHECK(S1(1, 1) == 0.0);

    auto S2 = sscm(SampleMatrix::from_rows({{1, 0}, {0, 1}}), origin);
    CHECK(S2(0, 0) == 0.5);
    CHECK(S2(0, 1) == 0.0);
    CHECK(S2(1, 1) == 0.5);

    // a row equal to the location contributes nothing
    auto S3 = sscm(SampleMatrix::from_rows({{0, 0}, {1, 0}}), origin);
    CHECK(S3(0, 0) == 0.5);
    CHECK(S3(0, 1) == 0.0);
    CHECK(S3(1, 1) == 0.0);
}

TEST_CASE("sscm trace counts the rows distinct from the location") {
    rng::Stream gen(17, 3);
    const std::size_t n = 37;
    SampleMatrix X(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        X(i, 0) = gen.next_normal();
        X(i, 1) = gen.next_normal();
    }
    const std::vector<double> t{0.25, -1.5};
    X(4, 0) = t[0];
    X(4, 1) = t[1];
    X(20, 0) = t[0];
    X(20, 1) = t[1];
    auto S = sscm(X, t);
    CHECK(S(0, 0) + S(1, 1) ==
          doctest::Approx(static_cast<double>(n - 2) / n).epsilon(1e-12));
}

TEST_CASE("sscm is invariant under joint positive rescaling") {
    rng::Stream gen(23, 1);
    const std::size_t n = 50;
    SampleMatrix X(n, 2), Y(n, 2);
    const std::vector<double> t{0.7, -0.2};
    const double c = 37.5;
    for (std::size_t i = 0; i < n; ++i) {
        X(i, 0) = 3.0 * gen.next_normal();
        X(i, 1) = 0.2 * gen.next_normal();
        Y(i, 0) = c * (X(i, 0) - t[0]);
        Y(i, 1) = c * (X(i, 1) - t[1]);
    }
    auto A = sscm(X, t);
    auto B = sscm(Y, {0.0, 0.0});
    CHECK(std::fabs(A(0, 0) - B(0, 0)) <= 1e-12);
    CHECK(std::fabs(A(0, 1) - B(0, 1)) <= 1e-12);
    CHECK(std::fabs(A(1, 1) - B(1, 1)) <= 1e-12);
}

TEST_CASE("theoretical sscm values") {
    auto S0 = theoretical_sscm(0.0);
    CHECK(S0(0, 0) == 0.5);
    CHECK(S0(0, 1) == 0.0);
    CHECK(S0(1, 1) == 0.5);

    auto S5 = theoretical_sscm(0.5);
    CHECK(S5(0, 1) == doctest::Approx(0.1339745962155614).epsilon(1e-12));
    CHECK(S5(0, 0) == 0.5);

    CHECK(theoretical_sscm(1.0)(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(theoretical_sscm(-1.0)(0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_THROWS_AS(theoretical_sscm(1.0 + 1e-6), InvalidInputError);
}

TEST_CASE("empirical sscm approaches the theoretical one") {
    for (double rho : {0.0, -0.3, 0.8}) {
        EllipticalSpec spec;
        spec.rho = rho;
        SampleMatrix X = sample(spec, 1000000, SeedSpec{99, static_cast<std::uint64_t>(10 * (rho + 2))});
        auto S = sscm(X, {0.0, 0.0});
        auto T = theoretical_sscm(rho);
        CHECK(std::fabs(S(0, 0) - T(0, 0)) < 3e-3);
        CHECK(std::fabs(S(0, 1) - T(0, 1)) < 3e-3);
        CHECK(std::fabs(S(1, 1) - T(1, 1)) < 3e-3);
    }
}

TEST_CASE("asymptotic constants at rho = 0 and rho = 0.5") {
    auto c0 = asym_constants(0.0);
    CHECK(c0.delta == 0.0);
    CHECK(c0.zeta == 0.25);
    CHECK(c0.alpha == 0.375);
    CHECK(c0.beta == 0.0);
    CHECK(c0.gamma == 0.125);
    CHECK(c0.w == 0.125);

    auto c5 = asym_constants(0.5);
    CHECK(c5.delta == doctest::Approx(0.1339745962155614).epsilon(1e-12));
    CHECK(c5.zeta == doctest::Approx(0.2679491924311227).epsilon(1e-12));
    CHECK(c5.alpha == doctest::Approx(0.3660254037844386).epsilon(1e-12));
    CHECK(c5.beta == doctest::Approx(0.0669872981077807).epsilon(1e-12));
    CHECK(c5.gamma == doctest::Approx(0.1339745962155614).epsilon(1e-12));
    CHECK(c5.w == doctest::Approx(0.1160254037844386).epsilon(1e-12));

    // the boundary itself is admissible and degenerate (w = 0) ...
    auto c1 = asym_constants(1.0);
    CHECK(c1.delta == 0.5);
    CHECK(c1.gamma == 0.25);
    CHECK(c1.alpha == 0.25);
    CHECK(c1.w == 0.0);
    // ... but anything beyond it is rejected
    CHECK_THROWS_AS(asym_constants(1.0 + 1e-9), InvalidInputError);
    CHECK_THROWS_AS(asym_constants(-1.5), InvalidInputError);
    CHECK_THROWS_AS(asym_constants(std::nan("")), InvalidInputError);
}

TEST_CASE("asymptotic constant identities on a dense grid") {
    for (int i = -99; i <= 99; ++i) {
        const double rho = i / 100.0;
        auto c = asym_constants(rho);
        CHECK(std::fabs(c.alpha + c.gamma - 0.5) <= 1e-12);
        CHECK(std::fabs(c.zeta - 2.0 * c.gamma) <= 1e-12);
        CHECK(std::fabs(c.w - (c.gamma - c.delta * c.delta)) <= 1e-12);
        CHECK(std::fabs(c.beta - 0.5 * c.delta) <= 1e-12);
        CHECK(std::isfinite(c.w));
    }
}

TEST_CASE("asymptotic constants are continuous through rho = 0") {
    auto c = asym_constants(1e-8);
    CHECK(std::fabs(c.zeta - 0.25) < 1e-6);
    CHECK(std::fabs(c.alpha - 0.375) < 1e-6);
    CHECK(std::fabs(c.gamma - 0.125) < 1e-6);
    CHECK(std::fabs(c.w - 0.125) < 1e-6);
    CHECK(std::fabs(c.delta) < 1e-6);
}
