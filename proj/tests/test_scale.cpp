#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sscor/rng.hpp"
#include "sscor/scale.hpp"
#include "sscor/types.hpp"

using namespace sscor;

namespace {

std::vector<double> random_sample(rng::Stream& gen, std::size_t n, bool with_ties) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (with_ties) {
            // lattice values produce many exact ties among pairwise differences
            x[i] = std::floor(8.0 * gen.next_unit());
        } else {
            x[i] = gen.next_normal();
        }
    }
    return x;
}

}  // namespace

TEST_CASE("sd on small samples") {
    CHECK(sd(std::vector<double>{1.0, 2.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sd(std::vector<double>{4.0, 4.0, 4.0, 4.0}) == 0.0);
    CHECK(sd(std::vector<double>{0.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(sd(std::vector<double>{1.0}), InvalidInputError);
}

TEST_CASE("mad on small samples") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 100.0};
    CHECK(mad(x, false) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mad(x, true) == doctest::Approx(kMadConsistency).epsilon(1e-15));
    CHECK(mad(std::vector<double>{7.0, 7.0, 7.0}, false) == 0.0);
}

TEST_CASE("qn matches the direct order-statistic definition") {
    // n = 4: h = 3, k = 3; sorted |differences| of {1,2,3,4} are 1,1,1,2,2,3
    CHECK(qn_naive(std::vector<double>{1.0, 2.0, 3.0, 4.0}, false) == 1.0);
    CHECK(qn(std::vector<double>{1.0, 2.0, 3.0, 4.0}, false) == 1.0);

    rng::Stream gen(31, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(gen.next_unit() * 59.0);
        const bool ties = (rep % 2 == 0);
        auto x = random_sample(gen, n, ties);
        const double fast = qn(x, false);
        const double slow = qn_naive(x, false);
        CHECK(fast == slow);  // identical order statistic, bit for bit
    }
}

TEST_CASE("qn scale equivariance") {
    rng::Stream gen(32, 0);

    // dyadic data and power-of-two factors: equivariance is exact in binary fp
    std::vector<double> x(40);
    for (auto& v : x) v = std::floor(2048.0 * (gen.next_unit() - 0.5)) / 1024.0;
    const double q0 = qn(x, false);
    for (int k = -3; k <= 8; ++k) {
        const double a = std::ldexp(1.0, k);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + 5.25;
        CHECK(qn(y, false) == a * q0);
    }

    // general factors: equivariance up to rounding
    for (int rep = 0; rep < 20; ++rep) {
        auto z = random_sample(gen, 25, false);
        const double a = -3.7 + 7.4 * gen.next_unit();
        std::vector<double> za(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) za[i] = a * z[i] + 1.3;
        CHECK(qn(za, false) ==
              doctest::Approx(std::fabs(a) * qn(z, false)).epsilon(1e-12));
    }
}

TEST_CASE("qn is permutation invariant") {
    rng::Stream gen(33, 0);
    auto x = random_sample(gen, 31, false);
    auto y = x;
    std::reverse(y.begin(), y.end());
    std::swap(y[3], y[17]);
    CHECK(qn(x, false) == qn(y, false));
}

TEST_CASE("consistency-scaled qn estimates the normal standard deviation") {
    rng::Stream gen(34, 0);
    std::vector<double> x(10000);
    for (auto& v : x) v = gen.next_normal();
    const double q = qn(x, true);
    CHECK(q == doctest::Approx(1.0).epsilon(0.03));
    CHECK(qn(x, false) * kQnConsistency == q);
}

TEST_CASE("scale estimators reject bad input") {
    CHECK_THROWS_AS(qn(std::vector<double>{1.0}, false), InvalidInputError);
    CHECK_THROWS_AS(qn(std::vector<double>{1.0, std::nan("")}, false), InvalidInputError);
    CHECK_THROWS_AS(mad(std::vector<double>{}, false), InvalidInputError);
}

TEST_CASE("estimate_scale dispatches on the method descriptor") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 100.0};
    ScaleMethod m;

    m.kind = ScaleKind::sd;
    CHECK(estimate_scale(x, m) == sd(x));

    m.kind = ScaleKind::mad;
    m.consistency = true;
    CHECK(estimate_scale(x, m) == mad(x, true));

    m.kind = ScaleKind::qn;
    m.consistency = false;
    CHECK(estimate_scale(x, m) == qn(x, false));

    m.kind = ScaleKind::qn_naive;
    CHECK(estimate_scale(x, m) == qn_naive(x, false));
}
