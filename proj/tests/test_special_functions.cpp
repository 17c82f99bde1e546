#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/rng.hpp"
#include "mixedgraph/special_functions.hpp"
#include "oracles.hpp"

using namespace mixedgraph;

TEST_CASE("std_normal_pdf matches high-precision constant at 0") {
    CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    for (double x : {0.3, 1.7, 4.2}) {
        CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
    }
    CHECK(std_normal_pdf(40.0) == 0.0);
}

TEST_CASE("std_normal_cdf against quadrature oracle") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(1.959964) ==
          doctest::Approx(oracles::normal_cdf_quadrature(1.959964)).epsilon(1e-12));
    CHECK(std::fabs(std_normal_cdf(1.959964) - 0.975) < 1e-6);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-6.0, 6.0);
        CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-14);
        CHECK(std::fabs(std_normal_cdf(x) - oracles::normal_cdf_quadrature(x)) < 1e-12);
    }
    CHECK(std_normal_cdf(-1.0) < std_normal_cdf(0.5));
}

TEST_CASE("std_normal_quantile round trip and symmetry") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    const double q = oracles::quantile_bisect(
        [](double x) { return std_normal_cdf(x); }, 0.975);
    CHECK(std_normal_quantile(0.975) == doctest::Approx(q).epsilon(1e-12));
    CHECK(std::fabs(std_normal_quantile(0.975) - 1.959964) < 1e-5);

    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform01();
        const double x = std_normal_quantile(p);
        CHECK(std::fabs(std_normal_cdf(x) - p) < 1e-9);
        CHECK(std::fabs(x + std_normal_quantile(1.0 - p)) < 1e-12);
    }
    CHECK_THROWS_AS(std_normal_quantile(0.0), ValidationError);
    CHECK_THROWS_AS(std_normal_quantile(1.0), ValidationError);
    CHECK_THROWS_AS(std_normal_quantile(-0.2), ValidationError);
}

TEST_CASE("bvn_cdf closed forms and limits") {
    CHECK(bvn_cdf({0.0, 0.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-14));
    const double origin_half =
        0.25 + std::asin(0.5) / (2.0 * std::numbers::pi);
    CHECK(bvn_cdf({0.0, 0.0, 0.5}) == doctest::Approx(origin_half).epsilon(1e-9));
    CHECK(std::fabs(bvn_cdf({0.0, 0.0, 0.5}) - 0.3333333) < 1e-7);

    CHECK(bvn_cdf({kInf, 0.73, 0.4}) == std_normal_cdf(0.73));
    CHECK(bvn_cdf({-1.2, kInf, -0.8}) == std_normal_cdf(-1.2));
    CHECK(bvn_cdf({-kInf, 0.5, 0.3}) == 0.0);
    CHECK(bvn_cdf({kInf, kInf, 0.9}) == 1.0);

    // rho at the endpoints degenerates to min/ordering cases
    CHECK(bvn_cdf({0.4, 1.3, 1.0}) == std_normal_cdf(0.4));
    CHECK(bvn_cdf({0.4, -1.3, -1.0}) ==
          doctest::Approx(std::max(0.0, std_normal_cdf(0.4) + std_normal_cdf(-1.3) - 1.0))
              .epsilon(1e-14));

    CHECK_THROWS_AS(bvn_cdf({std::nan(""), 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(bvn_cdf({0.0, 0.0, 1.5}), ValidationError);
}

TEST_CASE("bvn_cdf against 2-D quadrature on random parameters") {
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const double h = rng.uniform(-3.0, 3.0);
        const double k = rng.uniform(-3.0, 3.0);
        // Cover both the central branch and the high-|rho| branch.
        const double rho = (i % 3 == 0) ? rng.uniform(-0.99, -0.925)
                         : (i % 3 == 1) ? rng.uniform(0.925, 0.99)
                                        : rng.uniform(-0.9, 0.9);
        const double got = bvn_cdf({h, k, rho});
        const double want = oracles::bvn_cdf_quadrature(h, k, rho);
        CHECK(std::fabs(got - want) < 1e-7);
    }
}

TEST_CASE("bvn_cdf monotonicity and rectangle identity") {
    Rng rng(14);
    for (int i = 0; i < 30; ++i) {
        const double h = rng.uniform(-2.0, 2.0);
        const double k = rng.uniform(-2.0, 2.0);
        const double rho = rng.uniform(-0.95, 0.95);
        CHECK(bvn_cdf({h + 0.3, k, rho}) >= bvn_cdf({h, k, rho}));
        CHECK(bvn_cdf({h, k + 0.3, rho}) >= bvn_cdf({h, k, rho}));

        const double hp = h - rng.uniform(0.0, 1.5);
        const double kp = k - rng.uniform(0.0, 1.5);
        const double rect = bvn_cdf({h, k, rho}) - bvn_cdf({hp, k, rho}) -
                            bvn_cdf({h, kp, rho}) + bvn_cdf({hp, kp, rho});
        CHECK(rect >= -1e-12);
    }
    // Increasing in rho at the origin.
    double prev = bvn_cdf({0.0, 0.0, -0.9});
    for (double rho = -0.7; rho <= 0.9; rho += 0.2) {
        const double cur = bvn_cdf({0.0, 0.0, rho});
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("d bvn_cdf / d rho equals the bivariate density") {
    Rng rng(15);
    for (int i = 0; i < 20; ++i) {
        const double h = rng.uniform(-2.0, 2.0);
        const double k = rng.uniform(-2.0, 2.0);
        const double rho = rng.uniform(-0.85, 0.85);
        const double eps = 1e-5;
        const double fd = (bvn_cdf({h, k, rho + eps}) - bvn_cdf({h, k, rho - eps})) /
                          (2.0 * eps);
        CHECK(std::fabs(fd - bvn_pdf(h, k, rho)) < 1e-5);
    }
    CHECK(bvn_pdf(kInf, 0.0, 0.3) == 0.0);
    CHECK(bvn_pdf(0.0, -kInf, 0.3) == 0.0);
}
