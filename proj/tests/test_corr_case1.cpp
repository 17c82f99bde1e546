#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mixedgraph/corr_case1.hpp"
#include "mixedgraph/errors.hpp"
#include "mixedgraph/rng.hpp"
#include "oracles.hpp"

using namespace mixedgraph;

TEST_CASE("pearson basics") {
    std::vector<double> x = {1, 2, 3};
    std::vector<double> y = {1, 2, 4};
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> neg = {-1, -2, -3};
    CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pearson(x, y) == doctest::Approx(oracles::pearson_brute({1, 2, 3}, {1, 2, 4}))
                               .epsilon(1e-15));
    CHECK(pearson(x, y) == doctest::Approx(0.9819805060619659).epsilon(1e-12));

    std::vector<double> flat = {2, 2, 2};
    CHECK_THROWS_AS(pearson(x, flat), ValidationError);
    std::vector<double> shorter = {1, 2};
    CHECK_THROWS_AS(pearson(x, shorter), ValidationError);
}

TEST_CASE("spearman basics and ties") {
    std::vector<double> x = {0.1, 0.7, 1.5, 3.0};
    std::vector<double> gx = {1.0, 2.0, 40.0, 41.0};  // increasing map of x
    CHECK(spearman_rho(x, gx) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> rev = {4.0, 3.0, 2.0, 1.0};
    CHECK(spearman_rho(x, rev) == doctest::Approx(-1.0).epsilon(1e-15));

    std::vector<double> a = {1, 2, 3, 4};
    std::vector<double> b = {1, 3, 2, 4};
    CHECK(spearman_rho(a, b) == doctest::Approx(0.8).epsilon(1e-15));

    // Average ranks under ties.
    const auto r = average_ranks(std::vector<double>{5.0, 1.0, 5.0, 2.0});
    CHECK(r == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}

TEST_CASE("spearman bridge") {
    CHECK(spearman_to_latent(0.0) == 0.0);
    CHECK(std::fabs(spearman_to_latent(1.0) - 1.0) <= 1.01e-6);  // 2 sin(pi/6) = 1, clamped
    CHECK(spearman_to_latent(0.5) ==
          doctest::Approx(2.0 * std::sin(std::numbers::pi / 12.0)).epsilon(1e-15));
    CHECK(std::fabs(spearman_to_latent(0.5) - 0.517638) < 1e-6);
    for (double r = -1.0; r <= 1.0; r += 0.125) {
        CHECK(spearman_to_latent(-r) == -spearman_to_latent(r));
    }
}

TEST_CASE("composed estimator is invariant to monotone maps") {
    Rng rng(51);
    const int n = 400;
    std::vector<double> x(n), y(n), gx(n), hy(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = 0.6 * x[i] + 0.8 * rng.normal();
        gx[i] = std::exp(x[i]);
        hy[i] = y[i] * y[i] * y[i];
    }
    const double base = spearman_to_latent(spearman_rho(x, y));
    CHECK(spearman_to_latent(spearman_rho(gx, hy)) == base);
}

TEST_CASE("bridge estimator is consistent at rho = 0.6") {
    std::vector<double> errors;
    for (int rep = 0; rep < 50; ++rep) {
        Rng rng(600 + rep);
        const int n = 5000;
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = 0.6 * x[i] + std::sqrt(1.0 - 0.36) * rng.normal();
        }
        errors.push_back(std::fabs(spearman_to_latent(spearman_rho(x, y)) - 0.6));
    }
    CHECK(oracles::median(errors) <= 0.02);
}
