#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/metrics.hpp"
#include "mixedgraph/rng.hpp"
#include "mixedgraph/simulation.hpp"
#include "oracles.hpp"

using namespace mixedgraph;

TEST_CASE("frobenius error") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(4, 4);
    CHECK(frobenius_error(a, a) == 0.0);
    const Eigen::MatrixXd b = a + Eigen::MatrixXd::Identity(4, 4);
    CHECK(frobenius_error(b, a) == doctest::Approx(2.0).epsilon(1e-14));

    Rng rng(111);
    Eigen::MatrixXd x(3, 3), y(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            x(i, j) = rng.normal();
            y(i, j) = rng.normal();
        }
    }
    double brute = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            brute += (x(i, j) - y(i, j)) * (x(i, j) - y(i, j));
        }
    }
    CHECK(frobenius_error(x, y) == doctest::Approx(std::sqrt(brute)).epsilon(1e-14));

    Eigen::MatrixXd wrong(2, 2);
    CHECK_THROWS_AS(frobenius_error(x, wrong), ValidationError);
}

TEST_CASE("tp/fp counting") {
    Eigen::MatrixXd star = Eigen::MatrixXd::Identity(4, 4);
    star(1, 0) = star(0, 1) = 0.3;
    star(3, 2) = star(2, 3) = -0.2;

    CHECK(tp_fp(star, star) == std::pair<int, int>{2, 0});
    CHECK(tp_fp(Eigen::MatrixXd::Identity(4, 4), star) == std::pair<int, int>{0, 0});

    Eigen::MatrixXd hat = Eigen::MatrixXd::Identity(4, 4);
    hat(1, 0) = hat(0, 1) = 0.5;   // true edge found
    hat(3, 2) = hat(2, 3) = 0.1;   // true edge found
    hat(2, 0) = hat(0, 2) = 0.4;   // spurious
    CHECK(tp_fp(hat, star) == std::pair<int, int>{2, 1});

    // Only the lower triangle is read.
    Eigen::MatrixXd asym = hat;
    asym(0, 1) = 99.0;
    asym(0, 2) = -77.0;
    CHECK(tp_fp(asym, star) == tp_fp(hat, star));
}

namespace {

PrecisionPath path_of(const std::vector<Eigen::MatrixXd>& omegas) {
    PrecisionPath path;
    double lambda = 1.0;
    for (const auto& omega : omegas) {
        GlassoSolution sol;
        sol.lambda = lambda;
        lambda /= 2.0;
        sol.omega = omega;
        sol.w = Eigen::MatrixXd::Identity(omega.rows(), omega.cols());
        path.solutions.push_back(std::move(sol));
    }
    path.selected_index = 0;
    return path;
}

}  // namespace

TEST_CASE("roc endpoints and degenerate cases") {
    Eigen::MatrixXd star = Eigen::MatrixXd::Identity(4, 4);
    star(1, 0) = star(0, 1) = 0.3;

    // Single path point recovering the truth exactly: (0,1) -> AUC 1.
    const auto perfect = roc_auc(path_of({star}), star);
    CHECK(perfect.auc == doctest::Approx(1.0).epsilon(1e-14));

    // All-diagonal path: only the appended endpoints remain.
    const auto flat =
        roc_auc(path_of({Eigen::MatrixXd::Identity(4, 4)}), star);
    CHECK(flat.auc == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(roc_auc(path_of({star}), Eigen::MatrixXd::Identity(4, 4)),
                    ValidationError);
    Eigen::MatrixXd complete = Eigen::MatrixXd::Constant(3, 3, 0.4);
    CHECK_THROWS_AS(roc_auc(path_of({complete}), complete), ValidationError);
}

TEST_CASE("roc is invariant to duplicated path points") {
    Eigen::MatrixXd star = Eigen::MatrixXd::Identity(5, 5);
    star(1, 0) = star(0, 1) = 0.3;
    star(4, 2) = star(2, 4) = 0.4;
    Eigen::MatrixXd partial = Eigen::MatrixXd::Identity(5, 5);
    partial(1, 0) = partial(0, 1) = 0.2;
    partial(3, 0) = partial(0, 3) = 0.1;  // one spurious

    const auto once = roc_auc(path_of({partial, star}), star);
    const auto doubled = roc_auc(path_of({partial, partial, star, star}), star);
    CHECK(once.auc == doubled.auc);
    CHECK(once.auc >= 0.0);
    CHECK(once.auc <= 1.0);
}

TEST_CASE("path AUC matches the polygon-area oracle") {
    GraphSpec spec;
    spec.d = 15;
    spec.s = 0.3;
    spec.c = 2.0;
    spec.seed = 112;
    const auto gt = generate_graph(spec);
    MixSpec mix;
    mix.continuous_fraction = 1.0;
    const auto sample = sample_mixed(gt, mix, 300, 1120);
    const auto est = estimate_latent_correlation(sample.dataset, Family::Poly);
    const auto repaired = nearest_psd_correlation(est.values);
    const auto path = select_model(repaired, 300, 0.1, lambda_grid(repaired, 15));

    const auto roc = roc_auc(path, gt.omega_star);
    CHECK(roc.auc == doctest::Approx(oracles::polygon_auc(roc.points)).epsilon(1e-12));
    for (const auto& [fpr, tpr] : roc.points) {
        CHECK(fpr >= 0.0);
        CHECK(fpr <= 1.0);
        CHECK(tpr >= 0.0);
        CHECK(tpr <= 1.0);
    }
}
