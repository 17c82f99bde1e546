#include "mixedgraph/corr_case3.hpp"

#include <algorithm>
#include <cmath>

#include "mixedgraph/corr_case2.hpp"
#include "mixedgraph/errors.hpp"
#include "mixedgraph/special_functions.hpp"
#include "scalar_opt.hpp"

namespace mixedgraph {

namespace {

int level_index(std::span<const double> levels, double v) {
    auto it = std::lower_bound(levels.begin(), levels.end(), v);
    if (it == levels.end() || *it != v) {
        throw ValidationError("value outside declared levels");
    }
    return static_cast<int>(it - levels.begin());
}

inline double edge(std::span<const double> gammas, int idx) {
    // idx in [-1, l]; -1 and l are the infinite boundary thresholds.
    if (idx < 0) return -kInf;
    if (idx >= static_cast<int>(gammas.size())) return kInf;
    return gammas[idx];
}

}  // namespace

ContingencyTable contingency_table(std::span<const double> xj,
                                   std::span<const double> xk,
                                   std::span<const double> levels_j,
                                   std::span<const double> levels_k) {
    if (xj.size() != xk.size()) {
        throw ValidationError("contingency_table: column length mismatch");
    }
    ContingencyTable t;
    t.levels_j.assign(levels_j.begin(), levels_j.end());
    t.levels_k.assign(levels_k.begin(), levels_k.end());
    t.counts.assign(levels_j.size(), std::vector<long>(levels_k.size(), 0));
    for (std::size_t i = 0; i < xj.size(); ++i) {
        ++t.counts[level_index(levels_j, xj[i])][level_index(levels_k, xk[i])];
    }
    t.n = static_cast<long>(xj.size());
    return t;
}

double cell_probability(std::span<const double> gammas_j,
                        std::span<const double> gammas_k, int r, int s,
                        double rho) {
    const double hu = edge(gammas_j, r);
    const double hl = edge(gammas_j, r - 1);
    const double ku = edge(gammas_k, s);
    const double kl = edge(gammas_k, s - 1);
    const double p = bvn_cdf({hu, ku, rho}) - bvn_cdf({hl, ku, rho}) -
                     bvn_cdf({hu, kl, rho}) + bvn_cdf({hl, kl, rho});
    return std::clamp(p, 0.0, 1.0);
}

double polychoric_loglik(const ContingencyTable& table,
                         std::span<const double> gammas_j,
                         std::span<const double> gammas_k, double rho) {
    double total = 0.0;
    for (int r = 0; r < table.rows(); ++r) {
        for (int s = 0; s < table.cols(); ++s) {
            if (table.counts[r][s] == 0) continue;
            const double p = std::max(cell_probability(gammas_j, gammas_k, r, s, rho),
                                      kProbFloor);
            total += static_cast<double>(table.counts[r][s]) * std::log(p);
        }
    }
    return total / static_cast<double>(table.n);
}

double polychoric_loglik_grad(const ContingencyTable& table,
                              std::span<const double> gammas_j,
                              std::span<const double> gammas_k, double rho) {
    double total = 0.0;
    for (int r = 0; r < table.rows(); ++r) {
        for (int s = 0; s < table.cols(); ++s) {
            if (table.counts[r][s] == 0) continue;
            const double p = std::max(cell_probability(gammas_j, gammas_k, r, s, rho),
                                      kProbFloor);
            const double hu = edge(gammas_j, r);
            const double hl = edge(gammas_j, r - 1);
            const double ku = edge(gammas_k, s);
            const double kl = edge(gammas_k, s - 1);
            const double dp = bvn_pdf(hu, ku, rho) - bvn_pdf(hl, ku, rho) -
                              bvn_pdf(hu, kl, rho) + bvn_pdf(hl, kl, rho);
            total += static_cast<double>(table.counts[r][s]) * dp / p;
        }
    }
    return total / static_cast<double>(table.n);
}

double polychoric_mle(const ContingencyTable& table,
                      std::span<const double> gammas_j,
                      std::span<const double> gammas_k) {
    if (gammas_j.size() + 1 != static_cast<std::size_t>(table.rows()) ||
        gammas_k.size() + 1 != static_cast<std::size_t>(table.cols())) {
        throw ValidationError("polychoric: thresholds do not match table dimensions");
    }
    const double lo = -1.0 + kOptClamp;
    const double hi = 1.0 - kOptClamp;
    auto f = [&](double r) { return polychoric_loglik(table, gammas_j, gammas_k, r); };
    auto g = [&](double r) { return polychoric_loglik_grad(table, gammas_j, gammas_k, r); };

    const auto res = detail::maximize_scalar(f, lo, hi, 1e-8, 200);
    if (!res.converged) {
        throw NumericError("polychoric MLE did not converge within 200 iterations (last x=" +
                           std::to_string(res.x) + ")");
    }
    return detail::polish_gradient_root(g, res.x, lo, hi, 1e-9, 100);
}

}  // namespace mixedgraph
