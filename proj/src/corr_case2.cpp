#include "mixedgraph/corr_case2.hpp"

#include <algorithm>
#include <cmath>

#include "mixedgraph/corr_case1.hpp"
#include "mixedgraph/errors.hpp"
#include "mixedgraph/special_functions.hpp"
#include "scalar_opt.hpp"

namespace mixedgraph {

PolyserialProblem PolyserialProblem::make(std::span<const double> ordinal,
                                          std::span<const double> continuous,
                                          std::span<const double> levels,
                                          std::span<const double> gammas) {
    if (ordinal.size() != continuous.size()) {
        throw ValidationError("polyserial: column length mismatch");
    }
    const std::size_t n = ordinal.size();
    if (n < 2) throw ValidationError("polyserial: need n >= 2");
    if (levels.size() < 2 || gammas.size() + 1 != levels.size()) {
        throw ValidationError("polyserial: thresholds do not match levels");
    }
    for (std::size_t r = 1; r < gammas.size(); ++r) {
        if (!(gammas[r] > gammas[r - 1])) {
            throw ValidationError("polyserial: thresholds not increasing");
        }
    }

    PolyserialProblem p;
    p.ordinal.assign(ordinal.begin(), ordinal.end());
    p.levels.assign(levels.begin(), levels.end());
    p.gammas.assign(gammas.begin(), gammas.end());

    p.level_index.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::lower_bound(levels.begin(), levels.end(), ordinal[i]);
        if (it == levels.end() || *it != ordinal[i]) {
            throw ValidationError("polyserial: code outside declared levels");
        }
        p.level_index[i] = static_cast<int>(it - levels.begin());
    }

    double mean = 0.0;
    for (double v : continuous) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : continuous) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var == 0.0) throw ValidationError("polyserial: zero-variance continuous column");
    const double sd = std::sqrt(var);
    p.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.z[i] = (continuous[i] - mean) / sd;
    return p;
}

namespace {

// Conditional cell edges for observation i: thresholds shifted by the
// regression on the standardized continuous value.
struct CellEdges {
    double upper;  // tilde Gamma^r, +inf at the top level
    double lower;  // tilde Gamma^{r-1}, -inf at the bottom level
};

inline CellEdges cell_edges(const PolyserialProblem& p, int ri, double zi,
                            double sigma, double denom) {
    const int l = static_cast<int>(p.gammas.size());
    CellEdges e;
    e.upper = (ri < l) ? (p.gammas[ri] - sigma * zi) / denom : kInf;
    e.lower = (ri > 0) ? (p.gammas[ri - 1] - sigma * zi) / denom : -kInf;
    return e;
}

}  // namespace

double polyserial_loglik(const PolyserialProblem& p, double sigma) {
    const double denom = std::sqrt(1.0 - sigma * sigma);
    const std::size_t n = p.z.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = cell_edges(p, p.level_index[i], p.z[i], sigma, denom);
        const double pu = (e.upper == kInf) ? 1.0 : std_normal_cdf(e.upper);
        const double pl = (e.lower == -kInf) ? 0.0 : std_normal_cdf(e.lower);
        const double cond = std::max(pu - pl, kProbFloor);
        total += std::log(std_normal_pdf(p.z[i])) + std::log(cond);
    }
    const double value = total / static_cast<double>(n);
    if (std::isnan(value)) throw NumericError("polyserial log-likelihood is NaN");
    return value;
}

double polyserial_loglik_grad(const PolyserialProblem& p, double sigma) {
    const double om = 1.0 - sigma * sigma;
    const double denom = std::sqrt(om);
    const double scale = std::pow(om, -1.5);
    const std::size_t n = p.z.size();
    const int l = static_cast<int>(p.gammas.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int ri = p.level_index[i];
        const double zi = p.z[i];
        const auto e = cell_edges(p, ri, zi, sigma, denom);
        const double pu = (e.upper == kInf) ? 1.0 : std_normal_cdf(e.upper);
        const double pl = (e.lower == -kInf) ? 0.0 : std_normal_cdf(e.lower);
        const double cond = std::max(pu - pl, kProbFloor);
        double num = 0.0;
        if (ri < l) num += std_normal_pdf(e.upper) * (p.gammas[ri] * sigma - zi);
        if (ri > 0) num -= std_normal_pdf(e.lower) * (p.gammas[ri - 1] * sigma - zi);
        total += scale * num / cond;
    }
    return total / static_cast<double>(n);
}

double polyserial_mle(const PolyserialProblem& p) {
    const double lo = -1.0 + kOptClamp;
    const double hi = 1.0 - kOptClamp;
    auto f = [&](double s) { return polyserial_loglik(p, s); };
    auto g = [&](double s) { return polyserial_loglik_grad(p, s); };

    const auto res = detail::maximize_scalar(f, lo, hi, 1e-8, 200);
    if (!res.converged) {
        throw NumericError("polyserial MLE did not converge within 200 iterations (last x=" +
                           std::to_string(res.x) + ")");
    }
    return detail::polish_gradient_root(g, res.x, lo, hi, 1e-9, 100);
}

double discrete_sd(std::span<const double> column) {
    const std::size_t n = column.size();
    if (n < 2) throw ValidationError("discrete_sd: need n >= 2");
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var == 0.0) throw ValidationError("discrete_sd: zero-variance column");
    return std::sqrt(var);
}

double adhoc_denominator(std::span<const double> gammas,
                         std::span<const double> levels) {
    if (gammas.size() + 1 != levels.size()) {
        throw ValidationError("adhoc_denominator: thresholds do not match levels");
    }
    double total = 0.0;
    for (std::size_t r = 0; r < gammas.size(); ++r) {
        total += (levels[r + 1] - levels[r]) * std_normal_pdf(gammas[r]);
    }
    return total;
}

double polyserial_adhoc(std::span<const double> ordinal,
                        std::span<const double> transformed_continuous,
                        const ColumnThresholds& thresholds) {
    const double r = pearson(transformed_continuous, ordinal);
    const double sd = discrete_sd(ordinal);
    const double denom = adhoc_denominator(thresholds.gammas, thresholds.levels);
    const double est = r * sd / denom;
    return std::clamp(est, -1.0 + kCorrClamp, 1.0 - kCorrClamp);
}

double polyserial_adhoc(std::span<const double> ordinal,
                        std::span<const double> continuous_raw,
                        const ColumnThresholds& thresholds,
                        const TransformEstimate& transform) {
    std::vector<double> fx(continuous_raw.size());
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] = transform(continuous_raw[i]);
    return polyserial_adhoc(ordinal, fx, thresholds);
}

}  // namespace mixedgraph
