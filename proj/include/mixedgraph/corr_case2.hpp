#pragma once

#include <span>
#include <vector>

#include "mixedgraph/thresholds.hpp"
#include "mixedgraph/transform.hpp"

namespace mixedgraph {

/// Optimization box margin for the latent correlation and the floor
/// applied to conditional cell probabilities before taking logs.
inline constexpr double kOptClamp = 1e-3;
inline constexpr double kProbFloor = 1e-300;

/// Inputs of the two-step polyserial likelihood: ordinal codes with their
/// estimated thresholds plus the continuous column standardized to sample
/// mean 0 and (1/n)-sd 1.
struct PolyserialProblem {
    std::vector<double> ordinal;    // observed codes
    std::vector<double> levels;     // l+1 ascending codes
    std::vector<double> gammas;     // l thresholds on the latent scale
    std::vector<double> z;          // standardized continuous values
    std::vector<int> level_index;   // per-observation index into levels

    static PolyserialProblem make(std::span<const double> ordinal,
                                  std::span<const double> continuous,
                                  std::span<const double> levels,
                                  std::span<const double> gammas);
};

/// Averaged log-likelihood (1/n) sum_i [log phi(z_i) + log p(level_i | z_i, sigma)].
double polyserial_loglik(const PolyserialProblem& p, double sigma);

/// Analytic derivative of polyserial_loglik in sigma.
double polyserial_loglik_grad(const PolyserialProblem& p, double sigma);

/// Two-step polyserial MLE: bounded scalar argmax over
/// [-1+kOptClamp, 1-kOptClamp] with a first-order-condition polish.
double polyserial_mle(const PolyserialProblem& p);

/// Population-style (1/n) standard deviation of an ordinal column.
double discrete_sd(std::span<const double> column);

/// sum_r (level_{r+1} - level_r) * phi(gamma_r).
double adhoc_denominator(std::span<const double> gammas,
                         std::span<const double> levels);

/// Rank/transform based polyserial estimate: Pearson correlation between
/// the Gaussianized continuous column and the ordinal codes, rescaled by
/// the discrete sd over the threshold denominator. Clamped into
/// [-1+kCorrClamp, 1-kCorrClamp].
double polyserial_adhoc(std::span<const double> ordinal,
                        std::span<const double> transformed_continuous,
                        const ColumnThresholds& thresholds);

/// Convenience overload fitting the transform itself.
double polyserial_adhoc(std::span<const double> ordinal,
                        std::span<const double> continuous_raw,
                        const ColumnThresholds& thresholds,
                        const TransformEstimate& transform);

}  // namespace mixedgraph
