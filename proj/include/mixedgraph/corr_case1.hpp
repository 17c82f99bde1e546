#pragma once

#include <span>
#include <vector>

namespace mixedgraph {

/// Clamping margin keeping off-diagonal estimates strictly inside (-1,1)
/// for downstream projection and glasso numerics.
inline constexpr double kCorrClamp = 1e-6;

/// Pearson product-moment correlation. Throws ValidationError on length
/// mismatch, n < 2, or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based); ties share the mean of their rank block.
std::vector<double> average_ranks(std::span<const double> x);

/// Spearman rank correlation: Pearson on average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Bridge from Spearman's rho to the latent Pearson correlation,
/// 2 sin(pi rho / 6), clamped into [-1+kCorrClamp, 1-kCorrClamp].
double spearman_to_latent(double rho_sp);

}  // namespace mixedgraph
