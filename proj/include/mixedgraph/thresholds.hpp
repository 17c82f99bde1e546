#pragma once

#include <span>
#include <vector>

#include "mixedgraph/dataset.hpp"

namespace mixedgraph {

/// Latent-scale thresholds stay clamped to this magnitude; sample
/// proportions can only escape (Phi(-8), Phi(8)) on pathological inputs.
inline constexpr double kGammaCap = 8.0;

/// Estimated cut-points of one ordinal column on the latent Gaussian
/// scale. gammas[r] = Phi^{-1}(cum_props[r]) by construction, so the two
/// vectors are strictly increasing together.
struct ColumnThresholds {
    std::vector<double> levels;     // l+1 ascending codes
    std::vector<double> gammas;     // l interior thresholds
    std::vector<double> cum_props;  // l cumulative proportions in (0,1)

    int level_count() const { return static_cast<int>(levels.size()); }
};

/// Cumulative sample proportions P(X <= level_r) for r = 1..l (top level
/// excluded). Throws ValidationError on values outside the level set or
/// on a declared level with zero observations.
std::vector<double> cumulative_proportions(std::span<const double> column,
                                           std::span<const double> levels);

ColumnThresholds estimate_thresholds(std::span<const double> column,
                                     std::span<const double> levels);

/// Thresholds for every ordinal column of a dataset, indexed by column;
/// continuous columns hold an empty entry.
std::vector<ColumnThresholds> estimate_all_thresholds(const MixedDataset& data);

}  // namespace mixedgraph
