#include "mixedgraph/thresholds.hpp"

#include <algorithm>
#include <cstdio>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/special_functions.hpp"

namespace mixedgraph {

std::vector<double> cumulative_proportions(std::span<const double> column,
                                           std::span<const double> levels) {
    const auto l_plus_1 = levels.size();
    std::vector<long> counts(l_plus_1, 0);
    for (double v : column) {
        auto it = std::lower_bound(levels.begin(), levels.end(), v);
        if (it == levels.end() || *it != v) {
            throw ValidationError("ordinal value not a declared level");
        }
        ++counts[static_cast<std::size_t>(it - levels.begin())];
    }
    for (std::size_t r = 0; r < l_plus_1; ++r) {
        if (counts[r] == 0) {
            throw ValidationError("unobserved level at index " + std::to_string(r));
        }
    }
    const double n = static_cast<double>(column.size());
    std::vector<double> props(l_plus_1 - 1);
    long cum = 0;
    for (std::size_t r = 0; r + 1 < l_plus_1; ++r) {
        cum += counts[r];
        props[r] = static_cast<double>(cum) / n;
    }
    return props;
}

ColumnThresholds estimate_thresholds(std::span<const double> column,
                                     std::span<const double> levels) {
    ColumnThresholds t;
    t.levels.assign(levels.begin(), levels.end());
    t.cum_props = cumulative_proportions(column, levels);
    t.gammas.reserve(t.cum_props.size());
    for (double p : t.cum_props) {
        double g = std_normal_quantile(p);
        if (std::fabs(g) > kGammaCap) {
            std::fprintf(stderr,
                         "warning: threshold %.6g clamped to +-%g\n", g, kGammaCap);
            g = std::clamp(g, -kGammaCap, kGammaCap);
        }
        t.gammas.push_back(g);
    }
    return t;
}

std::vector<ColumnThresholds> estimate_all_thresholds(const MixedDataset& data) {
    std::vector<ColumnThresholds> all(data.d());
    for (int j = 0; j < data.d(); ++j) {
        if (!data.kinds[j].is_ordinal()) continue;
        const auto col = data.values.col(j);
        try {
            all[j] = estimate_thresholds(
                std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                data.kinds[j].levels);
        } catch (const Error& e) {
            throw ValidationError("column " + data.names[j] + ": " + e.what());
        }
    }
    return all;
}

}  // namespace mixedgraph
