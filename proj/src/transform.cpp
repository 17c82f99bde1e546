#include "mixedgraph/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/special_functions.hpp"

namespace mixedgraph {

double truncation_constant(int n) {
    if (n < 2) throw ValidationError("truncation_constant: n must be >= 2");
    const double nn = static_cast<double>(n);
    return 1.0 / (4.0 * std::pow(nn, 0.25) *
                  std::sqrt(std::numbers::pi * std::log(nn)));
}

double winsorize(double u, double delta) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw ValidationError("winsorize: u outside [0,1]");
    }
    if (!(delta > 0.0 && delta < 0.5)) {
        throw ValidationError("winsorize: delta outside (0,0.5)");
    }
    if (u < delta) return delta;
    if (u > 1.0 - delta) return 1.0 - delta;
    return u;
}

TransformEstimate TransformEstimate::fit(std::span<const double> column) {
    if (column.size() < 2) {
        throw ValidationError("transform estimate needs n >= 2");
    }
    TransformEstimate t;
    t.sorted_.assign(column.begin(), column.end());
    for (double v : t.sorted_) {
        if (!std::isfinite(v)) {
            throw ValidationError("transform estimate: non-finite value");
        }
    }
    std::sort(t.sorted_.begin(), t.sorted_.end());
    t.delta_n_ = truncation_constant(static_cast<int>(column.size()));
    return t;
}

double TransformEstimate::ecdf(double x) const {
    auto ub = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(ub - sorted_.begin()) /
           static_cast<double>(sorted_.size());
}

double TransformEstimate::operator()(double x) const {
    return std_normal_quantile(winsorize(ecdf(x), delta_n_));
}

}  // namespace mixedgraph
