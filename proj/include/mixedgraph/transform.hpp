#pragma once

#include <span>
#include <vector>

namespace mixedgraph {

/// Truncation constant 1/(4 n^{1/4} sqrt(pi log n)).
double truncation_constant(int n);

/// Winsorization of u in [0,1] into [delta, 1-delta].
double winsorize(double u, double delta);

/// Estimated marginal Gaussianizing map of a continuous column: the
/// normal quantile of the Winsorized empirical CDF. Evaluation is
/// nondecreasing and finite everywhere, bounded by Phi^{-1}(1-delta_n).
class TransformEstimate {
public:
    static TransformEstimate fit(std::span<const double> column);

    /// Plain n-denominator ECDF (right-continuous step function).
    double ecdf(double x) const;

    /// f_hat(x) = Phi^{-1}(W_delta[ECDF(x)]).
    double operator()(double x) const;

    double delta_n() const { return delta_n_; }

private:
    std::vector<double> sorted_;
    double delta_n_ = 0.0;
};

inline TransformEstimate estimate_transform(std::span<const double> column) {
    return TransformEstimate::fit(column);
}

inline double evaluate_transform(const TransformEstimate& t, double x) {
    return t(x);
}

}  // namespace mixedgraph
