#pragma once

#include <span>
#include <vector>

namespace mixedgraph {

/// Cross-tabulation of two ordinal columns.
struct ContingencyTable {
    std::vector<std::vector<long>> counts;  // (l_j+1) x (l_k+1)
    std::vector<double> levels_j;
    std::vector<double> levels_k;
    long n = 0;

    int rows() const { return static_cast<int>(counts.size()); }
    int cols() const { return rows() ? static_cast<int>(counts[0].size()) : 0; }
};

ContingencyTable contingency_table(std::span<const double> xj,
                                   std::span<const double> xk,
                                   std::span<const double> levels_j,
                                   std::span<const double> levels_k);

/// P(X_j in cell r, X_k in cell s) as the four-term bivariate normal
/// rectangle; r, s are 0-based cell indices and boundary thresholds are
/// +-infinity.
double cell_probability(std::span<const double> gammas_j,
                        std::span<const double> gammas_k, int r, int s,
                        double rho);

/// (1/n) sum_rs counts_rs log(max(pi_rs, kProbFloor)); the multinomial
/// constant is dropped.
double polychoric_loglik(const ContingencyTable& table,
                         std::span<const double> gammas_j,
                         std::span<const double> gammas_k, double rho);

/// Derivative of polychoric_loglik in rho via the bivariate density
/// rectangle.
double polychoric_loglik_grad(const ContingencyTable& table,
                              std::span<const double> gammas_j,
                              std::span<const double> gammas_k, double rho);

/// Two-step polychoric MLE over [-1+kOptClamp, 1-kOptClamp].
double polychoric_mle(const ContingencyTable& table,
                      std::span<const double> gammas_j,
                      std::span<const double> gammas_k);

}  // namespace mixedgraph
