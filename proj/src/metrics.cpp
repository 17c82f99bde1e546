#include "mixedgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mixedgraph/dataset.hpp"
#include "mixedgraph/errors.hpp"

namespace mixedgraph {

double frobenius_error(const Eigen::MatrixXd& omega_hat,
                       const Eigen::MatrixXd& omega_star) {
    if (omega_hat.rows() != omega_star.rows() ||
        omega_hat.cols() != omega_star.cols()) {
        throw ValidationError("frobenius_error: shape mismatch");
    }
    return (omega_hat - omega_star).norm();
}

std::pair<int, int> tp_fp(const Eigen::MatrixXd& omega_hat,
                          const Eigen::MatrixXd& omega_star, double edge_eps) {
    if (omega_hat.rows() != omega_star.rows() ||
        omega_hat.cols() != omega_star.cols()) {
        throw ValidationError("tp_fp: shape mismatch");
    }
    int tp = 0, fp = 0;
    for (int j = 1; j < omega_hat.rows(); ++j) {
        for (int k = 0; k < j; ++k) {
            const bool hat = std::fabs(omega_hat(j, k)) > edge_eps;
            const bool star = std::fabs(omega_star(j, k)) > edge_eps;
            if (hat && star) ++tp;
            if (hat && !star) ++fp;
        }
    }
    return {tp, fp};
}

RocCurve roc_auc(const PrecisionPath& path, const Eigen::MatrixXd& omega_star,
                 double edge_eps) {
    const int d = static_cast<int>(omega_star.rows());
    int true_edges = 0;
    for (int j = 1; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            if (std::fabs(omega_star(j, k)) > edge_eps) ++true_edges;
        }
    }
    const int all_pairs = d * (d - 1) / 2;
    if (true_edges == 0 || true_edges == all_pairs) {
        throw ValidationError("roc_auc: degenerate true edge set (|E*| = " +
                              std::to_string(true_edges) + ")");
    }
    const double negatives = static_cast<double>(all_pairs - true_edges);

    RocCurve roc;
    for (const auto& sol : path.solutions) {
        const auto [tp, fp] = tp_fp(sol.omega, omega_star, edge_eps);
        roc.lambdas.push_back(sol.lambda);
        roc.path_rates.emplace_back(fp / negatives, tp / static_cast<double>(true_edges));
    }
    roc.points = roc.path_rates;
    roc.points.emplace_back(0.0, 0.0);
    roc.points.emplace_back(1.0, 1.0);
    std::sort(roc.points.begin(), roc.points.end());

    // Collapse equal-FPR runs to their best TPR.
    std::vector<std::pair<double, double>> collapsed;
    for (const auto& pt : roc.points) {
        if (!collapsed.empty() && collapsed.back().first == pt.first) {
            collapsed.back().second = std::max(collapsed.back().second, pt.second);
        } else {
            collapsed.push_back(pt);
        }
    }
    roc.points = std::move(collapsed);

    double auc = 0.0;
    for (std::size_t i = 1; i < roc.points.size(); ++i) {
        const auto& [x0, y0] = roc.points[i - 1];
        const auto& [x1, y1] = roc.points[i];
        auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    roc.auc = auc;
    return roc;
}

void write_roc_csv(const RocCurve& roc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "lambda,tpr,fpr\n";
    for (std::size_t i = 0; i < roc.lambdas.size(); ++i) {
        out << format_double(roc.lambdas[i]) << ','
            << format_double(roc.path_rates[i].second) << ','
            << format_double(roc.path_rates[i].first) << "\n";
    }
}

}  // namespace mixedgraph
