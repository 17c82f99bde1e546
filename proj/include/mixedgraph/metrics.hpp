#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "mixedgraph/glasso.hpp"

namespace mixedgraph {

double frobenius_error(const Eigen::MatrixXd& omega_hat,
                       const Eigen::MatrixXd& omega_star);

/// Edge counts over the lower off-diagonals: true positives and false
/// positives of omega_hat against omega_star at |.| > edge_eps.
std::pair<int, int> tp_fp(const Eigen::MatrixXd& omega_hat,
                          const Eigen::MatrixXd& omega_star,
                          double edge_eps = kEdgeEps);

/// ROC over a penalty path: one (FPR, TPR) point per lambda, endpoints
/// (0,0) and (1,1) appended, FPR ties collapsed to the max TPR, trapezoid
/// area. Throws ValidationError when the true edge set is empty or
/// complete.
struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr) sorted by fpr
    std::vector<double> lambdas;                    // per original path point
    std::vector<std::pair<double, double>> path_rates;  // per-lambda (fpr, tpr)
    double auc = 0.0;
};

RocCurve roc_auc(const PrecisionPath& path, const Eigen::MatrixXd& omega_star,
                 double edge_eps = kEdgeEps);

/// CSV emission of (lambda, tpr, fpr) rows for plotting.
void write_roc_csv(const RocCurve& roc, const std::string& path);

}  // namespace mixedgraph
