#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mixedgraph {

/// Entries of omega below this magnitude are treated as structural zeros;
/// coordinate descent produces exact zeros, the threshold only guards
/// float noise.
inline constexpr double kEdgeEps = 1e-8;

/// One penalized fit: precision estimate, its covariance dual, and the
/// edge set read off the lower triangle of omega.
struct GlassoSolution {
    double lambda = 0.0;
    Eigen::MatrixXd omega;
    Eigen::MatrixXd w;
    Eigen::MatrixXd beta;  // column regression coefficients (warm starts)
    std::vector<std::pair<int, int>> edges;  // (j,k) with j > k
    double ebic = 0.0;
    bool selected = false;
};

/// Sequence of solutions for a strictly decreasing lambda grid with eBIC
/// scores and the selected index.
struct PrecisionPath {
    std::vector<GlassoSolution> solutions;
    int selected_index = -1;

    const GlassoSolution& selected() const { return solutions.at(selected_index); }
};

/// Block coordinate descent on the covariance (each block a lasso solved
/// by cyclic coordinate descent), diagonal unpenalized. Input must be
/// symmetric with unit diagonal and min eigenvalue >= -1e-8; a ridge of
/// 1e-8 I is added when the spectrum touches zero. Convergence: max-abs
/// change of off-diagonal W <= 1e-4 * mean|offdiag(sigma)| within 500
/// sweeps, else NumericError.
GlassoSolution graphical_lasso(const Eigen::MatrixXd& sigma, double lambda,
                               const GlassoSolution* warm_start = nullptr);

/// Log-spaced descending grid from lambda_max = max offdiag |sigma| down
/// to lambda_max/100. Throws ValidationError when sigma is already
/// diagonal.
std::vector<double> lambda_grid(const Eigen::MatrixXd& sigma, int count = 30);

/// eBIC of a fitted solution: -2 l + |E| log n + 4 |E| theta log d with
/// the Gaussian profile likelihood l = (n/2)(log det omega - tr(sigma omega)).
double ebic_score(const GlassoSolution& sol, const Eigen::MatrixXd& sigma,
                  int n, int d, double theta);

/// Fits every grid point (warm-started), scores, and marks the argmin;
/// ties break toward larger lambda.
PrecisionPath select_model(const Eigen::MatrixXd& sigma, int n, double theta,
                           std::span<const double> grid);

/// Max KKT violation of a solution: propagated soft-threshold
/// stationarity off-diagonal plus exact diagonal match.
double kkt_residual(const GlassoSolution& sol, const Eigen::MatrixXd& sigma);

/// Max-abs deviation of omega * w from the identity.
double inverse_residual(const GlassoSolution& sol);

/// Penalized objective tr(sigma omega) - log det omega + lambda ||omega||_1,off.
double glasso_objective(const GlassoSolution& sol, const Eigen::MatrixXd& sigma);

std::string path_to_json(const PrecisionPath& path);

}  // namespace mixedgraph
