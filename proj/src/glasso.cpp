#include "mixedgraph/glasso.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mixedgraph/errors.hpp"

namespace mixedgraph {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double log_det_spd(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NumericError("matrix is not positive definite");
    }
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

GlassoSolution graphical_lasso(const Eigen::MatrixXd& sigma, double lambda,
                               const GlassoSolution* warm_start) {
    const int d = static_cast<int>(sigma.rows());
    if (sigma.cols() != d) throw ValidationError("glasso: sigma not square");
    if (!(lambda > 0.0)) throw ValidationError("glasso: lambda must be > 0");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -1e-8) {
        throw ValidationError("glasso: sigma min eigenvalue " +
                              std::to_string(min_eig) + " below -1e-8");
    }
    Eigen::MatrixXd s = sigma;
    if (min_eig <= 1e-8) {
        s.diagonal().array() += 1e-8;
    }

    const double avg_off =
        d > 1 ? (s.cwiseAbs().sum() - s.diagonal().cwiseAbs().sum()) /
                    static_cast<double>(d * (d - 1))
              : 0.0;
    const double conv_tol = 1e-4 * avg_off;
    const double inner_tol = std::max(conv_tol / 10.0, 1e-12);

    GlassoSolution sol;
    sol.lambda = lambda;
    if (warm_start && warm_start->w.rows() == d) {
        sol.w = warm_start->w;
        sol.beta = warm_start->beta;
        sol.w.diagonal() = s.diagonal();  // diagonal is unpenalized and fixed
    } else {
        sol.w = s;
        sol.beta = Eigen::MatrixXd::Zero(d, d);
    }

    bool converged = false;
    double last_change = 0.0;
    for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
        double max_change = 0.0;
        for (int j = 0; j < d; ++j) {
            // Lasso subproblem for column j against W11.
            for (int inner = 0; inner < 200; ++inner) {
                double max_delta = 0.0;
                for (int k = 0; k < d; ++k) {
                    if (k == j) continue;
                    double grad = s(k, j);
                    for (int m = 0; m < d; ++m) {
                        if (m == j || m == k) continue;
                        grad -= sol.w(k, m) * sol.beta(m, j);
                    }
                    const double b_new = soft_threshold(grad, lambda) / sol.w(k, k);
                    max_delta = std::max(max_delta, std::fabs(b_new - sol.beta(k, j)));
                    sol.beta(k, j) = b_new;
                }
                if (max_delta <= inner_tol) break;
            }
            for (int k = 0; k < d; ++k) {
                if (k == j) continue;
                double wkj = 0.0;
                for (int m = 0; m < d; ++m) {
                    if (m == j) continue;
                    wkj += sol.w(k, m) * sol.beta(m, j);
                }
                max_change = std::max(max_change, std::fabs(wkj - sol.w(k, j)));
                sol.w(k, j) = wkj;
                sol.w(j, k) = wkj;
            }
        }
        last_change = max_change;
        converged = max_change <= conv_tol;
    }
    if (!converged) {
        throw NumericError("glasso did not converge in 500 sweeps; last change " +
                           std::to_string(last_change));
    }

    // Recover omega column-wise from the final regression coefficients.
    sol.omega.resize(d, d);
    for (int j = 0; j < d; ++j) {
        double dot = 0.0;
        for (int m = 0; m < d; ++m) {
            if (m == j) continue;
            dot += sol.w(m, j) * sol.beta(m, j);
        }
        const double ojj = 1.0 / (sol.w(j, j) - dot);
        if (!(ojj > 0.0) || !std::isfinite(ojj)) {
            throw NumericError("glasso: non-positive diagonal in omega recovery");
        }
        sol.omega(j, j) = ojj;
        for (int k = 0; k < d; ++k) {
            if (k == j) continue;
            sol.omega(k, j) = -sol.beta(k, j) * ojj;
        }
    }
    sol.omega = ((sol.omega + sol.omega.transpose()) / 2.0).eval();

    Eigen::LLT<Eigen::MatrixXd> llt(sol.omega);
    if (llt.info() != Eigen::Success) {
        throw NumericError("glasso: omega not positive definite at finish");
    }

    for (int j = 1; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            if (std::fabs(sol.omega(j, k)) > kEdgeEps) sol.edges.emplace_back(j, k);
        }
    }
    return sol;
}

std::vector<double> lambda_grid(const Eigen::MatrixXd& sigma, int count) {
    if (count < 2) throw ValidationError("lambda_grid: count must be >= 2");
    const int d = static_cast<int>(sigma.rows());
    double lambda_max = 0.0;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            if (j != k) lambda_max = std::max(lambda_max, std::fabs(sigma(j, k)));
        }
    }
    if (lambda_max <= 0.0) {
        throw ValidationError("lambda_grid: sigma already diagonal");
    }
    std::vector<double> grid(count);
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max / 100.0);
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        grid[i] = std::exp(log_max + t * (log_min - log_max));
    }
    grid.front() = lambda_max;
    return grid;
}

double ebic_score(const GlassoSolution& sol, const Eigen::MatrixXd& sigma,
                  int n, int d, double theta) {
    const double loglik =
        0.5 * n * (log_det_spd(sol.omega) - sigma.cwiseProduct(sol.omega).sum());
    const double edge_count = static_cast<double>(sol.edges.size());
    return -2.0 * loglik + edge_count * std::log(static_cast<double>(n)) +
           4.0 * edge_count * theta * std::log(static_cast<double>(d));
}

PrecisionPath select_model(const Eigen::MatrixXd& sigma, int n, double theta,
                           std::span<const double> grid) {
    if (grid.size() < 1) throw ValidationError("select_model: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1])) {
            throw ValidationError("select_model: grid must be strictly decreasing");
        }
    }
    PrecisionPath path;
    path.solutions.reserve(grid.size());
    const GlassoSolution* warm = nullptr;
    for (double lambda : grid) {
        GlassoSolution sol;
        try {
            sol = graphical_lasso(sigma, lambda, warm);
        } catch (const Error& e) {
            throw NumericError("glasso fit at lambda=" + std::to_string(lambda) +
                               ": " + e.what());
        }
        sol.ebic = ebic_score(sol, sigma, n, static_cast<int>(sigma.rows()), theta);
        path.solutions.push_back(std::move(sol));
        warm = &path.solutions.back();
    }
    path.selected_index = 0;
    for (std::size_t i = 1; i < path.solutions.size(); ++i) {
        if (path.solutions[i].ebic < path.solutions[path.selected_index].ebic) {
            path.selected_index = static_cast<int>(i);
        }
    }
    path.solutions[path.selected_index].selected = true;
    return path;
}

double kkt_residual(const GlassoSolution& sol, const Eigen::MatrixXd& sigma) {
    const int d = static_cast<int>(sigma.rows());
    double res = 0.0;
    for (int j = 0; j < d; ++j) {
        res = std::max(res, std::fabs(sigma(j, j) - sol.w(j, j)));
        for (int k = 0; k < d; ++k) {
            if (k == j) continue;
            const double diff = sigma(j, k) - sol.w(j, k);
            if (std::fabs(sol.omega(j, k)) > kEdgeEps) {
                res = std::max(res,
                               std::fabs(diff + sol.lambda *
                                                    (sol.omega(j, k) > 0 ? 1.0 : -1.0)));
            } else {
                res = std::max(res, std::max(0.0, std::fabs(diff) - sol.lambda));
            }
        }
    }
    return res;
}

double inverse_residual(const GlassoSolution& sol) {
    const int d = static_cast<int>(sol.omega.rows());
    return (sol.omega * sol.w - Eigen::MatrixXd::Identity(d, d))
        .cwiseAbs()
        .maxCoeff();
}

double glasso_objective(const GlassoSolution& sol, const Eigen::MatrixXd& sigma) {
    double l1_off = 0.0;
    const int d = static_cast<int>(sigma.rows());
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            if (j != k) l1_off += std::fabs(sol.omega(j, k));
        }
    }
    return sigma.cwiseProduct(sol.omega).sum() - log_det_spd(sol.omega) +
           sol.lambda * l1_off;
}

std::string path_to_json(const PrecisionPath& path) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& sol : path.solutions) {
        nlohmann::json entry;
        entry["lambda"] = sol.lambda;
        entry["ebic"] = sol.ebic;
        entry["selected"] = sol.selected;
        auto edges = nlohmann::json::array();
        for (const auto& [j, k] : sol.edges) {
            edges.push_back({j, k, sol.omega(j, k)});
        }
        entry["edges"] = std::move(edges);
        doc.push_back(std::move(entry));
    }
    return doc.dump(2);
}

}  // namespace mixedgraph
