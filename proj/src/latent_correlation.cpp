#include "mixedgraph/latent_correlation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "mixedgraph/corr_case1.hpp"
#include "mixedgraph/corr_case2.hpp"
#include "mixedgraph/corr_case3.hpp"
#include "mixedgraph/errors.hpp"
#include "mixedgraph/thresholds.hpp"

namespace mixedgraph {

std::string family_name(Family f) {
    switch (f) {
        case Family::Mle: return "mle";
        case Family::Poly: return "poly";
        case Family::Oracle: return "oracle";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "mle") return Family::Mle;
    if (name == "poly") return Family::Poly;
    if (name == "oracle") return Family::Oracle;
    throw ValidationError("unknown estimator family '" + name + "'");
}

std::string method_tag_name(MethodTag t) {
    switch (t) {
        case MethodTag::Diagonal: return "diag";
        case MethodTag::Case1Pearson: return "case1-pearson";
        case MethodTag::Case1Spearman: return "case1-spearman";
        case MethodTag::Case2Mle: return "case2-mle";
        case MethodTag::Case2Adhoc: return "case2-adhoc";
        case MethodTag::Case3Polychoric: return "case3-polychoric";
    }
    return "?";
}

namespace {

std::span<const double> column_span(const Eigen::MatrixXd& m, int j) {
    return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

struct PairEstimate {
    double value;
    MethodTag tag;
};

class PairEstimator {
public:
    PairEstimator(const MixedDataset& data, Family family)
        : data_(data), family_(family) {
        thresholds_ = estimate_all_thresholds(data);
        if (family == Family::Poly) {
            transformed_.resize(data.d());
            for (int j = 0; j < data.d(); ++j) {
                if (data.kinds[j].is_ordinal()) continue;
                auto col = column_span(data.values, j);
                const auto t = TransformEstimate::fit(col);
                auto& fx = transformed_[j];
                fx.resize(col.size());
                for (std::size_t i = 0; i < col.size(); ++i) fx[i] = t(col[i]);
            }
        }
    }

    PairEstimate estimate(int j, int k) const {
        const bool oj = data_.kinds[j].is_ordinal();
        const bool ok = data_.kinds[k].is_ordinal();
        const auto xj = column_span(data_.values, j);
        const auto xk = column_span(data_.values, k);

        if (family_ == Family::Oracle) {
            return {spearman_to_latent(spearman_rho(xj, xk)), MethodTag::Case1Spearman};
        }
        if (!oj && !ok) {
            if (family_ == Family::Mle) {
                const double r = pearson(xj, xk);
                return {std::clamp(r, -1.0 + kCorrClamp, 1.0 - kCorrClamp),
                        MethodTag::Case1Pearson};
            }
            return {spearman_to_latent(spearman_rho(xj, xk)), MethodTag::Case1Spearman};
        }
        if (oj != ok) {
            const int jo = oj ? j : k;  // ordinal side
            const int jc = oj ? k : j;  // continuous side
            const auto ord = column_span(data_.values, jo);
            const auto& th = thresholds_[jo];
            if (family_ == Family::Mle) {
                const auto prob = PolyserialProblem::make(
                    ord, column_span(data_.values, jc), th.levels, th.gammas);
                return {polyserial_mle(prob), MethodTag::Case2Mle};
            }
            return {polyserial_adhoc(ord, transformed_[jc], th), MethodTag::Case2Adhoc};
        }
        const auto& tj = thresholds_[j];
        const auto& tk = thresholds_[k];
        const auto table = contingency_table(xj, xk, tj.levels, tk.levels);
        return {polychoric_mle(table, tj.gammas, tk.gammas), MethodTag::Case3Polychoric};
    }

private:
    const MixedDataset& data_;
    Family family_;
    std::vector<ColumnThresholds> thresholds_;
    std::vector<std::vector<double>> transformed_;
};

}  // namespace

LatentCorrelationMatrix estimate_latent_correlation(const MixedDataset& data,
                                                    Family family, int threads) {
    data.validate();
    const int d = data.d();
    PairEstimator estimator(data, family);

    LatentCorrelationMatrix out;
    out.family = family;
    out.names = data.names;
    out.values = Eigen::MatrixXd::Identity(d, d);
    out.tags.assign(static_cast<std::size_t>(d) * d, MethodTag::Diagonal);

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::string first_error;
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= pairs.size()) return;
            {
                std::lock_guard lock(err_mutex);
                if (!first_error.empty()) return;
            }
            const auto [j, k] = pairs[idx];
            try {
                const auto est = estimator.estimate(j, k);
                out.values(j, k) = est.value;
                out.values(k, j) = est.value;
                out.tags[static_cast<std::size_t>(j) * d + k] = est.tag;
                out.tags[static_cast<std::size_t>(k) * d + j] = est.tag;
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mutex);
                if (first_error.empty()) {
                    first_error = "pair (" + data.names[j] + ", " + data.names[k] +
                                  "): " + e.what();
                }
            }
        }
    };

    int nthreads = threads;
    if (nthreads <= 0) {
        nthreads = static_cast<int>(std::thread::hardware_concurrency());
        if (nthreads <= 0) nthreads = 1;
    }
    nthreads = std::min<std::size_t>(nthreads, pairs.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw NumericError(first_error);
    return out;
}

LatentCorrelationMatrix oracle_correlation(const Eigen::MatrixXd& latent,
                                           const std::vector<std::string>& names) {
    MixedDataset data;
    data.values = latent;
    data.names = names;
    data.kinds.assign(latent.cols(), VariableKind::continuous());
    return estimate_latent_correlation(data, Family::Oracle, 1);
}

Eigen::MatrixXd nearest_psd_correlation(const Eigen::MatrixXd& input) {
    const int d = static_cast<int>(input.rows());
    if (input.cols() != d) throw ValidationError("projection: matrix not square");
    if (!input.isApprox(input.transpose(), 1e-12)) {
        throw ValidationError("projection: matrix not symmetric");
    }
    for (int j = 0; j < d; ++j) {
        if (std::fabs(input(j, j) - 1.0) > 1e-12) {
            throw ValidationError("projection: diagonal entries must be 1");
        }
    }

    constexpr double change_tol = 1e-7;
    constexpr double eig_tol = -1e-10;
    constexpr int max_iter = 200;

    Eigen::MatrixXd y = input;
    Eigen::MatrixXd correction = Eigen::MatrixXd::Zero(d, d);
    double last_change = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::MatrixXd r = y - correction;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
        if (eig.info() != Eigen::Success) {
            throw NumericError("projection: eigendecomposition failed");
        }
        const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXd x =
            eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
        x = 0.5 * (x + x.transpose());
        correction = x - r;
        Eigen::MatrixXd y_next = x;
        y_next.diagonal().setOnes();
        last_change = (y_next - y).cwiseAbs().maxCoeff();
        y = y_next;
        if (last_change <= change_tol) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(y);
            if (check.eigenvalues().minCoeff() >= eig_tol) break;
        }
        if (iter + 1 == max_iter) {
            throw NumericError("projection did not converge in 200 iterations; last change " +
                               std::to_string(last_change));
        }
    }

    y = 0.5 * (y + y.transpose());
    for (int j = 0; j < d; ++j) {
        y(j, j) = 1.0;
        for (int k = 0; k < d; ++k) {
            if (j == k) continue;
            y(j, k) = std::clamp(y(j, k), -1.0 + kCorrClamp, 1.0 - kCorrClamp);
        }
    }
    return y;
}

void write_matrix_csv(const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (std::size_t j = 0; j < names.size(); ++j) {
        out << names[j] << (j + 1 == names.size() ? "\n" : ",");
    }
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            out << format_double(m(i, j)) << (j + 1 == m.cols() ? "\n" : ",");
        }
    }
}

std::string correlation_to_json(const LatentCorrelationMatrix& est,
                                const Eigen::MatrixXd& repaired) {
    nlohmann::json doc;
    doc["family"] = family_name(est.family);
    doc["names"] = est.names;
    const int d = static_cast<int>(est.names.size());
    auto tags = nlohmann::json::array();
    auto raw = nlohmann::json::array();
    auto values = nlohmann::json::array();
    for (int j = 0; j < d; ++j) {
        auto tag_row = nlohmann::json::array();
        auto raw_row = nlohmann::json::array();
        auto val_row = nlohmann::json::array();
        for (int k = 0; k < d; ++k) {
            tag_row.push_back(method_tag_name(est.tag(j, k)));
            raw_row.push_back(est.values(j, k));
            val_row.push_back(repaired(j, k));
        }
        tags.push_back(std::move(tag_row));
        raw.push_back(std::move(raw_row));
        values.push_back(std::move(val_row));
    }
    doc["method_tags"] = std::move(tags);
    doc["raw_values"] = std::move(raw);
    doc["values"] = std::move(values);
    return doc.dump(2);
}

}  // namespace mixedgraph
