#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mixedgraph/dataset.hpp"

namespace mixedgraph {

/// Estimator family: "mle" treats the latent vector as Gaussian and uses
/// Pearson / polyserial MLE / polychoric; "poly" is the copula variant
/// (Spearman bridge / rank-transform polyserial / polychoric); "oracle"
/// applies the Spearman bridge to every pair regardless of kind and is
/// meant for latent data inside the simulation harness.
enum class Family { Mle, Poly, Oracle };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

enum class MethodTag : unsigned char {
    Diagonal,
    Case1Pearson,
    Case1Spearman,
    Case2Mle,
    Case2Adhoc,
    Case3Polychoric,
};

std::string method_tag_name(MethodTag t);

/// Symmetric d x d latent correlation estimate with per-entry method
/// provenance.
struct LatentCorrelationMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
    std::vector<MethodTag> tags;  // row-major d*d
    Family family = Family::Poly;

    MethodTag tag(int j, int k) const {
        return tags[static_cast<std::size_t>(j) * names.size() +
                    static_cast<std::size_t>(k)];
    }
};

/// Pairwise case dispatch over the dataset. Transform estimates are fit
/// once per continuous column; pairs are pure and may be computed on a
/// worker pool (threads = 0 means hardware concurrency, 1 disables
/// threading) with results independent of the schedule.
LatentCorrelationMatrix estimate_latent_correlation(const MixedDataset& data,
                                                    Family family,
                                                    int threads = 1);

/// Spearman-bridge matrix of an all-continuous value matrix (the oracle
/// path of the simulation harness).
LatentCorrelationMatrix oracle_correlation(const Eigen::MatrixXd& latent,
                                           const std::vector<std::string>& names);

/// Nearest correlation-matrix repair: Dykstra-corrected alternating
/// projections between the PSD cone and the unit-diagonal set. Stops once
/// the iterate moves by at most 1e-7 (and the result is PSD up to -1e-8);
/// throws NumericError after 200 iterations.
Eigen::MatrixXd nearest_psd_correlation(const Eigen::MatrixXd& input);

/// Serialization used by the CLI: dense CSV and a JSON document with
/// names, per-entry method tags and values.
void write_matrix_csv(const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names,
                      const std::string& path);
std::string correlation_to_json(const LatentCorrelationMatrix& est,
                                const Eigen::MatrixXd& repaired);

}  // namespace mixedgraph
