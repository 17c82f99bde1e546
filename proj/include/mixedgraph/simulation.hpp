#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixedgraph/dataset.hpp"
#include "mixedgraph/latent_correlation.hpp"
#include "mixedgraph/metrics.hpp"

namespace mixedgraph {

/// Random-graph specification: unit-diagonal precision with off-diagonal
/// signal s on edges drawn from a distance-decaying Bernoulli field over
/// uniform plane positions; c scales the decay (larger c, denser graph).
struct GraphSpec {
    int d = 50;
    double s = 0.15;
    double c = 0.3;
    std::optional<int> target_edges;
    std::uint64_t seed = 0;
};

struct GroundTruth {
    Eigen::MatrixXd omega_star;  // unit diagonal, s on edges
    Eigen::MatrixXd sigma_star;  // inverse rescaled to unit diagonal
    std::vector<std::pair<int, int>> edges;  // lower off-diagonal (j,k), j > k
    double c_used = 0.0;
    int attempts = 1;
};

/// Draws the Bernoulli field, retrying with fresh edge draws (up to 50)
/// until omega's min eigenvalue exceeds 0.01; bisects c when target_edges
/// is set so the realized edge count lands within 10% of the target.
GroundTruth generate_graph(const GraphSpec& spec);

enum class MarginalTransform { Identity, CubeRoot };

/// Mixed-column layout and marginal parameters. Discrete columns come
/// first (binary, then ordinal, then Poisson blocks), continuous columns
/// last. The three discrete fractions must sum to 1; a ternary-style mix
/// is binary_fraction = ordinal_fraction = 0.5 with the category range
/// pinned to [3,3]. CubeRoot means the observed continuous value is the
/// cube of the latent Gaussian (a monotone back-transform).
struct MixSpec {
    double continuous_fraction = 0.5;
    double binary_fraction = 1.0 / 3.0;   // of the discrete block
    double ordinal_fraction = 1.0 / 3.0;  // of the discrete block
    double poisson_fraction = 1.0 / 3.0;  // of the discrete block
    double binary_balanced_fraction = 0.8;
    double balanced_lo = 0.4, balanced_hi = 0.6;
    double unbalanced_lo = 0.05, unbalanced_hi = 0.1;
    int ordinal_cat_lo = 3, ordinal_cat_hi = 7;
    double poisson_rate = 6.0;
    MarginalTransform transform = MarginalTransform::Identity;
};

/// Ternary-style preset: half binary, half ternary discrete columns.
MixSpec ternary_mix(MarginalTransform transform = MarginalTransform::Identity);

struct SampledData {
    MixedDataset dataset;
    Eigen::MatrixXd latent;  // Gaussian draws before discretization/transform
};

/// Gaussian draws through the Cholesky factor of sigma_star, discrete
/// columns by inverse probability integral transform, continuous columns
/// through the back-transform. The latent matrix is kept for the oracle
/// estimator.
SampledData sample_mixed(const GroundTruth& gt, const MixSpec& mix, int n,
                         std::uint64_t seed);

struct BenchmarkConfig {
    GraphSpec graph;
    MixSpec mix;
    int n = 200;
    int replicates = 20;
    std::vector<Family> families;
    double theta = 0.1;
    int grid_size = 30;
    std::uint64_t seed = 1;
};

struct FamilyResult {
    double frobenius = 0.0;
    double auc = 0.0;
    int selected_edges = 0;
    double selected_lambda = 0.0;
    double kkt_max = 0.0;
    double inverse_residual_max = 0.0;
    RocCurve roc;
};

struct ReplicateResult {
    int replicate = 0;
    std::map<std::string, FamilyResult> results;  // keyed by family name
    std::vector<std::string> errors;
};

struct BenchmarkReport {
    std::string rng_algorithm;
    nlohmann::json config_echo;
    std::vector<ReplicateResult> replicates;

    struct Aggregate {
        int count = 0;
        double frobenius_mean = 0.0, frobenius_sd = 0.0;
        double auc_mean = 0.0, auc_sd = 0.0;
    };
    std::map<std::string, Aggregate> aggregates;
};

/// Runs all replicates (parallelizable across replicates; results joined
/// by replicate index so output is independent of the worker count).
/// Per-replicate failures are recorded and the run continues.
BenchmarkReport run_benchmark(const BenchmarkConfig& config, int threads = 1);

std::string report_to_json(const BenchmarkReport& report);

/// Parses a config document, collecting every missing or invalid key into
/// one ValidationError.
BenchmarkConfig parse_benchmark_config(const nlohmann::json& doc);
nlohmann::json benchmark_config_to_json(const BenchmarkConfig& config);

}  // namespace mixedgraph
