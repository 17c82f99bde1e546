#include "mixedgraph/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/rng.hpp"
#include "mixedgraph/special_functions.hpp"
#include "mixedgraph/thresholds.hpp"

namespace mixedgraph {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Substream keys; replicate seeds are derived from the config seed before
// these per-task keys apply.
constexpr std::uint64_t kKeyVertices = 1;
constexpr std::uint64_t kKeyMarginals = 2;
constexpr std::uint64_t kKeyLatent = 3;
constexpr std::uint64_t kKeyEdgeBase = 10;

Eigen::MatrixXd pairwise_distances(const std::vector<std::array<double, 2>>& v) {
    const int d = static_cast<int>(v.size());
    Eigen::MatrixXd dist(d, d);
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            const double dx = v[j][0] - v[k][0];
            const double dy = v[j][1] - v[k][1];
            dist(j, k) = std::sqrt(dx * dx + dy * dy);
        }
    }
    return dist;
}

long count_edges(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& u, double c) {
    long count = 0;
    const int d = static_cast<int>(dist.rows());
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            if (u(j, k) < kInvSqrt2Pi * std::exp(-dist(j, k) / (2.0 * c))) ++count;
        }
    }
    return count;
}

int poisson_quantile(double u, double rate) {
    double pmf = std::exp(-rate);
    double cdf = pmf;
    int k = 0;
    while (u > cdf && k < 400) {
        ++k;
        pmf *= rate / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

}  // namespace

GroundTruth generate_graph(const GraphSpec& spec) {
    if (spec.d < 2) throw ValidationError("generate_graph: d must be >= 2");
    if (!(spec.s > 0.0) || !(spec.c > 0.0)) {
        throw ValidationError("generate_graph: s and c must be positive");
    }

    Rng rng_v = Rng::substream(spec.seed, kKeyVertices);
    std::vector<std::array<double, 2>> v(spec.d);
    for (auto& p : v) {
        p[0] = rng_v.uniform01();
        p[1] = rng_v.uniform01();
    }
    const Eigen::MatrixXd dist = pairwise_distances(v);

    for (int attempt = 0; attempt < 50; ++attempt) {
        Rng rng_b = Rng::substream(spec.seed, kKeyEdgeBase + attempt);
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(spec.d, spec.d);
        for (int j = 0; j < spec.d; ++j) {
            for (int k = j + 1; k < spec.d; ++k) u(j, k) = rng_b.uniform01();
        }

        double c = spec.c;
        if (spec.target_edges) {
            const long target = *spec.target_edges;
            const long band = std::max<long>(1, std::lround(0.1 * target));
            double lo = 1e-4, hi = 256.0;
            if (count_edges(dist, u, hi) < target - band) {
                throw ValidationError(
                    "generate_graph: target edge count unreachable at this dimension");
            }
            for (int it = 0; it < 200; ++it) {
                c = 0.5 * (lo + hi);
                const long count = count_edges(dist, u, c);
                if (std::labs(count - target) <= band) break;
                (count < target ? lo : hi) = c;
            }
            if (std::labs(count_edges(dist, u, c) - target) > band) {
                throw ValidationError("generate_graph: edge-count bisection failed");
            }
        }

        GroundTruth gt;
        gt.c_used = c;
        gt.attempts = attempt + 1;
        gt.omega_star = Eigen::MatrixXd::Identity(spec.d, spec.d);
        for (int j = 0; j < spec.d; ++j) {
            for (int k = j + 1; k < spec.d; ++k) {
                if (u(j, k) < kInvSqrt2Pi * std::exp(-dist(j, k) / (2.0 * c))) {
                    gt.omega_star(j, k) = spec.s;
                    gt.omega_star(k, j) = spec.s;
                    gt.edges.emplace_back(k, j);
                }
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gt.omega_star);
        if (eig.eigenvalues().minCoeff() <= 0.01) continue;

        Eigen::MatrixXd inv = gt.omega_star.llt().solve(
            Eigen::MatrixXd::Identity(spec.d, spec.d));
        const Eigen::VectorXd scale = inv.diagonal().cwiseSqrt().cwiseInverse();
        gt.sigma_star = scale.asDiagonal() * inv * scale.asDiagonal();
        gt.sigma_star = 0.5 * (gt.sigma_star + gt.sigma_star.transpose()).eval();
        gt.sigma_star.diagonal().setOnes();
        return gt;
    }
    throw ValidationError(
        "generate_graph: could not reach a positive-definite precision in 50 "
        "attempts; reduce s or c");
}

MixSpec ternary_mix(MarginalTransform transform) {
    MixSpec mix;
    mix.binary_fraction = 0.5;
    mix.ordinal_fraction = 0.5;
    mix.poisson_fraction = 0.0;
    mix.ordinal_cat_lo = 3;
    mix.ordinal_cat_hi = 3;
    mix.transform = transform;
    return mix;
}

SampledData sample_mixed(const GroundTruth& gt, const MixSpec& mix, int n,
                         std::uint64_t seed) {
    const int d = static_cast<int>(gt.sigma_star.rows());
    if (n < 2) throw ValidationError("sample_mixed: n must be >= 2");
    if (std::fabs(mix.binary_fraction + mix.ordinal_fraction +
                  mix.poisson_fraction - 1.0) > 1e-9 ||
        mix.binary_fraction < 0.0 || mix.ordinal_fraction < 0.0 ||
        mix.poisson_fraction < 0.0) {
        throw ValidationError("sample_mixed: discrete fractions must be "
                              "nonnegative and sum to 1");
    }

    const int d2 = static_cast<int>(std::lround(mix.continuous_fraction * d));
    const int d1 = d - d2;
    const int n_bin = static_cast<int>(std::lround(mix.binary_fraction * d1));
    const int n_ord = std::min(
        d1 - n_bin, static_cast<int>(std::lround(mix.ordinal_fraction * d1)));
    const int n_balanced = static_cast<int>(std::lround(mix.binary_balanced_fraction * n_bin));

    // Marginal parameters, drawn column by column in layout order.
    Rng rng_m = Rng::substream(seed, kKeyMarginals);
    std::vector<double> binary_p(n_bin);
    for (int b = 0; b < n_bin; ++b) {
        binary_p[b] = (b < n_balanced)
                          ? rng_m.uniform(mix.balanced_lo, mix.balanced_hi)
                          : rng_m.uniform(mix.unbalanced_lo, mix.unbalanced_hi);
    }
    std::vector<int> ordinal_cats(n_ord);
    for (int o = 0; o < n_ord; ++o) {
        ordinal_cats[o] = static_cast<int>(std::lround(
            rng_m.uniform(static_cast<double>(mix.ordinal_cat_lo),
                          static_cast<double>(mix.ordinal_cat_hi))));
    }

    Eigen::LLT<Eigen::MatrixXd> llt(gt.sigma_star);
    if (llt.info() != Eigen::Success) {
        throw NumericError("sample_mixed: Cholesky of sigma_star failed");
    }
    const Eigen::MatrixXd l = llt.matrixL();

    Rng rng_z = Rng::substream(seed, kKeyLatent);
    Eigen::MatrixXd g(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = rng_z.normal();
    }
    Eigen::MatrixXd latent = g * l.transpose();

    SampledData out;
    out.latent = latent;
    out.dataset.values.resize(n, d);
    out.dataset.kinds.resize(d);
    out.dataset.names.resize(d);
    for (int j = 0; j < d; ++j) out.dataset.names[j] = "x" + std::to_string(j + 1);

    for (int j = 0; j < d; ++j) {
        const auto z = latent.col(j);
        auto x = out.dataset.values.col(j);
        if (j >= d1) {  // continuous block
            for (int i = 0; i < n; ++i) {
                const double zi = z(i);
                x(i) = (mix.transform == MarginalTransform::CubeRoot) ? zi * zi * zi : zi;
            }
            out.dataset.kinds[j] = VariableKind::continuous();
            continue;
        }
        if (j < n_bin) {
            const double p = binary_p[j];
            for (int i = 0; i < n; ++i) {
                x(i) = (std_normal_cdf(z(i)) > 1.0 - p) ? 1.0 : 0.0;
            }
        } else if (j < n_bin + n_ord) {
            const int m = ordinal_cats[j - n_bin];
            const double total = static_cast<double>(m) * (m + 1) / 2.0;
            for (int i = 0; i < n; ++i) {
                const double u = std_normal_cdf(z(i));
                double cum = 0.0;
                int code = m - 1;
                for (int r = 0; r < m; ++r) {
                    cum += static_cast<double>(r + 1) / total;
                    if (u <= cum) {
                        code = r;
                        break;
                    }
                }
                x(i) = static_cast<double>(code);
            }
        } else {
            for (int i = 0; i < n; ++i) {
                x(i) = static_cast<double>(
                    poisson_quantile(std_normal_cdf(z(i)), mix.poisson_rate));
            }
        }
        // Observed distinct codes become the declared levels.
        std::vector<double> levels(x.data(), x.data() + n);
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        if (levels.size() < 2) {
            throw ValidationError("sample_mixed: discrete column " +
                                  out.dataset.names[j] +
                                  " collapsed to a single level");
        }
        out.dataset.kinds[j] = VariableKind::ordinal(std::move(levels));
    }
    out.dataset.validate();
    return out;
}

namespace {

ReplicateResult run_replicate(const BenchmarkConfig& config, int r) {
    ReplicateResult rep;
    rep.replicate = r;

    GraphSpec gspec = config.graph;
    gspec.seed = Rng::derive_seed(config.seed, 2 * static_cast<std::uint64_t>(r));
    const std::uint64_t sample_seed =
        Rng::derive_seed(config.seed, 2 * static_cast<std::uint64_t>(r) + 1);

    GroundTruth gt;
    SampledData data;
    try {
        gt = generate_graph(gspec);
        data = sample_mixed(gt, config.mix, config.n, sample_seed);
    } catch (const std::exception& e) {
        rep.errors.emplace_back(std::string("generation: ") + e.what());
        return rep;
    }

    for (Family family : config.families) {
        const std::string name = family_name(family);
        try {
            LatentCorrelationMatrix est =
                (family == Family::Oracle)
                    ? oracle_correlation(data.latent, data.dataset.names)
                    : estimate_latent_correlation(data.dataset, family, 1);
            const Eigen::MatrixXd repaired = nearest_psd_correlation(est.values);
            const auto grid = lambda_grid(repaired, config.grid_size);
            const auto path = select_model(repaired, config.n, config.theta, grid);

            FamilyResult fr;
            fr.frobenius = frobenius_error(path.selected().omega, gt.omega_star);
            fr.roc = roc_auc(path, gt.omega_star);
            fr.auc = fr.roc.auc;
            fr.selected_edges = static_cast<int>(path.selected().edges.size());
            fr.selected_lambda = path.selected().lambda;
            for (const auto& sol : path.solutions) {
                fr.kkt_max = std::max(fr.kkt_max, kkt_residual(sol, repaired));
                fr.inverse_residual_max =
                    std::max(fr.inverse_residual_max, inverse_residual(sol));
            }
            rep.results.emplace(name, std::move(fr));
        } catch (const std::exception& e) {
            rep.errors.emplace_back(name + ": " + e.what());
        }
    }
    return rep;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config, int threads) {
    if (config.replicates < 1) {
        throw ValidationError("run_benchmark: replicates must be >= 1");
    }
    if (config.families.empty()) {
        throw ValidationError("run_benchmark: no estimator families given");
    }
    if (!(config.theta >= 0.0 && config.theta <= 1.0)) {
        throw ValidationError("run_benchmark: theta outside [0,1]");
    }

    BenchmarkReport report;
    report.rng_algorithm = Rng::kAlgorithmId;
    report.config_echo = benchmark_config_to_json(config);
    report.replicates.resize(config.replicates);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= config.replicates) return;
            report.replicates[r] = run_replicate(config, r);
        }
    };

    int nthreads = threads;
    if (nthreads <= 0) {
        nthreads = static_cast<int>(std::thread::hardware_concurrency());
        if (nthreads <= 0) nthreads = 1;
    }
    nthreads = std::min(nthreads, config.replicates);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (Family family : config.families) {
        const std::string name = family_name(family);
        BenchmarkReport::Aggregate agg;
        std::vector<double> fro, auc;
        for (const auto& rep : report.replicates) {
            auto it = rep.results.find(name);
            if (it == rep.results.end()) continue;
            fro.push_back(it->second.frobenius);
            auc.push_back(it->second.auc);
        }
        agg.count = static_cast<int>(fro.size());
        if (agg.count > 0) {
            auto mean = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            auto sd = [&](const std::vector<double>& v, double m) {
                if (v.size() < 2) return 0.0;
                double s = 0.0;
                for (double x : v) s += (x - m) * (x - m);
                return std::sqrt(s / static_cast<double>(v.size() - 1));
            };
            agg.frobenius_mean = mean(fro);
            agg.frobenius_sd = sd(fro, agg.frobenius_mean);
            agg.auc_mean = mean(auc);
            agg.auc_sd = sd(auc, agg.auc_mean);
        }
        report.aggregates.emplace(name, agg);
    }
    return report;
}

std::string report_to_json(const BenchmarkReport& report) {
    nlohmann::json doc;
    doc["rng_algorithm"] = report.rng_algorithm;
    doc["config"] = report.config_echo;
    auto reps = nlohmann::json::array();
    for (const auto& rep : report.replicates) {
        nlohmann::json jr;
        jr["replicate"] = rep.replicate;
        jr["errors"] = rep.errors;
        nlohmann::json results;
        for (const auto& [name, fr] : rep.results) {
            results[name] = {
                {"frobenius", fr.frobenius},
                {"auc", fr.auc},
                {"selected_edges", fr.selected_edges},
                {"selected_lambda", fr.selected_lambda},
                {"kkt_max", fr.kkt_max},
                {"inverse_residual_max", fr.inverse_residual_max},
            };
        }
        jr["results"] = std::move(results);
        reps.push_back(std::move(jr));
    }
    doc["replicates"] = std::move(reps);
    nlohmann::json aggs;
    for (const auto& [name, agg] : report.aggregates) {
        aggs[name] = {
            {"count", agg.count},
            {"frobenius_mean", agg.frobenius_mean},
            {"frobenius_sd", agg.frobenius_sd},
            {"auc_mean", agg.auc_mean},
            {"auc_sd", agg.auc_sd},
        };
    }
    doc["aggregates"] = std::move(aggs);
    return doc.dump(2);
}

namespace {

const nlohmann::json* find_key(const nlohmann::json& doc, const std::string& key) {
    auto it = doc.find(key);
    return it == doc.end() ? nullptr : &*it;
}

}  // namespace

BenchmarkConfig parse_benchmark_config(const nlohmann::json& doc) {
    std::vector<std::string> problems;
    BenchmarkConfig config;

    auto require = [&](const nlohmann::json& node, const std::string& path,
                       auto& target) {
        const nlohmann::json* v = find_key(node, path.substr(path.rfind('.') + 1));
        if (!v) {
            problems.push_back("missing key: " + path);
            return;
        }
        try {
            target = v->get<std::decay_t<decltype(target)>>();
        } catch (const nlohmann::json::exception&) {
            problems.push_back("invalid value for key: " + path);
        }
    };

    const nlohmann::json* graph = find_key(doc, "graph");
    if (!graph) {
        problems.push_back("missing key: graph");
    } else {
        require(*graph, "graph.d", config.graph.d);
        if (auto* v = find_key(*graph, "s")) config.graph.s = v->get<double>();
        if (auto* v = find_key(*graph, "c")) config.graph.c = v->get<double>();
        if (auto* v = find_key(*graph, "target_edges")) {
            config.graph.target_edges = v->get<int>();
        }
    }

    const nlohmann::json* mix = find_key(doc, "mix");
    if (!mix) {
        problems.push_back("missing key: mix");
    } else {
        if (auto* v = find_key(*mix, "continuous_fraction")) {
            config.mix.continuous_fraction = v->get<double>();
        }
        if (auto* v = find_key(*mix, "poisson_rate")) {
            config.mix.poisson_rate = v->get<double>();
        }
        if (auto* v = find_key(*mix, "binary_balanced_fraction")) {
            config.mix.binary_balanced_fraction = v->get<double>();
        }
        if (auto* v = find_key(*mix, "binary_fraction")) {
            config.mix.binary_fraction = v->get<double>();
        }
        if (auto* v = find_key(*mix, "ordinal_fraction")) {
            config.mix.ordinal_fraction = v->get<double>();
        }
        if (auto* v = find_key(*mix, "poisson_fraction")) {
            config.mix.poisson_fraction = v->get<double>();
        }
        if (auto* v = find_key(*mix, "ordinal_cat_lo")) {
            config.mix.ordinal_cat_lo = v->get<int>();
        }
        if (auto* v = find_key(*mix, "ordinal_cat_hi")) {
            config.mix.ordinal_cat_hi = v->get<int>();
        }
        const nlohmann::json* tr = find_key(*mix, "transform");
        if (!tr) {
            problems.push_back("missing key: mix.transform");
        } else {
            const std::string name = tr->get<std::string>();
            if (name == "identity") {
                config.mix.transform = MarginalTransform::Identity;
            } else if (name == "cube") {
                config.mix.transform = MarginalTransform::CubeRoot;
            } else {
                problems.push_back("invalid value for key: mix.transform ('" + name +
                                   "', expected identity|cube)");
            }
        }
    }

    require(doc, "n", config.n);
    require(doc, "replicates", config.replicates);
    require(doc, "theta", config.theta);
    require(doc, "seed", config.seed);
    if (auto* v = find_key(doc, "grid_size")) config.grid_size = v->get<int>();

    const nlohmann::json* families = find_key(doc, "families");
    if (!families) {
        problems.push_back("missing key: families");
    } else if (!families->is_array() || families->empty()) {
        problems.push_back("invalid value for key: families (need non-empty array)");
    } else {
        for (const auto& f : *families) {
            try {
                config.families.push_back(family_from_name(f.get<std::string>()));
            } catch (const std::exception& e) {
                problems.push_back(std::string("invalid value for key: families (") +
                                   e.what() + ")");
            }
        }
    }

    if (!problems.empty()) {
        std::string msg = "config validation failed:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }
    return config;
}

nlohmann::json benchmark_config_to_json(const BenchmarkConfig& config) {
    nlohmann::json doc;
    doc["graph"]["d"] = config.graph.d;
    doc["graph"]["s"] = config.graph.s;
    doc["graph"]["c"] = config.graph.c;
    if (config.graph.target_edges) {
        doc["graph"]["target_edges"] = *config.graph.target_edges;
    }
    doc["mix"]["continuous_fraction"] = config.mix.continuous_fraction;
    doc["mix"]["binary_fraction"] = config.mix.binary_fraction;
    doc["mix"]["ordinal_fraction"] = config.mix.ordinal_fraction;
    doc["mix"]["poisson_fraction"] = config.mix.poisson_fraction;
    doc["mix"]["binary_balanced_fraction"] = config.mix.binary_balanced_fraction;
    doc["mix"]["ordinal_cat_lo"] = config.mix.ordinal_cat_lo;
    doc["mix"]["ordinal_cat_hi"] = config.mix.ordinal_cat_hi;
    doc["mix"]["poisson_rate"] = config.mix.poisson_rate;
    doc["mix"]["transform"] =
        config.mix.transform == MarginalTransform::Identity ? "identity" : "cube";
    doc["n"] = config.n;
    doc["replicates"] = config.replicates;
    doc["theta"] = config.theta;
    doc["grid_size"] = config.grid_size;
    doc["seed"] = config.seed;
    auto fams = nlohmann::json::array();
    for (Family f : config.families) fams.push_back(family_name(f));
    doc["families"] = std::move(fams);
    return doc;
}

}  // namespace mixedgraph
