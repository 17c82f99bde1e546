#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mixedgraph/dataset.hpp"
#include "mixedgraph/errors.hpp"
#include "mixedgraph/glasso.hpp"
#include "mixedgraph/latent_correlation.hpp"
#include "mixedgraph/manifest.hpp"
#include "mixedgraph/metrics.hpp"
#include "mixedgraph/rng.hpp"
#include "mixedgraph/simulation.hpp"

namespace fs = std::filesystem;
using namespace mixedgraph;

namespace {

struct CommonOpts {
    std::string data_path;
    std::string kinds_path;
    std::string family = "poly";
    std::string out_dir = ".";
    int threads = 0;
};

MixedDataset load_dataset(const CommonOpts& opts) {
    std::optional<std::vector<VariableKind>> kinds;
    if (!opts.kinds_path.empty()) {
        std::ifstream probe(opts.data_path);
        if (!probe) throw ParseError("cannot open " + opts.data_path);
        std::string header;
        std::getline(probe, header);
        std::vector<std::string> names;
        std::stringstream ss(header);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
        kinds = read_kinds_sidecar(opts.kinds_path, names);
    }
    return ingest_csv(opts.data_path, std::move(kinds));
}

nlohmann::json load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
    if (text.empty() || text.back() != '\n') out << "\n";
}

void write_edges_csv(const GlassoSolution& sol,
                     const std::vector<std::string>& names,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "j,k,name_j,name_k,omega\n";
    for (const auto& [j, k] : sol.edges) {
        out << j << ',' << k << ',' << names[j] << ',' << names[k] << ','
            << format_double(sol.omega(j, k)) << "\n";
    }
}

int cmd_estimate(const CommonOpts& opts) {
    fs::create_directories(opts.out_dir);
    const auto data = load_dataset(opts);
    const Family family = family_from_name(opts.family);
    const auto est = estimate_latent_correlation(data, family, opts.threads);
    const Eigen::MatrixXd repaired = nearest_psd_correlation(est.values);

    write_matrix_csv(repaired, est.names, opts.out_dir + "/correlation.csv");
    write_text(opts.out_dir + "/correlation.json", correlation_to_json(est, repaired));

    auto manifest = make_manifest(
        "estimate",
        {{"data", opts.data_path},
         {"kinds", opts.kinds_path.empty() ? nlohmann::json() : nlohmann::json(opts.kinds_path)},
         {"family", opts.family}},
        {});
    manifest.write(opts.out_dir + "/manifest.json");
    std::cout << "wrote " << opts.out_dir << "/correlation.{csv,json}\n";
    return 0;
}

int cmd_graph(const CommonOpts& opts, double theta, int grid_size) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw ValidationError("--theta must lie in [0,1]");
    }
    if (grid_size < 2) throw ValidationError("--grid must be >= 2");
    fs::create_directories(opts.out_dir);
    const auto data = load_dataset(opts);
    const Family family = family_from_name(opts.family);
    const auto est = estimate_latent_correlation(data, family, opts.threads);
    const Eigen::MatrixXd repaired = nearest_psd_correlation(est.values);
    const auto grid = lambda_grid(repaired, grid_size);
    const auto path = select_model(repaired, data.n(), theta, grid);

    write_text(opts.out_dir + "/path.json", path_to_json(path));
    write_edges_csv(path.selected(), est.names, opts.out_dir + "/selected_edges.csv");

    auto manifest = make_manifest(
        "graph",
        {{"data", opts.data_path},
         {"kinds", opts.kinds_path.empty() ? nlohmann::json() : nlohmann::json(opts.kinds_path)},
         {"family", opts.family},
         {"theta", theta},
         {"grid", grid_size}},
        {});
    manifest.write(opts.out_dir + "/manifest.json");
    std::cout << "selected " << path.selected().edges.size() << " edges at lambda="
              << format_double(path.selected().lambda) << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto config = parse_benchmark_config(load_config_json(config_path));
    GraphSpec gspec = config.graph;
    gspec.seed = config.seed;
    const auto gt = generate_graph(gspec);
    const auto sample = sample_mixed(gt, config.mix, config.n,
                                     Rng::derive_seed(config.seed, 1));

    write_csv(sample.dataset, out_dir + "/dataset.csv");
    write_kinds_sidecar(sample.dataset, out_dir + "/kinds.csv");
    write_matrix_csv(sample.latent, sample.dataset.names, out_dir + "/latent.csv");
    write_matrix_csv(gt.omega_star, sample.dataset.names, out_dir + "/omega_star.csv");
    write_matrix_csv(gt.sigma_star, sample.dataset.names, out_dir + "/sigma_star.csv");
    {
        std::ofstream out(out_dir + "/edges_star.csv");
        out << "j,k\n";
        for (const auto& [j, k] : gt.edges) out << j << ',' << k << "\n";
    }

    auto manifest = make_manifest("simulate",
                                  {{"config", benchmark_config_to_json(config)}},
                                  {config.seed});
    manifest.write(out_dir + "/manifest.json");
    std::cout << "simulated n=" << config.n << ", d=" << config.graph.d << ", |E*|="
              << gt.edges.size() << "\n";
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir,
              int threads, int replicates_override, long seed_override) {
    fs::create_directories(out_dir);
    auto config = parse_benchmark_config(load_config_json(config_path));
    if (replicates_override > 0) config.replicates = replicates_override;
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);

    const auto report = run_benchmark(config, threads);
    write_text(out_dir + "/report.json", report_to_json(report));
    for (const auto& rep : report.replicates) {
        for (const auto& [name, fr] : rep.results) {
            write_roc_csv(fr.roc, out_dir + "/roc_rep" + std::to_string(rep.replicate) +
                                      "_" + name + ".csv");
        }
    }

    auto manifest = make_manifest("bench",
                                  {{"config", benchmark_config_to_json(config)}},
                                  {config.seed});
    manifest.write(out_dir + "/manifest.json");

    for (const auto& [name, agg] : report.aggregates) {
        std::cout << name << ": auc " << agg.auc_mean << " (sd " << agg.auc_sd
                  << "), frobenius " << agg.frobenius_mean << " (sd "
                  << agg.frobenius_sd << "), n=" << agg.count << "\n";
    }
    int failures = 0;
    for (const auto& rep : report.replicates) {
        failures += static_cast<int>(rep.errors.size());
    }
    if (failures > 0) {
        std::cerr << failures << " replicate-level failures recorded in report.json\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse undirected graph estimation from mixed data via latent correlations"};
    app.require_subcommand(1);

    CommonOpts opts;
    double theta = 0.1;
    int grid_size = 30;
    std::string config_path;
    int replicates_override = 0;
    long seed_override = -1;

    auto add_common = [&](CLI::App* cmd, bool with_family) {
        cmd->add_option("--data", opts.data_path, "input CSV with header row")->required();
        cmd->add_option("--kinds", opts.kinds_path, "kind sidecar (name,kind[,levels...])");
        if (with_family) {
            cmd->add_option("--family", opts.family, "estimator family: mle|poly")
                ->check(CLI::IsMember({"mle", "poly"}));
        }
        cmd->add_option("--out", opts.out_dir, "output directory")->required();
        cmd->add_option("--threads", opts.threads, "pair-estimation workers (0 = all cores)");
    };

    auto* est = app.add_subcommand("estimate", "latent correlation matrix");
    add_common(est, true);

    auto* graph = app.add_subcommand("graph", "glasso path and eBIC-selected edges");
    add_common(graph, true);
    graph->add_option("--theta", theta, "eBIC theta in [0,1]");
    graph->add_option("--grid", grid_size, "lambda grid size");

    auto* sim = app.add_subcommand("simulate", "generate one synthetic dataset");
    sim->add_option("--config", config_path, "config file (JSON)")->required();
    sim->add_option("--out", opts.out_dir, "output directory")->required();

    auto* bench = app.add_subcommand("bench", "replicated benchmark");
    bench->add_option("--config", config_path, "config file (JSON)")->required();
    bench->add_option("--out", opts.out_dir, "output directory")->required();
    bench->add_option("--threads", opts.threads, "replicate workers (0 = all cores)");
    bench->add_option("--replicates", replicates_override, "override replicate count");
    bench->add_option("--seed", seed_override, "override master seed");

    try {
        app.parse(argc, argv);
        if (est->parsed()) return cmd_estimate(opts);
        if (graph->parsed()) return cmd_graph(opts, theta, grid_size);
        if (sim->parsed()) return cmd_simulate(config_path, opts.out_dir);
        if (bench->parsed()) {
            return cmd_bench(config_path, opts.out_dir, opts.threads,
                             replicates_override, seed_override);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
