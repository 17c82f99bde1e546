#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixedgraph/manifest.hpp"
#include "mixedgraph/rng.hpp"

using namespace mixedgraph;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
    fs::path dir = fs::path(MIXEDGRAPH_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(MIXEDGRAPH_CLI_PATH) + " " + args + " >" +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// Two strongly correlated continuous columns plus independent noise, with
// one binary column.
void write_clique_fixture(const fs::path& csv) {
    Rng rng(131);
    std::string text = "a,b,c,dbin\n";
    for (int i = 0; i < 300; ++i) {
        const double z = rng.normal();
        const double a = z + 0.2 * rng.normal();
        const double b = z + 0.2 * rng.normal();
        const double c = rng.normal();
        const int dbin = rng.uniform01() < 0.5 ? 0 : 1;
        text += std::to_string(a) + "," + std::to_string(b) + "," +
                std::to_string(c) + "," + std::to_string(dbin) + "\n";
    }
    write_file(csv, text);
}

}  // namespace

TEST_CASE("estimate command writes deterministic artifacts") {
    const auto dir = tmp_dir("cli_estimate");
    write_clique_fixture(dir / "data.csv");

    const std::string base = "estimate --data " + (dir / "data.csv").string() +
                             " --family poly --out ";
    REQUIRE(run_cli(base + (dir / "out1").string(), dir / "log1.txt") == 0);
    REQUIRE(run_cli(base + (dir / "out2").string(), dir / "log2.txt") == 0);

    CHECK(fs::exists(dir / "out1/correlation.csv"));
    CHECK(fs::exists(dir / "out1/correlation.json"));
    CHECK(fs::exists(dir / "out1/manifest.json"));
    CHECK(slurp(dir / "out1/correlation.csv") == slurp(dir / "out2/correlation.csv"));
    CHECK(slurp(dir / "out1/correlation.json") == slurp(dir / "out2/correlation.json"));

    // Manifests agree on everything except the timestamp.
    auto m1 = nlohmann::json::parse(slurp(dir / "out1/manifest.json"));
    auto m2 = nlohmann::json::parse(slurp(dir / "out2/manifest.json"));
    CHECK(m1["config_hash"] == m2["config_hash"]);
    m1.erase("created_at");
    m2.erase("created_at");
    CHECK(m1 == m2);
}

TEST_CASE("estimate reports data errors with exit code 1") {
    const auto dir = tmp_dir("cli_errors");
    write_file(dir / "data.csv", "a,b\n0,0.5\n1,0.7\n0,0.9\n1,1.1\n");
    write_file(dir / "kinds.csv", "a,ordinal,0,1,2\nb,continuous\n");
    const int code = run_cli("estimate --data " + (dir / "data.csv").string() +
                                 " --kinds " + (dir / "kinds.csv").string() +
                                 " --family mle --out " + (dir / "out").string(),
                             dir / "log.txt");
    CHECK(code == 1);
    CHECK(slurp(dir / "log.txt").find("a") != std::string::npos);

    write_file(dir / "bad.csv", "a,b\n1,x\n");
    CHECK(run_cli("estimate --data " + (dir / "bad.csv").string() + " --out " +
                      (dir / "out2").string(),
                  dir / "log2.txt") == 1);
}

TEST_CASE("graph command recovers the planted clique") {
    const auto dir = tmp_dir("cli_graph");
    write_clique_fixture(dir / "data.csv");
    REQUIRE(run_cli("graph --data " + (dir / "data.csv").string() +
                        " --family poly --theta 0.1 --out " + (dir / "out").string(),
                    dir / "log.txt") == 0);
    CHECK(fs::exists(dir / "out/path.json"));
    const std::string edges = slurp(dir / "out/selected_edges.csv");
    CHECK(edges.find(",b,a,") != std::string::npos);  // the planted pair, row-major (j>k)

    CHECK(run_cli("graph --data " + (dir / "data.csv").string() +
                      " --theta 1.5 --out " + (dir / "junk").string(),
                  dir / "log2.txt") == 1);
}

TEST_CASE("graph command on independent columns selects the empty graph") {
    const auto dir = tmp_dir("cli_graph_empty");
    Rng rng(132);
    std::string text = "p,q,r\n";
    for (int i = 0; i < 250; ++i) {
        text += std::to_string(rng.normal()) + "," + std::to_string(rng.normal()) +
                "," + std::to_string(rng.normal()) + "\n";
    }
    write_file(dir / "data.csv", text);
    REQUIRE(run_cli("graph --data " + (dir / "data.csv").string() +
                        " --family mle --theta 0.1 --out " + (dir / "out").string(),
                    dir / "log.txt") == 0);
    CHECK(slurp(dir / "out/selected_edges.csv") == "j,k,name_j,name_k,omega\n");
}

TEST_CASE("bench runs are seed-reproducible") {
    const auto dir = tmp_dir("cli_bench");
    write_file(dir / "config.json", R"({
      "graph": {"d": 10, "c": 2.0},
      "mix": {"transform": "identity"},
      "n": 120,
      "replicates": 1,
      "families": ["poly"],
      "theta": 0.1,
      "grid_size": 6,
      "seed": 7
    })");
    const std::string base = "bench --config " + (dir / "config.json").string() +
                             " --replicates 1 --seed 7 --out ";
    REQUIRE(run_cli(base + (dir / "b1").string(), dir / "log1.txt") == 0);
    REQUIRE(run_cli(base + (dir / "b2").string(), dir / "log2.txt") == 0);
    CHECK(slurp(dir / "b1/report.json") == slurp(dir / "b2/report.json"));
    CHECK(fs::exists(dir / "b1/roc_rep0_poly.csv"));

    // Missing keys are all reported at once.
    write_file(dir / "broken.json", R"({"graph": {}, "mix": {}})");
    CHECK(run_cli("bench --config " + (dir / "broken.json").string() + " --out " +
                      (dir / "b3").string(),
                  dir / "log3.txt") == 1);
    const std::string log = slurp(dir / "log3.txt");
    for (const char* key : {"graph.d", "mix.transform", "n", "theta", "seed", "families"}) {
        INFO(key);
        CHECK(log.find(key) != std::string::npos);
    }
}

TEST_CASE("simulate writes the dataset bundle") {
    const auto dir = tmp_dir("cli_simulate");
    write_file(dir / "config.json", R"({
      "graph": {"d": 8, "c": 2.0},
      "mix": {"transform": "identity"},
      "n": 100,
      "replicates": 1,
      "families": ["poly"],
      "theta": 0.1,
      "seed": 11
    })");
    REQUIRE(run_cli("simulate --config " + (dir / "config.json").string() +
                        " --out " + (dir / "sim").string(),
                    dir / "log.txt") == 0);
    for (const char* name : {"dataset.csv", "kinds.csv", "latent.csv",
                             "omega_star.csv", "sigma_star.csv", "edges_star.csv",
                             "manifest.json"}) {
        INFO(name);
        CHECK(fs::exists(dir / "sim" / name));
    }
}

TEST_CASE("manifest hash is stable under key reordering") {
    RunManifest a = make_manifest("estimate", {{"x", 1}, {"y", 2}}, {1, 2});
    RunManifest b = make_manifest("estimate", {{"y", 2}, {"x", 1}}, {1, 2});
    CHECK(a.config_hash() == b.config_hash());
    RunManifest c = make_manifest("estimate", {{"x", 1}, {"y", 3}}, {1, 2});
    CHECK(a.config_hash() != c.config_hash());
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}
