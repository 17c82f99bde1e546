#include "mixedgraph/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mixedgraph/errors.hpp"
#include "mixedgraph/rng.hpp"

namespace mixedgraph {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunManifest::config_hash() const {
    // nlohmann::json keeps object keys sorted, so dump() is canonical.
    nlohmann::json hashed;
    hashed["command"] = command;
    hashed["inputs"] = inputs;
    hashed["seeds"] = seeds;
    hashed["rng_algorithm"] = rng_algorithm;
    hashed["version"] = version;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(hashed.dump())));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["inputs"] = inputs;
    doc["seeds"] = seeds;
    doc["rng_algorithm"] = rng_algorithm;
    doc["version"] = version;
    doc["config_hash"] = config_hash();
    doc["created_at"] = created_at;
    return doc;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << to_json().dump(2) << "\n";
}

RunManifest make_manifest(const std::string& command, nlohmann::json inputs,
                          std::vector<std::uint64_t> seeds) {
    RunManifest m;
    m.command = command;
    m.inputs = std::move(inputs);
    m.seeds = std::move(seeds);
    m.rng_algorithm = Rng::kAlgorithmId;

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.created_at = buf;
    return m;
}

}  // namespace mixedgraph
