#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mixedgraph {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a 64-bit hash, used for stable config fingerprints.
std::uint64_t fnv1a64(std::string_view data);

/// Provenance record written next to every output artifact. The config
/// hash is computed over the canonical (key-sorted) JSON dump of the
/// inputs, so key order in the source file cannot change it; timestamps
/// are excluded from the hash.
struct RunManifest {
    std::string command;
    nlohmann::json inputs;
    std::vector<std::uint64_t> seeds;
    std::string rng_algorithm;
    std::string version = kVersion;
    std::string created_at;  // ISO-8601 UTC

    std::string config_hash() const;
    nlohmann::json to_json() const;
    void write(const std::string& path) const;
};

RunManifest make_manifest(const std::string& command, nlohmann::json inputs,
                          std::vector<std::uint64_t> seeds);

}  // namespace mixedgraph
