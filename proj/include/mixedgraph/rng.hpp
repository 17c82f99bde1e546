#pragma once

#include <array>
#include <cstdint>

#include "mixedgraph/special_functions.hpp"

namespace mixedgraph {

/// Deterministic pseudo-random source used throughout the simulation
/// harness. xoshiro256++ state, seeded from a SplitMix64 expansion of the
/// user seed; Gaussian variates come from the inverse CDF so that streams
/// are identical across platforms and thread counts. Substreams are
/// derived by mixing a 64-bit key into the master seed, which keeps
/// replicate and column streams independent of scheduling order.
class Rng {
public:
    static constexpr const char* kAlgorithmId =
        "xoshiro256++ (splitmix64-seeded, inverse-cdf gaussian)";

    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix_next(x);
    }

    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
        return splitmix_mix(master + key * 0x9E3779B97F4A7C15ULL);
    }

    static Rng substream(std::uint64_t master, std::uint64_t key) {
        return Rng(derive_seed(master, key));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1); 53-bit resolution.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Inclusive integer range.
    int uniform_int(int lo, int hi) {
        int span = hi - lo + 1;
        int v = lo + static_cast<int>(uniform01() * span);
        return v > hi ? hi : v;
    }

    double normal() { return std_normal_quantile(uniform01()); }

private:
    static std::uint64_t rotl(std::uint64_t v, int s) {
        return (v << s) | (v >> (64 - s));
    }

    static std::uint64_t splitmix_mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix_next(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        return splitmix_mix(x);
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace mixedgraph
