#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ctmc {

// Seed expander (splitmix64). Used to derive independent stream seeds from a
// single user-facing seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic uniform stream on top of mt19937_64. Doubles are built from
// the top 53 bits of the raw output, so sequences are bit-identical across
// platforms and standard library implementations.
//
// `stream` selects one of several independent streams derived from `seed`
// via splitmix64: the simulator uses stream 0 for sojourn lengths and
// stream 1 for successor choices.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t state = seed;
        std::uint64_t derived = splitmix64(state);
        for (std::uint64_t i = 0; i < stream; ++i) derived = splitmix64(state);
        engine_.seed(derived);
    }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate, by inverse CDF: -ln(1 - u) / rate.
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return lo * std::exp(uniform01() * std::log(hi / lo));
    }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace ctmc
