#pragma once

#include <cstdint>
#include <vector>

#include "ctmc/model.hpp"

namespace ctmc {

// Monte Carlo estimate of the stationary distribution from one simulated
// trajectory.
struct SimEstimate {
    std::vector<double> occupancy;  // fraction of time per state; sums to 1
    std::uint64_t events = 0;       // transitions taken within the horizon
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

// Simulate one trajectory from the root: exponential sojourns drawn by
// inverse CDF, successors chosen proportionally to their rates. Stream 0 of
// `seed` drives sojourn lengths and stream 1 successor choice, so results
// are bit-reproducible for a fixed seed.
SimEstimate simulate(const Model& model, double horizon, std::uint64_t seed);

}  // namespace ctmc
