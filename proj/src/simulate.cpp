#include "ctmc/simulate.hpp"

#include <stdexcept>

#include "ctmc/rng.hpp"

namespace ctmc {

SimEstimate simulate(const Model& model, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

    const std::size_t n = model.state_count();
    RngStream sojourns(seed, 0);
    RngStream choices(seed, 1);

    std::vector<double> time_in(n, 0.0);
    std::uint64_t events = 0;
    StateId state = model.root();
    double t = 0.0;

    while (true) {
        double total_rate = exit_rate(model, state);
        double dwell = sojourns.exponential(total_rate);
        if (t + dwell >= horizon) {
            time_in[state] += horizon - t;
            break;
        }
        time_in[state] += dwell;
        t += dwell;

        auto out = model.outgoing(state);
        double u = choices.uniform01() * total_rate;
        double acc = 0.0;
        StateId next = out.back().dst;  // guards the u == total_rate edge
        for (const auto& tr : out) {
            acc += tr.rate.value;
            if (u < acc) {
                next = tr.dst;
                break;
            }
        }
        state = next;
        ++events;
    }

    double total_time = 0.0;
    for (double v : time_in) total_time += v;

    SimEstimate est;
    est.occupancy.resize(n);
    for (std::size_t i = 0; i < n; ++i) est.occupancy[i] = time_in[i] / total_time;
    est.events = events;
    est.horizon = horizon;
    est.seed = seed;
    return est;
}

}  // namespace ctmc
