#pragma once

#include <cstdint>

#include "mq1/policy.hpp"
#include "mq1/reward.hpp"

namespace mq1 {

struct SimulationEstimate {
    double mean_queue = 0.0;
    double mean_reward = 0.0;
    double se_queue = 0.0;
    double se_reward = 0.0;
    int replications = 0;
    double horizon = 0.0;
    double warmup_fraction = 0.0;
    std::uint64_t seed = 0;
    bool absorbed = false;  // lambda(0) = 0: the chain never leaves the empty state
};

// Event-driven continuous-time simulation. Each replication starts at q = 0,
// draws exponential holding times at rate lambda(q) + 1{q>0}, and accumulates
// time-weighted integrals of q and F(lambda(q)) after the warm-up window.
// Replication r uses a stream derived from (seed, r) by a fixed splitmix64
// scheme, so results are bit-identical for identical inputs.
SimulationEstimate simulate(const Policy& p, const RewardFunction& f, double horizon,
                            double warmup_fraction, int replications, std::uint64_t seed);

}  // namespace mq1
