#pragma once

#include <optional>
#include <vector>

#include "mq1/policy.hpp"
#include "mq1/reward.hpp"

namespace mq1 {

// Stationary law of the birth-death chain with births lambda(q) and unit
// service rate. probabilities holds pi_0..pi_Q; an EventuallyConstant tail is
// kept analytically as pi_q = pi_Q * ratio^(q-Q) for q > Q.
struct StationaryDistribution {
    std::vector<double> probabilities;
    struct GeometricTail {
        double ratio;
        int start;  // tail ratio applies from this index on (== probabilities.size()-1)
    };
    std::optional<GeometricTail> tail;
    double tail_mass_bound = 0.0;  // certified mass beyond the stored range (General tails)

    double pi0() const { return probabilities.empty() ? 1.0 : probabilities.front(); }
    double total_mass() const;      // finite part plus analytic tail
    double expected_queue() const;  // sum q pi_q including the tail
};

// Detailed-balance solve: w_0 = 1, w_{q+1} = lambda(q) w_q, then normalize.
// FiniteCutoff tails are exact; EventuallyConstant tails use closed-form
// geometric sums; General tails extend the truncation until a 64-state probe
// certifies a geometric bound below tol, and fail otherwise.
StationaryDistribution stationary_distribution(const Policy& p, double tol = 1e-12);

struct PolicyMetrics {
    double expected_queue = 0.0;
    double reward = 0.0;
    double regret = 0.0;
    double throughput = 0.0;
    double idle = 0.0;
    int truncation_level = 0;
};

// Long-run averages under the stationary law. d must have been computed from
// p (checked through the detailed-balance identity).
PolicyMetrics metrics(const Policy& p, const StationaryDistribution& d, const RewardFunction& f,
                      double f_star);

// Convenience wrapper: stationary distribution plus metrics in one call.
PolicyMetrics evaluate_policy(const Policy& p, const RewardFunction& f, double f_star,
                              double tol = 1e-12);

}  // namespace mq1
