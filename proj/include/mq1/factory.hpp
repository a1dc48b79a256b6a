#pragma once

#include <vector>

#include "mq1/fluid.hpp"
#include "mq1/policy.hpp"

namespace mq1 {

// Two-rate threshold policy: 1+k1 below tau, 1-k2 at tau and above, with
//   k1 = sqrt(eps/-F''(1)) * sqrt(log2(1/eps)),
//   k2 = sqrt(eps/-F''(1)) / sqrt(log2(1/eps)),
//   tau = ceil(0.5 * sqrt(-F''(1)/eps) * sqrt(log2(1/eps))).
Policy two_arrival_policy(const RewardFunction& f, double eps);

// Gradually varying rates ((m+q+2)/(m+q+1))^k rising toward the center B,
// mirrored on the way down, zero from 2B on. k = 2 uses
// m = ceil(1/(sqrt(lambda_max)-1)) - 1 and B = ceil(sqrt(-7 F''(1)/eps));
// other k > 1 use m = 0 and B = ceil(sqrt((-F''(1)/eps)(k^2(k+1)/(2(k-1))+1))).
Policy fully_dynamic_policy(const RewardFunction& f, double eps, double k, double lambda_max);

// Same rate profile with m, B, k pinned directly (no tuning parameter).
Policy make_fully_dynamic(int m, int B, double k);

// Keeps the fluid support points and switches between them at
// tau = ceil(log_{x1}(C/eps)), C = dF + 2 sqrt(dF), dF = F(x1) - F(x2).
Policy two_support_threshold_policy(const FluidSolution& sol, const RewardFunction& f,
                                    double eps);

// Admit at lambda_max below tau, reject at tau and above;
// tau = ceil(log((lambda_max-1+eps)/eps)/log(lambda_max) - 1).
Policy throughput_threshold_policy(double lambda_max, double eps);

// Smallest constant rate c < 1 with F(c) >= f_star - eps (bisection).
Policy static_near_capacity_policy(const RewardFunction& f, double f_star, double eps);

enum class BoundRegime { SmallMarket, ConcaveLike, NonConcaveLike };

// Greedy capped distribution certifying min E[q] over all policies with
// regret at most eps, together with the closed-form leading term.
struct LowerBoundResult {
    BoundRegime regime = BoundRegime::ConcaveLike;
    double q_lower = 0.0;       // exact value of the greedy witness
    double closed_form = 0.0;   // leading-order asymptotic
    std::vector<double> witness;
};

// Uniform cap sqrt(2 eps / -F''(1)) per state.
LowerBoundResult lower_bound_concave(double f_second_at_1, double eps);
// pi_0 capped at eps (x1-x2)/(F(x1)-F(x2)), geometric growth at lambda_max.
LowerBoundResult lower_bound_two_point(const FluidSolution& sol, const RewardFunction& f,
                                       double lambda_max, double eps);
// pi_0 capped at eps/k, flat growth (lambda_max = 1).
LowerBoundResult lower_bound_small_market(double slope_k, double eps);

// E[q] >= (tau + 1/k2)/4 for every two-rate threshold policy.
double two_arrival_queue_floor(const Policy& p);

}  // namespace mq1
