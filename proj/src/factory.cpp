#include "mq1/factory.hpp"

#include <algorithm>
#include <cmath>

namespace mq1 {

namespace {

double log2_inv(double eps) {
    if (eps >= 1.0) throw DomainError("tuning parameter must lie in (0, 1)");
    return std::log2(1.0 / eps);
}

double curvature_at_capacity(const RewardFunction& f) {
    double d2 = f.derivative(1.0, 2);
    if (!(d2 < 0.0))
        throw DomainError("construction needs F''(1) < 0, got " + std::to_string(d2));
    return d2;
}

}  // namespace

Policy two_arrival_policy(const RewardFunction& f, double eps) {
    if (!(eps > 0.0)) throw DomainError("tuning parameter must be positive");
    double d2 = curvature_at_capacity(f);
    double L = log2_inv(eps);
    double base = std::sqrt(eps / -d2);
    double k1 = base * std::sqrt(L);
    double k2 = base / std::sqrt(L);
    int tau = static_cast<int>(std::ceil(0.5 * std::sqrt(-d2 / eps) * std::sqrt(L)));
    if (1.0 + k1 > f.lambda_max())
        throw InfeasibleError("1 + k1 = " + std::to_string(1.0 + k1) +
                              " exceeds lambda_max = " + std::to_string(f.lambda_max()));
    if (1.0 - k2 < 0.0)
        throw InfeasibleError("1 - k2 = " + std::to_string(1.0 - k2) + " falls below zero");
    Policy p;
    p.table.assign(tau, 1.0 + k1);
    p.tail = Tail::eventually_constant(1.0 - k2, tau);
    p.lambda_max = f.lambda_max();
    p.family = FamilyKind::TwoArrival;
    p.params = {{"k1", k1}, {"k2", k2}, {"tau", static_cast<double>(tau)}, {"eps", eps}};
    return p;
}

Policy make_fully_dynamic(int m, int B, double k) {
    if (m < 0 || B < 1) throw DomainError("need m >= 0 and B >= 1");
    if (k <= 1.0)
        throw InfeasibleError("exponent k <= 1 makes the queue-length constant diverge");
    Policy p;
    p.table.resize(2 * B);
    for (int q = 0; q < B; ++q)
        p.table[q] = std::pow((m + q + 2.0) / (m + q + 1.0), k);
    for (int q = B; q < 2 * B; ++q)
        p.table[q] = std::pow((m + 2.0 * B - q) / (m + 2.0 * B - q + 1.0), k);
    p.tail = Tail::finite_cutoff(2 * B);
    p.lambda_max = p.table[0];
    p.family = FamilyKind::FullyDynamic;
    p.params = {{"m", static_cast<double>(m)}, {"B", static_cast<double>(B)}, {"k", k}};
    return p;
}

Policy fully_dynamic_policy(const RewardFunction& f, double eps, double k, double lambda_max) {
    if (!(eps > 0.0) || eps >= 1.0) throw DomainError("tuning parameter must lie in (0, 1)");
    if (!(lambda_max > 1.0)) throw DomainError("fully dynamic policy needs lambda_max > 1");
    if (k <= 1.0)
        throw InfeasibleError("exponent k <= 1 makes the queue-length constant diverge");
    double d2 = curvature_at_capacity(f);

    int m;
    int B;
    if (k == 2.0) {
        m = static_cast<int>(std::ceil(1.0 / (std::sqrt(lambda_max) - 1.0))) - 1;
        B = static_cast<int>(std::ceil(std::sqrt(-7.0 * d2 / eps)));
    } else {
        m = 0;
        double c = k * k * (k + 1.0) / (2.0 * (k - 1.0)) + 1.0;
        B = static_cast<int>(std::ceil(std::sqrt((-d2 / eps) * c)));
    }
    Policy p = make_fully_dynamic(m, B, k);
    if (p.table[0] > lambda_max + 1e-12)
        throw InfeasibleError("peak rate " + std::to_string(p.table[0]) +
                              " exceeds lambda_max = " + std::to_string(lambda_max));
    p.lambda_max = lambda_max;
    p.params["eps"] = eps;
    return p;
}

Policy two_support_threshold_policy(const FluidSolution& sol, const RewardFunction& f,
                                    double eps) {
    if (!(eps > 0.0)) throw DomainError("tuning parameter must be positive");
    if (sol.structure != SupportStructure::TwoPoint)
        throw StructureError("two-support threshold needs a two-point fluid solution");
    double fx1 = f(sol.x1), fx2 = f(sol.x2);
    if (fx1 <= fx2)
        throw InfeasibleError("fluid support with F(x1) <= F(x2) cannot anchor the threshold");
    double df = fx1 - fx2;
    double C = df + 2.0 * std::sqrt(df);
    int tau = std::max(0, static_cast<int>(std::ceil(std::log(C / eps) / std::log(sol.x1))));
    Policy p;
    p.table.assign(tau + 1, sol.x1);
    if (sol.x2 == 0.0) {
        p.tail = Tail::finite_cutoff(tau + 1);
    } else {
        p.tail = Tail::eventually_constant(sol.x2, tau + 1);
    }
    p.lambda_max = f.lambda_max();
    p.family = FamilyKind::TwoSupportThreshold;
    p.params = {{"x1", sol.x1}, {"x2", sol.x2}, {"tau", static_cast<double>(tau)},
                {"C", C},       {"eps", eps}};
    return p;
}

Policy throughput_threshold_policy(double lambda_max, double eps) {
    if (!(lambda_max > 1.0))
        throw DomainError("throughput threshold needs lambda_max > 1");
    if (!(eps > 0.0)) throw DomainError("tuning parameter must be positive");
    int tau = static_cast<int>(
        std::ceil(std::log((lambda_max - 1.0 + eps) / eps) / std::log(lambda_max) - 1.0));
    Policy p;
    if (tau <= 0) {
        // Threshold collapsed: nothing is admitted.
        tau = 0;
        p.tail = Tail::finite_cutoff(0);
    } else {
        p.table.assign(tau, lambda_max);
        p.tail = Tail::finite_cutoff(tau);
    }
    p.lambda_max = lambda_max;
    p.family = FamilyKind::ThroughputThreshold;
    p.params = {{"lambda_max", lambda_max}, {"tau", static_cast<double>(tau)}, {"eps", eps}};
    return p;
}

Policy static_near_capacity_policy(const RewardFunction& f, double f_star, double eps) {
    if (!(eps > 0.0)) throw DomainError("tuning parameter must be positive");
    double target = f_star - eps;
    double hi = 1.0 - 1e-15;
    if (f(hi) < target)
        throw InfeasibleError("no constant rate below capacity reaches the regret target");
    if (f(0.0) >= target) {
        Policy p = build_static_policy(0.0, f.lambda_max());
        p.params["eps"] = eps;
        return p;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) >= target) hi = mid;
        else lo = mid;
    }
    Policy p = build_static_policy(hi, f.lambda_max());
    p.params["eps"] = eps;
    return p;
}

namespace {

// Flat-capped greedy fill: pi_i = cap for i <= B with (B+1)cap <= 1 < (B+2)cap,
// remainder on state B+1.
LowerBoundResult flat_fill(double cap, BoundRegime regime, double closed_form) {
    LowerBoundResult r;
    r.regime = regime;
    r.closed_form = closed_form;
    if (cap >= 1.0) {
        r.witness = {1.0};
        r.q_lower = 0.0;
        return r;
    }
    int B = static_cast<int>(std::ceil(1.0 / cap)) - 2;
    while ((B + 2) * cap < 1.0) ++B;
    while (B > 0 && (B + 1) * cap > 1.0) --B;
    double rem = 1.0 - (B + 1) * cap;
    r.witness.assign(B + 2, cap);
    r.witness[B + 1] = rem;
    long double q = 0.0L;
    for (size_t i = 0; i < r.witness.size(); ++i) q += static_cast<long double>(i) * r.witness[i];
    r.q_lower = static_cast<double>(q);
    return r;
}

}  // namespace

LowerBoundResult lower_bound_concave(double f_second_at_1, double eps) {
    if (!(f_second_at_1 < 0.0))
        throw DomainError("concave-regime bound needs F''(1) < 0");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    double cap = std::sqrt(2.0 * eps / -f_second_at_1);
    return flat_fill(cap, BoundRegime::ConcaveLike, std::sqrt(-f_second_at_1 / (8.0 * eps)));
}

LowerBoundResult lower_bound_two_point(const FluidSolution& sol, const RewardFunction& f,
                                       double lambda_max, double eps) {
    if (sol.structure != SupportStructure::TwoPoint)
        throw StructureError("two-point regime bound needs a two-point solution");
    if (!(lambda_max > 1.0)) throw DomainError("two-point regime needs lambda_max > 1");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    double df = f(sol.x1) - f(sol.x2);
    if (!(df > 0.0)) throw DomainError("support values must satisfy F(x1) > F(x2)");
    double cap0 = eps * (sol.x1 - sol.x2) / df;
    LowerBoundResult r;
    r.regime = BoundRegime::NonConcaveLike;
    r.closed_form = std::log(1.0 / eps) / std::log(lambda_max);
    if (cap0 >= 1.0) {
        r.witness = {1.0};
        r.q_lower = 0.0;
        return r;
    }
    // geometric fill: pi_i = cap0 * lambda_max^i while the running mass allows
    std::vector<double> w;
    long double mass = 0.0L;
    long double next = cap0;
    while (mass + next <= 1.0L) {
        w.push_back(static_cast<double>(next));
        mass += next;
        next *= lambda_max;
    }
    w.push_back(static_cast<double>(1.0L - mass));
    r.witness = std::move(w);
    long double q = 0.0L;
    for (size_t i = 0; i < r.witness.size(); ++i) q += static_cast<long double>(i) * r.witness[i];
    r.q_lower = static_cast<double>(q);
    return r;
}

LowerBoundResult lower_bound_small_market(double slope_k, double eps) {
    if (!(slope_k > 0.0)) throw DomainError("small-market bound needs a positive slope");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    return flat_fill(eps / slope_k, BoundRegime::SmallMarket, slope_k / (2.0 * eps));
}

double two_arrival_queue_floor(const Policy& p) {
    if (p.family != FamilyKind::TwoArrival)
        throw ConsistencyError("queue floor applies to two-arrival policies");
    double tau = p.params.at("tau");
    double k2 = p.params.at("k2");
    return 0.25 * (tau + 1.0 / k2);
}

}  // namespace mq1
