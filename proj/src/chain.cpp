#include "mq1/chain.hpp"

#include <cmath>

namespace mq1 {

namespace {

constexpr int kProbeWindow = 64;     // consecutive states needed to certify a general tail
constexpr int kMaxTruncation = 1 << 21;

// Geometric moments beyond index s with pi_s = head: sum_{q>s} pi_q and
// sum_{q>s} q pi_q for ratio rho < 1.
struct TailMoments {
    double mass = 0.0;
    double first = 0.0;
};

TailMoments geometric_tail(double head, double rho, int s) {
    if (rho <= 0.0) return {};
    double g = rho / (1.0 - rho);
    TailMoments t;
    t.mass = head * g;
    t.first = head * (s * g + rho / ((1.0 - rho) * (1.0 - rho)));
    return t;
}

}  // namespace

double StationaryDistribution::total_mass() const {
    long double m = 0.0L;
    for (double p : probabilities) m += p;
    if (tail) {
        auto t = geometric_tail(probabilities.back(), tail->ratio, tail->start);
        m += t.mass;
    }
    return static_cast<double>(m);
}

double StationaryDistribution::expected_queue() const {
    long double e = 0.0L;
    for (size_t q = 0; q < probabilities.size(); ++q) e += static_cast<long double>(q) * probabilities[q];
    if (tail) {
        auto t = geometric_tail(probabilities.back(), tail->ratio, tail->start);
        e += t.first;
    }
    return static_cast<double>(e);
}

StationaryDistribution stationary_distribution(const Policy& p, double tol) {
    StationaryDistribution d;

    // Absorbed-at-zero degenerate chain.
    if (p.rate(0) == 0.0) {
        d.probabilities = {1.0};
        return d;
    }

    int stored_end = 0;  // weights kept for q = 0..stored_end
    std::optional<StationaryDistribution::GeometricTail> tail;
    double tail_weight_bound = 0.0;

    std::vector<long double> w;
    auto extend_to = [&](int q_end) {
        while (static_cast<int>(w.size()) <= q_end) {
            if (w.empty()) {
                w.push_back(1.0L);
                continue;
            }
            int q = static_cast<int>(w.size()) - 1;
            w.push_back(w.back() * static_cast<long double>(p.rate(q)));
        }
    };

    switch (p.tail.kind) {
        case TailKind::FiniteCutoff: {
            // First zero rate closes the communicating class.
            int q0 = 0;
            while (p.rate(q0) > 0.0) ++q0;
            stored_end = q0;
            extend_to(stored_end);
            break;
        }
        case TailKind::EventuallyConstant: {
            double rho = p.tail.ratio;
            if (rho >= 1.0) throw StabilityError("constant tail rate >= 1");
            int s = std::max(p.tail.from, static_cast<int>(p.table.size()));
            // A zero inside the prefix still truncates the class.
            int q0 = -1;
            for (int q = 0; q < s; ++q)
                if (p.rate(q) == 0.0) {
                    q0 = q;
                    break;
                }
            if (q0 >= 0) {
                stored_end = q0;
                extend_to(stored_end);
            } else if (rho == 0.0) {
                stored_end = s;
                extend_to(stored_end);
            } else {
                stored_end = s;
                extend_to(stored_end);
                tail = {rho, stored_end};
            }
            break;
        }
        case TailKind::General: {
            // Grow the truncation until a probe window certifies a geometric
            // tail bound (on mass and first moment) below tol.
            extend_to(kProbeWindow);
            int q_end = static_cast<int>(p.table.size());
            bool certified = false;
            while (q_end < kMaxTruncation) {
                extend_to(q_end + kProbeWindow);
                double sup = 0.0;
                bool zero = false;
                for (int q = q_end + 1; q <= q_end + kProbeWindow; ++q) {
                    double r = p.rate(q);
                    if (r < 0.0 || r > p.lambda_max + 1e-12)
                        throw DomainError("extension rate outside [0, lambda_max] at state " +
                                          std::to_string(q));
                    if (r == 0.0) zero = true;
                    sup = std::max(sup, r);
                }
                if (zero) {
                    int q0 = 0;
                    while (p.rate(q0) > 0.0) ++q0;
                    stored_end = q0;
                    extend_to(stored_end);
                    certified = true;
                    break;
                }
                if (sup < 1.0) {
                    double wq = static_cast<double>(w[q_end]);
                    double bound = wq * sup / (1.0 - sup);
                    double bound_first = bound * (q_end + 1.0 / (1.0 - sup));
                    if (bound < tol && bound_first < tol * std::max(1.0, static_cast<double>(q_end))) {
                        stored_end = q_end;
                        tail_weight_bound = bound;
                        certified = true;
                        break;
                    }
                }
                if (w[q_end] > 1e30)
                    throw StabilityError("detailed-balance weights diverge; policy unstable");
                q_end += kProbeWindow;
            }
            if (!certified)
                throw StabilityError("no geometric tail certificate within the truncation budget");
            break;
        }
    }

    long double z = 0.0L;
    for (int q = 0; q <= stored_end; ++q) z += w[q];
    if (!(z > 0.0L) || !std::isfinite(static_cast<double>(z)))
        throw StabilityError("stationary weights do not normalize");
    if (tail) {
        long double rho = tail->ratio;
        z += w[stored_end] * rho / (1.0L - rho);
    }

    d.probabilities.resize(stored_end + 1);
    for (int q = 0; q <= stored_end; ++q)
        d.probabilities[q] = static_cast<double>(w[q] / z);
    d.tail = tail;
    d.tail_mass_bound = static_cast<double>(tail_weight_bound / static_cast<double>(z));
    return d;
}

PolicyMetrics metrics(const Policy& p, const StationaryDistribution& d, const RewardFunction& f,
                      double f_star) {
    if (d.probabilities.empty()) throw ConsistencyError("empty distribution");
    const int Q = static_cast<int>(d.probabilities.size()) - 1;

    // The distribution must satisfy this policy's detailed balance.
    for (int q = 0; q < Q; ++q) {
        double lhs = d.probabilities[q + 1];
        double rhs = p.rate(q) * d.probabilities[q];
        if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
            throw ConsistencyError("distribution does not match the policy at state " +
                                   std::to_string(q));
    }
    if (d.tail && std::abs(p.rate(Q) - d.tail->ratio) > 1e-12)
        throw ConsistencyError("tail ratio does not match the policy");

    PolicyMetrics m;
    long double eq = 0.0L, rew = 0.0L, thr = 0.0L;
    for (int q = 0; q <= Q; ++q) {
        long double pi = d.probabilities[q];
        double lam = p.rate(q);
        eq += q * pi;
        rew += static_cast<long double>(f(lam)) * pi;
        thr += static_cast<long double>(lam) * pi;
    }
    if (d.tail) {
        double rho = d.tail->ratio;
        double head = d.probabilities[Q];
        long double g = rho / (1.0 - rho);
        eq += head * (Q * g + rho / ((1.0 - rho) * (1.0 - rho)));
        rew += static_cast<long double>(f(rho)) * head * g;
        thr += static_cast<long double>(rho) * head * g;
    }
    m.expected_queue = static_cast<double>(eq);
    m.reward = static_cast<double>(rew);
    m.throughput = static_cast<double>(thr);
    m.idle = d.pi0();
    m.regret = f_star - m.reward;
    m.truncation_level = Q;
    return m;
}

PolicyMetrics evaluate_policy(const Policy& p, const RewardFunction& f, double f_star,
                              double tol) {
    auto d = stationary_distribution(p, tol);
    return metrics(p, d, f, f_star);
}

}  // namespace mq1
