#include "mq1/sim.hpp"

#include <cmath>
#include <future>
#include <vector>

#include "mq1/chain.hpp"

namespace mq1 {

namespace {

struct Splitmix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in (0, 1]
    double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
};

std::uint64_t replication_seed(std::uint64_t seed, int rep) {
    Splitmix64 g{seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep + 1)};
    return g.next();
}

struct RepResult {
    double q_bar;
    double r_bar;
};

RepResult run_replication(const Policy& p, const RewardFunction& f, double horizon,
                          double warmup, std::uint64_t rep_seed) {
    Splitmix64 rng{rep_seed};
    double t = 0.0;
    int q = 0;
    double acc_q = 0.0, acc_r = 0.0;
    while (t < horizon) {
        double lam = p.rate(q);
        double total = lam + (q > 0 ? 1.0 : 0.0);
        double t_next;
        if (total <= 0.0) {
            t_next = horizon;  // absorbed; q stays put for the rest of the run
        } else {
            t_next = t + rng.exponential(total);
        }
        double a = std::max(t, warmup);
        double b = std::min(t_next, horizon);
        if (b > a) {
            acc_q += (b - a) * q;
            acc_r += (b - a) * f(lam);
        }
        if (t_next >= horizon) break;
        t = t_next;
        if (total > 0.0) {
            bool up = rng.uniform() <= lam / total;
            q += up ? 1 : -1;
            if (q < 0) q = 0;  // unreachable given the transition probabilities
        }
    }
    double window = horizon - warmup;
    return {acc_q / window, acc_r / window};
}

}  // namespace

SimulationEstimate simulate(const Policy& p, const RewardFunction& f, double horizon,
                            double warmup_fraction, int replications, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0)
        throw DomainError("warmup fraction must lie in [0, 1)");
    if (replications < 1) throw DomainError("need at least one replication");

    SimulationEstimate est;
    est.replications = replications;
    est.horizon = horizon;
    est.warmup_fraction = warmup_fraction;
    est.seed = seed;

    if (p.rate(0) == 0.0) {
        // Absorbed at the empty state: the long-run averages are deterministic.
        est.absorbed = true;
        est.mean_queue = 0.0;
        est.mean_reward = f(0.0);
        return est;
    }

    // Refuse unstable inputs up front rather than timing out in the event loop.
    stationary_distribution(p, 1e-9);

    double warmup = warmup_fraction * horizon;
    std::vector<std::future<RepResult>> futs;
    futs.reserve(replications);
    for (int r = 0; r < replications; ++r) {
        std::uint64_t s = replication_seed(seed, r);
        futs.push_back(std::async(std::launch::async, [&, s] {
            return run_replication(p, f, horizon, warmup, s);
        }));
    }
    std::vector<RepResult> results;
    results.reserve(replications);
    for (auto& fu : futs) results.push_back(fu.get());

    // merge in replication order
    double mq = 0.0, mr = 0.0;
    for (const auto& r : results) {
        mq += r.q_bar;
        mr += r.r_bar;
    }
    mq /= replications;
    mr /= replications;
    est.mean_queue = mq;
    est.mean_reward = mr;
    if (replications >= 2) {
        double vq = 0.0, vr = 0.0;
        for (const auto& r : results) {
            vq += (r.q_bar - mq) * (r.q_bar - mq);
            vr += (r.r_bar - mr) * (r.r_bar - mr);
        }
        vq /= (replications - 1);
        vr /= (replications - 1);
        est.se_queue = std::sqrt(vq / replications);
        est.se_reward = std::sqrt(vr / replications);
    }
    return est;
}

}  // namespace mq1
