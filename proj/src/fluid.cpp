#include "mq1/fluid.hpp"

#include <algorithm>
#include <cmath>

namespace mq1 {

namespace {

constexpr double kEdge = 1e-12;       // keep pairs strictly on their side of 1
constexpr double kCollapse = 2e-2;    // pair this close to (1,1) counts as the Dirac
constexpr double kMajorantWindow = 1e-3;

double pair_value(const RewardFunction& f, double x1, double x2) {
    double p = (1.0 - x2) / (x1 - x2);
    return p * f(x1) + (1.0 - p) * f(x2);
}

struct PairBest {
    double x1 = 0.0, x2 = 0.0, value = -1e308;
};

// Scan the mean-one two-point mixtures on an n-per-side grid. Keeps the first
// maximizer encountered so exact ties (linear F) stay away from the diagonal.
PairBest scan_pairs(const RewardFunction& f, int n) {
    const double lmax = f.lambda_max();
    PairBest best;
    for (int i = 1; i <= n; ++i) {
        double x1 = 1.0 + (lmax - 1.0) * i / n;
        double f1 = f(x1);
        for (int j = 0; j < n; ++j) {
            double x2 = static_cast<double>(j) / n;
            double p = (1.0 - x2) / (x1 - x2);
            double v = p * f1 + (1.0 - p) * f(x2);
            if (!std::isfinite(v)) throw EvaluationError("non-finite mixture value");
            if (v > best.value) best = {x1, x2, v};
        }
    }
    return best;
}

// Local box refinement around the incumbent pair. A box edge that coincides
// with a domain boundary does not block shrinking; a free edge does, and the
// box recenters there instead. Stops when a full round improves the value by
// less than tol.
PairBest refine_pair(const RewardFunction& f, PairBest best, double w1, double w2, double tol) {
    const double lmax = f.lambda_max();
    const int n = 16;
    int stagnant = 0;
    for (int round = 0; round < 300; ++round) {
        double prev = best.value;
        double lo1 = std::max(1.0 + kEdge, best.x1 - w1);
        double hi1 = std::min(lmax, best.x1 + w1);
        double lo2 = std::max(0.0, best.x2 - w2);
        double hi2 = std::min(1.0 - kEdge, best.x2 + w2);
        PairBest local = best;
        int bi = -1, bj = -1;
        for (int i = 0; i <= n; ++i) {
            double x1 = lo1 + (hi1 - lo1) * i / n;
            for (int j = 0; j <= n; ++j) {
                double x2 = lo2 + (hi2 - lo2) * j / n;
                double v = pair_value(f, x1, x2);
                if (v > local.value) {
                    local = {x1, x2, v};
                    bi = i;
                    bj = j;
                }
            }
        }
        best = local;
        bool free_edge1 = (bi == 0 && lo1 > 1.0 + kEdge) || (bi == n && hi1 < lmax);
        bool free_edge2 = (bj == 0 && lo2 > 0.0) || (bj == n && hi2 < 1.0 - kEdge);
        if (!free_edge1) w1 *= 0.3;
        if (!free_edge2) w2 *= 0.3;
        // Grid alignment can stall a single round before a shrink resolves a
        // kink, so demand several quiet rounds in a row.
        stagnant = best.value - prev < tol ? stagnant + 1 : 0;
        if (stagnant >= 6) break;
        if (w1 < 1e-13 && w2 < 1e-13) break;
    }
    return best;
}

double best_singleton(const RewardFunction& f, int n, double* arg = nullptr) {
    // Dirac measures at c <= 1 are feasible too.
    double bx = 0.0, bv = -1e308;
    for (int j = 0; j <= n; ++j) {
        double x = static_cast<double>(j) / n;
        double v = f(x);
        if (v > bv) {
            bv = v;
            bx = x;
        }
    }
    // one refinement sweep
    double w = 1.0 / n;
    for (int round = 0; round < 60; ++round) {
        double lo = std::max(0.0, bx - w), hi = std::min(1.0, bx + w);
        for (int j = 0; j <= 16; ++j) {
            double x = lo + (hi - lo) * j / 16;
            double v = f(x);
            if (v > bv) {
                bv = v;
                bx = x;
            }
        }
        w *= 0.3;
        if (w < 1e-13) break;
    }
    if (arg) *arg = bx;
    return bv;
}

}  // namespace

FluidSolution FluidSolution::two_point(const RewardFunction& f, double x1, double x2) {
    if (!(x2 < 1.0 && 1.0 < x1 && x1 <= f.lambda_max() && x2 >= 0.0))
        throw StructureError("two-point support must satisfy 0 <= x2 < 1 < x1 <= lambda_max");
    FluidSolution s;
    s.structure = SupportStructure::TwoPoint;
    s.x1 = x1;
    s.x2 = x2;
    s.p = (1.0 - x2) / (x1 - x2);
    s.f_star = s.p * f(x1) + (1.0 - s.p) * f(x2);
    s.concave_like = ConcaveLikeVerdict::No;
    s.margin = s.f_star - f(1.0);
    return s;
}

FluidSolution fluid_benchmark(const RewardFunction& f, double tol, BenchmarkBranch branch) {
    if (f.lambda_max() < 1.0)
        throw UnsupportedDomainError("fluid benchmark needs lambda_max >= 1");
    FluidSolution sol;
    double f1 = f(1.0);

    try {
        if (f.derivative(1.0, 1) <= 0.0)
            sol.warnings.push_back("F'(1) <= 0: reward is not increasing at capacity");
    } catch (const Error& e) {
        sol.warnings.push_back(std::string("capacity slope check skipped: ") + e.what());
    }

    double singleton_arg = 1.0;
    double singleton = best_singleton(f, 1024, &singleton_arg);
    if (singleton > f1 + tol && singleton_arg < 1.0 - 1e-9)
        sol.warnings.push_back("interior Dirac below capacity beats F(1); benchmark reported "
                               "against the full feasible set");

    PairBest best;
    double classify_tol = std::max(tol, 1e-9);
    if (f.lambda_max() == 1.0) {
        // No mass can sit above capacity; the benchmark degenerates.
        sol.f_star = std::max(f1, singleton);
        sol.structure = SupportStructure::Degenerate;
        sol.concave_like = ConcaveLikeVerdict::Yes;
        sol.margin = 0.0;
        return sol;
    }

    const int n = 512;
    best = scan_pairs(f, n);
    best = refine_pair(f, best, (f.lambda_max() - 1.0) / n, 1.0 / n, tol);

    sol.margin = best.value - f1;
    bool collapsed = (best.x1 - 1.0) + (1.0 - best.x2) < kCollapse;

    ConcaveLikeVerdict verdict;
    if (best.value > f1 + classify_tol) verdict = ConcaveLikeVerdict::No;
    else if (collapsed || best.value < f1 - classify_tol) verdict = ConcaveLikeVerdict::Yes;
    else verdict = ConcaveLikeVerdict::Ambiguous;

    // The force knobs only break ties; clear-cut verdicts stand.
    bool take_two_point = verdict == ConcaveLikeVerdict::No;
    if (verdict == ConcaveLikeVerdict::Ambiguous) {
        if (branch == BenchmarkBranch::ForceTwoPoint) take_two_point = true;
        else if (branch == BenchmarkBranch::Auto && f.kind() == RewardKind::Linear)
            take_two_point = true;  // canonical support (lambda_max, 0)
    }

    if (take_two_point) {
        double x1 = best.x1, x2 = best.x2;
        if (verdict == ConcaveLikeVerdict::Ambiguous && f.kind() == RewardKind::Linear) {
            x1 = f.lambda_max();
            x2 = 0.0;
        }
        sol.structure = SupportStructure::TwoPoint;
        sol.x1 = x1;
        sol.x2 = x2;
        sol.p = (1.0 - x2) / (x1 - x2);
        sol.f_star = std::max(sol.p * f(x1) + (1.0 - sol.p) * f(x2), singleton);
        if (f(x1) <= f(x2))
            throw StructureError("two-point optimum with F(x1) <= F(x2); not a valid support");
    } else {
        sol.structure = SupportStructure::Degenerate;
        sol.x1 = sol.x2 = sol.p = 1.0;
        sol.f_star = std::max(f1, singleton);
    }
    sol.concave_like = verdict;
    if (!std::isfinite(sol.f_star)) throw EvaluationError("non-finite benchmark value");
    return sol;
}

double chord_majorization_check(const RewardFunction& f, const FluidSolution& sol, int grid_n) {
    if (sol.structure != SupportStructure::TwoPoint)
        throw StructureError("chord check needs a two-point solution");
    double fx1 = f(sol.x1), fx2 = f(sol.x2);
    double slope = (fx1 - fx2) / (sol.x1 - sol.x2);
    double worst = -1e308;
    for (int i = 0; i <= grid_n; ++i) {
        double x = f.lambda_max() * i / grid_n;
        double chord = fx2 + slope * (x - sol.x2);
        worst = std::max(worst, f(x) - chord);
    }
    return worst;
}

double tangent_majorization_check(const RewardFunction& f, int grid_n) {
    double f1 = f(1.0);
    double d1 = f.derivative(1.0, 1);
    double worst = -1e308;
    for (int i = 0; i <= grid_n; ++i) {
        double x = f.lambda_max() * i / grid_n;
        worst = std::max(worst, f(x) - (f1 + d1 * (x - 1.0)));
    }
    return worst;
}

QuadraticMajorant quadratic_majorant(const RewardFunction& f, int grid_n) {
    double f1 = f(1.0);
    double d1 = f.derivative(1.0, 1);
    double d2 = f.derivative(1.0, 2);
    // critical curvature: the ratio -2(T-F)/(x-1)^2 tends to F''(1) at x=1,
    // so the window around 1 contributes that limit directly
    double alpha0 = d2;
    for (int i = 0; i <= grid_n; ++i) {
        double x = f.lambda_max() * i / grid_n;
        if (std::abs(x - 1.0) < kMajorantWindow) continue;
        double t = f1 + d1 * (x - 1.0);
        double gap = t - f(x);
        if (gap <= 0.0)
            throw InfeasibleError("reward touches its capacity tangent away from 1; "
                                  "no strict quadratic majorant exists");
        alpha0 = std::max(alpha0, -2.0 * gap / ((x - 1.0) * (x - 1.0)));
    }
    if (alpha0 >= 0.0)
        throw InfeasibleError("critical curvature is nonnegative; no concave quadratic "
                              "majorant exists");
    QuadraticMajorant out;
    out.alpha = alpha0 / 2.0;
    double worst = 1e308;
    for (int i = 0; i <= grid_n; ++i) {
        double x = f.lambda_max() * i / grid_n;
        double g = f1 + d1 * (x - 1.0) + 0.5 * out.alpha * (x - 1.0) * (x - 1.0);
        worst = std::min(worst, g - f(x));
    }
    out.check = worst;
    return out;
}

double dual_value(const RewardFunction& f, double u, int grid_n) {
    if (u < 0.0) throw DomainError("dual multiplier must be nonnegative");
    const double lmax = f.lambda_max();
    auto obj = [&](double x) { return -f(x) + u * x - u; };
    double bx = 0.0, bv = obj(0.0);
    for (int i = 1; i <= grid_n; ++i) {
        double x = lmax * i / grid_n;
        double v = obj(x);
        if (v < bv) {
            bv = v;
            bx = x;
        }
    }
    // ternary pass on the bracketing cell pair
    double lo = std::max(0.0, bx - lmax / grid_n);
    double hi = std::min(lmax, bx + lmax / grid_n);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (obj(m1) <= obj(m2)) hi = m2;
        else lo = m1;
    }
    for (double x : {lo, 0.5 * (lo + hi), hi}) bv = std::min(bv, obj(x));
    return bv;
}

DualCertificate polyhedral_check(const RewardFunction& f, const FluidSolution& sol,
                                 const std::vector<double>& u_grid, int grid_n) {
    if (sol.structure != SupportStructure::TwoPoint)
        throw StructureError("polyhedral check needs a two-point solution");
    DualCertificate cert;
    double fx1 = f(sol.x1), fx2 = f(sol.x2);
    cert.u_star = (fx1 - fx2) / (sol.x1 - sol.x2);
    cert.l_margin = std::min(sol.x1 - 1.0, 1.0 - sol.x2);
    double f_star = sol.p * fx1 + (1.0 - sol.p) * fx2;
    double q_star = dual_value(f, cert.u_star, grid_n);
    cert.duality_gap = std::abs(q_star + f_star);
    double worst = 0.0;
    for (double u : u_grid) {
        if (u < 0.0) throw DomainError("multiplier grid must be nonnegative");
        double q = dual_value(f, u, grid_n);
        worst = std::max(worst, q + cert.l_margin * std::abs(cert.u_star - u) - q_star);
    }
    cert.grid_violation = worst;
    return cert;
}

}  // namespace mq1
