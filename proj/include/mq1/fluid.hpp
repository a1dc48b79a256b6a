#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mq1/reward.hpp"

namespace mq1 {

enum class SupportStructure { Degenerate, TwoPoint };

enum class ConcaveLikeVerdict { Yes, No, Ambiguous };

// Optimal value and support of max E[F(X)] over distributions on
// [0, lambda_max] with mean at most one.
struct FluidSolution {
    double f_star = 0.0;
    SupportStructure structure = SupportStructure::Degenerate;
    // TwoPoint support: x2 < 1 < x1, weight p on x1 with p*x1 + (1-p)*x2 = 1.
    double x1 = 1.0;
    double x2 = 1.0;
    double p = 1.0;
    ConcaveLikeVerdict concave_like = ConcaveLikeVerdict::Yes;
    double margin = 0.0;  // best two-point value minus F(1)
    std::vector<std::string> warnings;

    static FluidSolution two_point(const RewardFunction& f, double x1, double x2);
};

// Tie-break control for the rewards where the two-point and degenerate
// optima coincide to within tolerance (linear F and friends).
enum class BenchmarkBranch { Auto, ForceTwoPoint, ForceDegenerate };

// Grid search (>= 512 points per side) plus local refinement until the
// per-round improvement drops below tol. Degenerate/TwoPoint/Ambiguous
// classification compares the best mean-one pair value against F(1).
FluidSolution fluid_benchmark(const RewardFunction& f, double tol = 1e-9,
                              BenchmarkBranch branch = BenchmarkBranch::Auto);

// max over grid of F(x) - chord(x) where the chord joins the solution's
// support points. Nonpositive (to tolerance) certifies chord majorization.
double chord_majorization_check(const RewardFunction& f, const FluidSolution& sol, int grid_n);

// max over grid of F(x) - [F'(1)(x-1) + F(1)].
double tangent_majorization_check(const RewardFunction& f, int grid_n);

struct QuadraticMajorant {
    double alpha = 0.0;  // negative curvature of the majorant
    double check = 0.0;  // min over grid of G(x) - F(x); >= -tol when valid
};

// Builds G(x) = F(1) + F'(1)(x-1) + (alpha/2)(x-1)^2 with alpha = alpha0/2,
// alpha0 the critical curvature max_x -2 (T(x)-F(x))/(x-1)^2 (window |x-1| <
// 1e-3 replaced by the Taylor limit F''(1)). Requires F strictly below its
// capacity tangent away from 1.
QuadraticMajorant quadratic_majorant(const RewardFunction& f, int grid_n);

// Lagrangian dual value q(U) = min over x of (-F(x) + U x - U), grid plus one
// ternary refinement pass around the grid minimizer.
double dual_value(const RewardFunction& f, double u, int grid_n);

struct DualCertificate {
    double u_star = 0.0;
    double l_margin = 0.0;      // cone slope min(x1-1, 1-x2)
    double grid_violation = 0.0;
    double duality_gap = 0.0;   // |q(U*) + F*|
};

// Checks q(U*) = -F* and the cone inequality q(U*) >= q(U) + L|U*-U| over the
// given multiplier grid. Requires a TwoPoint solution.
DualCertificate polyhedral_check(const RewardFunction& f, const FluidSolution& sol,
                                 const std::vector<double>& u_grid, int grid_n = 4096);

}  // namespace mq1
