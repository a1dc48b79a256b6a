#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mq1/chain.hpp"
#include "mq1/factory.hpp"
#include "mq1/fluid.hpp"
#include "mq1/sim.hpp"

namespace mq1 {

enum class PointSource { Exact, Simulated, Skipped };

struct TradeoffPoint {
    std::string family;
    double eps_tuning = 0.0;
    std::map<std::string, double> params;
    double expected_queue = 0.0;
    double reward = 0.0;
    double regret = 0.0;
    double regret_ratio = 0.0;
    PointSource source = PointSource::Exact;
    std::string note;  // skip reason; empty for evaluated points

    bool operator==(const TradeoffPoint&) const = default;
};

struct FamilySpec {
    std::string name;  // two_arrival | fully_dynamic | two_support_threshold |
                       // throughput_threshold | static_near_capacity
    std::map<std::string, double> options;  // e.g. k for fully_dynamic, lambda_max override
};

struct SimulationSettings {
    double horizon = 1e5;
    int replications = 20;
    double warmup_fraction = 0.2;
};

struct SweepConfig {
    RewardFunction reward = RewardFunction::linear(1.0, 2.0);
    std::vector<double> eps_grid;
    std::vector<FamilySpec> families;
    bool simulated = false;
    std::uint64_t seed = 0;
    SimulationSettings sim;
    double benchmark_tol = 1e-9;
    BenchmarkBranch branch = BenchmarkBranch::Auto;
};

// Parses the JSON config document; throws ConfigError with location context.
SweepConfig load_config(const std::string& path);
SweepConfig parse_config(const std::string& text, const std::string& origin = "<config>");

// Builds one policy of the named family at tuning eps.
Policy construct_family(const FamilySpec& fam, double eps, const RewardFunction& f,
                        const FluidSolution& sol);

// One row per (family, eps). Construction or evaluation failures become
// Skipped rows carrying the reason; nothing is dropped.
std::vector<TradeoffPoint> sweep(const SweepConfig& config);

enum class FitModel { PowerLaw, Logarithmic };

struct ScalingFit {
    FitModel model = FitModel::PowerLaw;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

// Least squares against the realized regret (PowerLaw: log E[q] on log 1/R;
// Logarithmic: E[q] on log 1/R). Needs >= 4 evaluated points of one family.
ScalingFit fit_scaling(const std::vector<TradeoffPoint>& points, FitModel model);

struct PricingLoss {
    double eps_choice = 0.0;
    double loss_bound = 0.0;
    double cross_check = 0.0;  // n*eps + 4hC/sqrt(eps) at the chosen eps
};

// Revenue-loss translation: eps = (4hC/n)^(2/3), bound 2(4hC)^(2/3) n^(1/3).
PricingLoss pricing_loss(double h, double n, double c_bound);

// CSV with the fixed header
//   family,eps,param_json,expected_queue,reward,regret,regret_ratio,source
// and 17-significant-digit numbers; parse() inverts emit() exactly for
// finite values.
void emit_csv(const std::vector<TradeoffPoint>& points, const std::string& path);
std::string render_csv(const std::vector<TradeoffPoint>& points);
std::vector<TradeoffPoint> parse_csv_text(const std::string& text);
std::vector<TradeoffPoint> parse_csv(const std::string& path);

// Family plus the option that distinguishes curve variants in one chart
// (exponent k, market size lambda_max).
std::string variant_label(const TradeoffPoint& p);

struct SvgAxes {
    std::string title;
    bool log_y = false;
};

// Line chart, one series per family: x = regret ratio, y = E[q].
void emit_svg(const std::vector<TradeoffPoint>& points, const std::string& path,
              const SvgAxes& axes);

}  // namespace mq1
