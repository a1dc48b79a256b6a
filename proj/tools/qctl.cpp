// qctl: command-line front end for the queue-control toolkit.
//
//   qctl benchmark --config cfg.json
//   qctl eval      --config cfg.json --eps 0.01
//   qctl sweep     --config cfg.json --out results [--exact|--simulate] [--eps ...] [--seed N]
//   qctl simulate  --config cfg.json --eps 0.01 [--seed N]
//   qctl bounds    --config cfg.json --eps 0.01
//   qctl fit       --csv results/sweep.csv --model powerlaw [--family name] [--eps-max 0.01]
//   qctl pricing   --hcost 1 --n 64 --cbound 1

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mq1/experiments.hpp"

namespace {

using namespace mq1;

const char* verdict_name(ConcaveLikeVerdict v) {
    switch (v) {
        case ConcaveLikeVerdict::Yes: return "yes";
        case ConcaveLikeVerdict::No: return "no";
        case ConcaveLikeVerdict::Ambiguous: return "ambiguous";
    }
    return "?";
}

void print_point(const TradeoffPoint& p) {
    if (p.source == PointSource::Skipped) {
        std::printf("%-24s eps=%-10g skipped: %s\n", p.family.c_str(), p.eps_tuning,
                    p.note.c_str());
        return;
    }
    std::printf("%-24s eps=%-10g E[q]=%-12.6g reward=%-12.8g regret=%-12.6g ratio=%-10.6g %s\n",
                p.family.c_str(), p.eps_tuning, p.expected_queue, p.reward, p.regret,
                p.regret_ratio, p.source == PointSource::Exact ? "exact" : "simulated");
}

int run_benchmark(const SweepConfig& cfg) {
    auto sol = fluid_benchmark(cfg.reward, cfg.benchmark_tol, cfg.branch);
    std::printf("reward: %s\n", cfg.reward.describe().c_str());
    std::printf("F* = %.12g\n", sol.f_star);
    std::printf("concave-like: %s (margin %.3g)\n", verdict_name(sol.concave_like), sol.margin);
    if (sol.structure == SupportStructure::TwoPoint) {
        std::printf("support: x1=%.12g x2=%.12g p=%.12g\n", sol.x1, sol.x2, sol.p);
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i) grid.push_back(4.0 * i / 400);
        auto cert = polyhedral_check(cfg.reward, sol, grid);
        std::printf("dual: U*=%.12g L=%.12g violation=%.3g gap=%.3g\n", cert.u_star,
                    cert.l_margin, cert.grid_violation, cert.duality_gap);
    } else {
        std::printf("support: degenerate at capacity\n");
        try {
            auto qm = quadratic_majorant(cfg.reward, 4096);
            std::printf("quadratic majorant: alpha=%.12g check=%.3g\n", qm.alpha, qm.check);
        } catch (const Error& e) {
            std::printf("quadratic majorant: unavailable (%s)\n", e.what());
        }
    }
    for (const auto& w : sol.warnings) std::printf("warning: %s\n", w.c_str());
    return 0;
}

int run_eval(SweepConfig cfg, double eps) {
    cfg.eps_grid = {eps};
    cfg.simulated = false;
    for (const auto& p : sweep(cfg)) print_point(p);
    return 0;
}

int run_sweep(SweepConfig cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto points = sweep(cfg);
    std::string csv = out_dir + "/sweep.csv";
    std::string svg = out_dir + "/sweep.svg";
    emit_csv(points, csv);
    emit_svg(points, svg, {cfg.reward.describe(), true});
    int skipped = 0;
    for (const auto& p : points)
        if (p.source == PointSource::Skipped) ++skipped;
    std::printf("wrote %zu points (%d skipped) to %s and %s\n", points.size(), skipped,
                csv.c_str(), svg.c_str());
    return 0;
}

int run_simulate(const SweepConfig& cfg, double eps) {
    auto sol = fluid_benchmark(cfg.reward, cfg.benchmark_tol, cfg.branch);
    for (const auto& fam : cfg.families) {
        try {
            Policy p = construct_family(fam, eps, cfg.reward, sol);
            auto est = simulate(p, cfg.reward, cfg.sim.horizon, cfg.sim.warmup_fraction,
                                cfg.sim.replications, cfg.seed);
            auto exact = evaluate_policy(p, cfg.reward, sol.f_star);
            std::printf("%-24s E[q]=%.5g (se %.3g, exact %.5g)  reward=%.6g (se %.3g, exact "
                        "%.6g)%s\n",
                        fam.name.c_str(), est.mean_queue, est.se_queue, exact.expected_queue,
                        est.mean_reward, est.se_reward, exact.reward,
                        est.absorbed ? "  [absorbed at 0]" : "");
        } catch (const Error& e) {
            std::printf("%-24s skipped: %s\n", fam.name.c_str(), e.what());
        }
    }
    return 0;
}

int run_bounds(const SweepConfig& cfg, double eps) {
    auto sol = fluid_benchmark(cfg.reward, cfg.benchmark_tol, cfg.branch);
    std::printf("F* = %.12g, verdict %s\n", sol.f_star, verdict_name(sol.concave_like));
    try {
        double d2 = cfg.reward.derivative(1.0, 2);
        if (d2 < 0.0) {
            auto lb = lower_bound_concave(d2, eps);
            std::printf("concave regime:    q_lower=%.6g (closed form %.6g)\n", lb.q_lower,
                        lb.closed_form);
        }
    } catch (const Error&) {
    }
    if (sol.structure == SupportStructure::TwoPoint) {
        auto lb = lower_bound_two_point(sol, cfg.reward, cfg.reward.lambda_max(), eps);
        std::printf("two-point regime:  q_lower=%.6g (closed form %.6g)\n", lb.q_lower,
                    lb.closed_form);
    }
    try {
        double k = cfg.reward.derivative(1.0, 1);
        if (k > 0.0) {
            auto lb = lower_bound_small_market(k, eps);
            std::printf("small market (k=F'(1)=%.4g): q_lower=%.6g (closed form %.6g)\n", k,
                        lb.q_lower, lb.closed_form);
        }
    } catch (const Error&) {
    }
    return 0;
}

int run_fit(const std::string& csv_path, const std::string& model_name,
            const std::string& family, double eps_max) {
    auto all = parse_csv(csv_path);
    FitModel model = model_name == "log" ? FitModel::Logarithmic : FitModel::PowerLaw;
    std::map<std::string, std::vector<TradeoffPoint>> by_variant;
    for (const auto& p : all) {
        if (!family.empty() && p.family != family) continue;
        by_variant[variant_label(p)].push_back(p);
    }
    if (by_variant.empty()) throw FitError("no matching rows in " + csv_path);
    for (auto& [name, pts] : by_variant) {
        std::vector<TradeoffPoint> window;
        for (const auto& p : pts)
            if (p.eps_tuning <= eps_max) window.push_back(p);
        auto report = [&](const char* tag, const std::vector<TradeoffPoint>& v) {
            try {
                auto fit = fit_scaling(v, model);
                std::printf("%-24s %-12s slope=%.5g intercept=%.5g r2=%.6g (%d pts)\n",
                            name.c_str(), tag, fit.slope, fit.intercept, fit.r_squared,
                            fit.points);
            } catch (const Error& e) {
                std::printf("%-24s %-12s fit unavailable: %s\n", name.c_str(), tag, e.what());
            }
        };
        report("window", window);
        report("full-grid", pts);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"efficiency-reward trade-off toolkit for state-dependent arrival queues"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", csv_path, model = "powerlaw", family;
    double eps = 0.01, eps_max = 0.01, h = 0.0, n = 0.0, cbound = 0.0;
    std::uint64_t seed = 0;
    bool has_seed = false, force_exact = false, force_sim = false;
    std::vector<double> eps_list;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON config file");
        if (need_config) opt->required();
        sub->add_option("--seed", seed, "simulation seed")->each([&](const std::string&) {
            has_seed = true;
        });
    };

    auto* cmd_bench = app.add_subcommand("benchmark", "fluid benchmark and certificates");
    add_common(cmd_bench, true);

    auto* cmd_eval = app.add_subcommand("eval", "exact metrics for the configured families");
    add_common(cmd_eval, true);
    cmd_eval->add_option("--eps", eps, "tuning parameter")->required();

    auto* cmd_sweep = app.add_subcommand("sweep", "trade-off sweep to CSV and SVG");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--out", out_dir, "output directory");
    cmd_sweep->add_flag("--exact", force_exact, "force exact evaluation");
    cmd_sweep->add_flag("--simulate", force_sim, "force simulated evaluation");
    cmd_sweep->add_option("--eps", eps_list, "override the tuning grid");

    auto* cmd_sim = app.add_subcommand("simulate", "simulation cross-check at one eps");
    add_common(cmd_sim, true);
    cmd_sim->add_option("--eps", eps, "tuning parameter")->required();

    auto* cmd_bounds = app.add_subcommand("bounds", "lower-bound oracles at one eps");
    add_common(cmd_bounds, true);
    cmd_bounds->add_option("--eps", eps, "regret budget")->required();

    auto* cmd_fit = app.add_subcommand("fit", "scaling fits from a sweep CSV");
    cmd_fit->add_option("--csv", csv_path, "sweep CSV")->required();
    cmd_fit->add_option("--model", model, "powerlaw | log");
    cmd_fit->add_option("--family", family, "restrict to one family");
    cmd_fit->add_option("--eps-max", eps_max, "fit window upper bound");

    auto* cmd_price = app.add_subcommand("pricing", "revenue-loss translation");
    cmd_price->add_option("--hcost", h, "waiting cost")->required();
    cmd_price->add_option("--n", n, "market scale")->required();
    cmd_price->add_option("--cbound", cbound, "queue-length constant C")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_bench->parsed() || cmd_eval->parsed() || cmd_sweep->parsed() ||
            cmd_sim->parsed() || cmd_bounds->parsed()) {
            SweepConfig cfg = load_config(config_path);
            if (has_seed) cfg.seed = seed;
            if (cmd_bench->parsed()) return run_benchmark(cfg);
            if (cmd_eval->parsed()) return run_eval(cfg, eps);
            if (cmd_sweep->parsed()) {
                if (force_exact && force_sim)
                    throw ConfigError("--exact and --simulate are mutually exclusive");
                if (force_exact) cfg.simulated = false;
                if (force_sim) cfg.simulated = true;
                if (!eps_list.empty()) cfg.eps_grid = eps_list;
                return run_sweep(cfg, out_dir);
            }
            if (cmd_sim->parsed()) return run_simulate(cfg, eps);
            return run_bounds(cfg, eps);
        }
        if (cmd_fit->parsed()) return run_fit(csv_path, model, family, eps_max);
        auto loss = pricing_loss(h, n, cbound);
        std::printf("eps = %.12g\nloss bound = %.12g\ncross-check n*eps + 4hC/sqrt(eps) = "
                    "%.12g\n",
                    loss.eps_choice, loss.loss_bound, loss.cross_check);
        return 0;
    } catch (const mq1::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 2;
    }
}
