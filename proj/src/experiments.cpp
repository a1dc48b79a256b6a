#include "mq1/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

namespace mq1 {

namespace {

using nlohmann::json;

RewardFunction reward_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("reward must be an object with a 'kind' field");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic")
        return RewardFunction::quadratic(j.at("a").get<double>(), j.at("b").get<double>(),
                                         j.value("c", 0.0), j.at("lambda_max").get<double>());
    if (kind == "power")
        return RewardFunction::power(j.at("exponent").get<double>(),
                                     j.at("lambda_max").get<double>());
    if (kind == "linear")
        return RewardFunction::linear(j.at("slope").get<double>(),
                                      j.at("lambda_max").get<double>());
    if (kind == "polynomial")
        return RewardFunction::polynomial(j.at("coefficients").get<std::vector<double>>(),
                                          j.at("lambda_max").get<double>());
    if (kind == "tabulated") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : j.at("points"))
            pts.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return RewardFunction::tabulated(std::move(pts));
    }
    throw ConfigError("unknown reward kind '" + kind + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

const char* source_name(PointSource s) {
    switch (s) {
        case PointSource::Exact: return "Exact";
        case PointSource::Simulated: return "Simulated";
        case PointSource::Skipped: return "Skipped";
    }
    return "Exact";
}

PointSource source_from(const std::string& s) {
    if (s == "Exact") return PointSource::Exact;
    if (s == "Simulated") return PointSource::Simulated;
    if (s == "Skipped") return PointSource::Skipped;
    throw IoError("unknown point source '" + s + "'");
}

constexpr const char* kCsvHeader =
    "family,eps,param_json,expected_queue,reward,regret,regret_ratio,source";

}  // namespace

SweepConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        SweepConfig cfg;
        cfg.reward = reward_from_json(j.at("reward"));
        if (j.contains("eps")) cfg.eps_grid = j.at("eps").get<std::vector<double>>();
        if (j.contains("families"))
            for (const auto& fj : j.at("families")) {
                FamilySpec fam;
                fam.name = fj.at("family").get<std::string>();
                for (auto it = fj.begin(); it != fj.end(); ++it)
                    if (it.key() != "family") fam.options[it.key()] = it.value().get<double>();
                cfg.families.push_back(std::move(fam));
            }
        std::string mode = j.value("mode", std::string("exact"));
        if (mode == "exact") cfg.simulated = false;
        else if (mode == "simulate") cfg.simulated = true;
        else throw ConfigError("mode must be 'exact' or 'simulate'");
        cfg.seed = j.value("seed", 0ULL);
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            cfg.sim.horizon = s.value("horizon", cfg.sim.horizon);
            cfg.sim.replications = s.value("replications", cfg.sim.replications);
            cfg.sim.warmup_fraction = s.value("warmup_fraction", cfg.sim.warmup_fraction);
        }
        cfg.benchmark_tol = j.value("benchmark_tol", 1e-9);
        std::string branch = j.value("force_branch", std::string("auto"));
        if (branch == "auto") cfg.branch = BenchmarkBranch::Auto;
        else if (branch == "two_point") cfg.branch = BenchmarkBranch::ForceTwoPoint;
        else if (branch == "degenerate") cfg.branch = BenchmarkBranch::ForceDegenerate;
        else throw ConfigError("force_branch must be auto, two_point, or degenerate");
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

Policy construct_family(const FamilySpec& fam, double eps, const RewardFunction& f,
                        const FluidSolution& sol) {
    if (fam.name == "two_arrival") return two_arrival_policy(f, eps);
    if (fam.name == "fully_dynamic") {
        double k = fam.options.count("k") ? fam.options.at("k") : 2.0;
        double lmax =
            fam.options.count("lambda_max") ? fam.options.at("lambda_max") : f.lambda_max();
        return fully_dynamic_policy(f, eps, k, lmax);
    }
    if (fam.name == "two_support_threshold") return two_support_threshold_policy(sol, f, eps);
    if (fam.name == "throughput_threshold") {
        double lmax =
            fam.options.count("lambda_max") ? fam.options.at("lambda_max") : f.lambda_max();
        return throughput_threshold_policy(lmax, eps);
    }
    if (fam.name == "static_near_capacity")
        return static_near_capacity_policy(f, sol.f_star, eps);
    throw ConfigError("unknown family '" + fam.name + "'");
}

std::vector<TradeoffPoint> sweep(const SweepConfig& config) {
    const RewardFunction& f = config.reward;
    FluidSolution sol = fluid_benchmark(f, config.benchmark_tol, config.branch);
    double f1 = f(1.0);

    struct Cell {
        const FamilySpec* fam;
        double eps;
    };
    std::vector<Cell> cells;
    for (const auto& fam : config.families)
        for (double eps : config.eps_grid) cells.push_back({&fam, eps});

    auto eval_cell = [&](const Cell& cell) {
        TradeoffPoint pt;
        pt.family = cell.fam->name;
        pt.eps_tuning = cell.eps;
        try {
            Policy p = construct_family(*cell.fam, cell.eps, f, sol);
            pt.params = p.params;
            if (config.simulated) {
                auto est = simulate(p, f, config.sim.horizon, config.sim.warmup_fraction,
                                    config.sim.replications, config.seed);
                pt.expected_queue = est.mean_queue;
                pt.reward = est.mean_reward;
                pt.source = PointSource::Simulated;
            } else {
                auto m = evaluate_policy(p, f, sol.f_star);
                pt.expected_queue = m.expected_queue;
                pt.reward = m.reward;
                pt.source = PointSource::Exact;
            }
            pt.regret = sol.f_star - pt.reward;
            pt.regret_ratio = f1 > 0.0 ? pt.regret / f1 : std::nan("");
        } catch (const Error& e) {
            pt.source = PointSource::Skipped;
            pt.note = e.what();
            pt.expected_queue = pt.reward = pt.regret = pt.regret_ratio = std::nan("");
        }
        return pt;
    };

    std::vector<std::future<TradeoffPoint>> futs;
    futs.reserve(cells.size());
    for (const auto& c : cells)
        futs.push_back(std::async(std::launch::async, [&, c] { return eval_cell(c); }));
    std::vector<TradeoffPoint> out;
    out.reserve(cells.size());
    for (auto& fu : futs) out.push_back(fu.get());
    return out;
}

ScalingFit fit_scaling(const std::vector<TradeoffPoint>& points, FitModel model) {
    std::vector<double> xs, ys;
    std::string family;
    for (const auto& p : points) {
        if (p.source == PointSource::Skipped) continue;
        if (family.empty()) family = p.family;
        else if (family != p.family)
            throw FitError("scaling fit expects points from a single family");
        if (!(p.regret > 0.0) || !std::isfinite(p.expected_queue) || p.expected_queue <= 0.0)
            continue;
        xs.push_back(std::log(1.0 / p.regret));
        ys.push_back(model == FitModel::PowerLaw ? std::log(p.expected_queue)
                                                 : p.expected_queue);
    }
    if (xs.size() < 4) throw FitError("scaling fit needs at least 4 evaluated points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx < 1e-14)
        throw FitError("degenerate abscissa: realized regrets are all identical");
    ScalingFit fit;
    fit.model = model;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - fit.intercept - fit.slope * xs[i];
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.points = static_cast<int>(xs.size());
    return fit;
}

PricingLoss pricing_loss(double h, double n, double c_bound) {
    if (!(h > 0.0)) throw DomainError("waiting cost h must be positive");
    if (!(n >= 1.0)) throw DomainError("market scale n must be at least 1");
    if (!(c_bound > 0.0)) throw DomainError("queue-length constant must be positive");
    PricingLoss out;
    double a = 4.0 * h * c_bound;
    out.eps_choice = std::pow(a / n, 2.0 / 3.0);
    out.loss_bound = 2.0 * std::pow(a, 2.0 / 3.0) * std::cbrt(n);
    out.cross_check = n * out.eps_choice + a / std::sqrt(out.eps_choice);
    return out;
}

std::string render_csv(const std::vector<TradeoffPoint>& points) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& p : points) {
        json pj(p.params);
        if (!p.note.empty()) pj["error"] = p.note;
        out += p.family;
        out += ',';
        out += fmt(p.eps_tuning);
        out += ',';
        out += csv_quote(pj.dump());
        out += ',';
        out += fmt(p.expected_queue);
        out += ',';
        out += fmt(p.reward);
        out += ',';
        out += fmt(p.regret);
        out += ',';
        out += fmt(p.regret_ratio);
        out += ',';
        out += source_name(p.source);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<TradeoffPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << render_csv(points);
    if (!out) throw IoError("short write to '" + path + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::vector<TradeoffPoint> parse_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw IoError("missing or unexpected CSV header");
    std::vector<TradeoffPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 8) throw IoError("malformed CSV row: " + line);
        TradeoffPoint p;
        p.family = f[0];
        p.eps_tuning = std::strtod(f[1].c_str(), nullptr);
        json pj = json::parse(f[2]);
        for (auto it = pj.begin(); it != pj.end(); ++it) {
            if (it.key() == "error") p.note = it.value().get<std::string>();
            else p.params[it.key()] = it.value().get<double>();
        }
        p.expected_queue = std::strtod(f[3].c_str(), nullptr);
        p.reward = std::strtod(f[4].c_str(), nullptr);
        p.regret = std::strtod(f[5].c_str(), nullptr);
        p.regret_ratio = std::strtod(f[6].c_str(), nullptr);
        p.source = source_from(f[7]);
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<TradeoffPoint> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv_text(ss.str());
}

std::string variant_label(const TradeoffPoint& p) {
    std::string label = p.family;
    if (p.family == "fully_dynamic" && p.params.count("k"))
        label += " k=" + fmt(p.params.at("k"));
    if (p.family == "throughput_threshold" && p.params.count("lambda_max"))
        label += " lmax=" + fmt(p.params.at("lambda_max"));
    return label;
}

void emit_svg(const std::vector<TradeoffPoint>& points, const std::string& path,
              const SvgAxes& axes) {
    std::map<std::string, std::vector<const TradeoffPoint*>> series;
    double xmin = 1e308, xmax = -1e308, ymin = 1e308, ymax = -1e308;
    for (const auto& p : points) {
        if (p.source == PointSource::Skipped) continue;
        if (!std::isfinite(p.regret_ratio) || !std::isfinite(p.expected_queue)) continue;
        series[variant_label(p)].push_back(&p);
        xmin = std::min(xmin, p.regret_ratio);
        xmax = std::max(xmax, p.regret_ratio);
        ymin = std::min(ymin, p.expected_queue);
        ymax = std::max(ymax, p.expected_queue);
    }
    const double W = 760, H = 520, ML = 70, MR = 180, MT = 40, MB = 55;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << axes.title << "</text>\n";
    if (!series.empty()) {
        if (xmax <= xmin) xmax = xmin + 1e-9;
        if (axes.log_y) {
            ymin = std::log10(std::max(ymin, 1e-12));
            ymax = std::log10(std::max(ymax, 1e-12));
        }
        if (ymax <= ymin) ymax = ymin + 1e-9;
        auto X = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR); };
        auto Y = [&](double v) {
            if (axes.log_y) v = std::log10(std::max(v, 1e-12));
            return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB);
        };
        svg << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
            << H - MB << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
            << H - MB << "\" stroke=\"black\"/>\n";
        auto tick = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", v);
            return std::string(buf);
        };
        for (int i = 0; i <= 5; ++i) {
            double vx = xmin + (xmax - xmin) * i / 5;
            svg << "<text x=\"" << X(vx) << "\" y=\"" << H - MB + 18
                << "\" text-anchor=\"middle\" font-size=\"11\">" << tick(vx) << "</text>\n";
            double vy = ymin + (ymax - ymin) * i / 5;
            double label = axes.log_y ? std::pow(10.0, vy) : vy;
            svg << "<text x=\"" << ML - 8 << "\" y=\""
                << H - MB - (H - MT - MB) * i / 5.0 + 4
                << "\" text-anchor=\"end\" font-size=\"11\">" << tick(label) << "</text>\n";
        }
        svg << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 14
            << "\" text-anchor=\"middle\" font-size=\"12\">regret ratio</text>\n";
        svg << "<text x=\"18\" y=\"" << (MT + H - MB) / 2
            << "\" font-size=\"12\" transform=\"rotate(-90 18 " << (MT + H - MB) / 2
            << ")\" text-anchor=\"middle\">expected queue length</text>\n";
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf"};
        int ci = 0, li = 0;
        for (auto& [name, pts] : series) {
            std::sort(pts.begin(), pts.end(), [](const TradeoffPoint* a, const TradeoffPoint* b) {
                return a->regret_ratio < b->regret_ratio;
            });
            const char* color = colors[ci++ % 7];
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
                << "points=\"";
            for (const auto* p : pts) svg << X(p->regret_ratio) << "," << Y(p->expected_queue) << " ";
            svg << "\"/>\n";
            for (const auto* p : pts)
                svg << "<circle cx=\"" << X(p->regret_ratio) << "\" cy=\"" << Y(p->expected_queue)
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            svg << "<text x=\"" << W - MR + 12 << "\" y=\"" << MT + 16 * li + 10
                << "\" font-size=\"12\" fill=\"" << color << "\">" << name << "</text>\n";
            ++li;
        }
    }
    svg << "</svg>\n";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << svg.str();
    if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace mq1
