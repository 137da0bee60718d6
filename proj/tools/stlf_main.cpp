// ============================================================================
// stlf — batch front-end for monitoring, covering-array generation,
//        falsification campaigns, and robustness heatmaps
// ============================================================================
//
// Subcommands: monitor, generate-ca, falsify, heatmap, simulate.
// Exit codes: monitor 0 satisfied / 1 falsified / 2 inconclusive;
// falsify 1 when a counterexample was found, 0 otherwise; every command
// uses exit code 3 for configuration, I/O, parse, or validation errors so
// verdicts are never conflated with failures.
//
// All randomness flows from the single --seed value through the SplitMix64
// generator in stlf/rng.hpp, so reruns are byte-identical.  STLF_LOG
// selects the log level (error, warn, info, debug).
//
// ============================================================================

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlf/campaign_io.hpp"
#include "stlf/covering_array.hpp"
#include "stlf/monitor.hpp"
#include "stlf/optimizer.hpp"
#include "stlf/parser.hpp"
#include "stlf/requirements.hpp"
#include "stlf/scenario.hpp"

namespace {

using nlohmann::json;
using namespace stlf;

// ── logging ─────────────────────────────────────────────────────────────────

int log_level() {
    static int level = [] {
        const char* env = std::getenv("STLF_LOG");
        if (!env) return 1;
        std::string v(env);
        if (v == "error") return 0;
        if (v == "warn") return 1;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[stlf] " << msg << "\n";
}

// ── config plumbing ─────────────────────────────────────────────────────────

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

struct ScenarioConfig {
    std::string kind;  // "two_car" | "perception"
    std::map<std::string, double> x0;
    std::map<std::string, double> params;
    std::vector<std::string> sensors = {"ccd"};
    double duration = 10.0;
    double dt = 0.05;
    InputTrace fixed_inputs;
};

ScenarioConfig parse_scenario(const json& j) {
    ScenarioConfig sc;
    sc.kind = j.at("kind").get<std::string>();
    if (sc.kind != "two_car" && sc.kind != "perception")
        throw Error("scenario.kind must be 'two_car' or 'perception'");
    if (j.contains("x0")) sc.x0 = j.at("x0").get<std::map<std::string, double>>();
    if (j.contains("params")) sc.params = j.at("params").get<std::map<std::string, double>>();
    if (j.contains("sensors")) sc.sensors = j.at("sensors").get<std::vector<std::string>>();
    sc.duration = j.at("duration").get<double>();
    if (j.contains("dt")) sc.dt = j.at("dt").get<double>();
    if (j.contains("inputs")) {
        for (const auto& [channel, spec] : j.at("inputs").items()) {
            InputSeries series;
            series.times = spec.at("times").get<std::vector<double>>();
            series.values = spec.at("values").get<std::vector<double>>();
            std::string interp = spec.value("interpolation", "linear");
            series.interpolation = interp == "hold" ? Interp::Hold : Interp::Linear;
            sc.fixed_inputs.channels[channel] = std::move(series);
        }
    }
    return sc;
}

SearchSpace parse_search(const json& j) {
    SearchSpace space;
    if (j.contains("continuous"))
        for (const auto& v : j.at("continuous")) {
            auto range = v.at("range").get<std::vector<double>>();
            if (range.size() != 2) throw Error("search range must be [lo, hi]");
            space.continuous_vars.push_back(
                {v.at("name").get<std::string>(), range[0], range[1]});
        }
    if (j.contains("discrete"))
        for (const auto& v : j.at("discrete"))
            space.discrete_vars.push_back({v.at("name").get<std::string>(),
                                           v.at("levels").get<std::vector<std::string>>()});
    if (j.contains("signals"))
        for (const auto& v : j.at("signals")) {
            auto range = v.at("range").get<std::vector<double>>();
            if (range.size() != 2) throw Error("signal range must be [lo, hi]");
            std::string interp = v.value("interpolation", "linear");
            space.input_signal_vars.push_back({v.at("channel").get<std::string>(),
                                               v.at("control_points").get<int>(), range[0],
                                               range[1],
                                               interp == "hold" ? Interp::Hold
                                                                : Interp::Linear});
        }
    space.validate();
    return space;
}

RequirementParams parse_requirement_params(const json& j) {
    RequirementParams p;
    if (j.contains("eps_dist")) p.eps_dist = j.at("eps_dist").get<double>();
    if (j.contains("eps_err")) p.eps_err = j.at("eps_err").get<double>();
    if (j.contains("t1")) p.t1 = j.at("t1").get<double>();
    if (j.contains("t2")) p.t2 = j.at("t2").get<double>();
    if (j.contains("object_ids")) p.object_ids = j.at("object_ids").get<std::vector<int>>();
    if (j.contains("sensors")) p.sensors = j.at("sensors").get<std::vector<std::string>>();
    return p;
}

// Build the input trace a two-car simulation needs from the fixed inputs
// plus the searched signal/discrete/continuous variables at `pt`.
InputTrace assemble_inputs(const ScenarioConfig& sc, const SearchSpace& space,
                           const SearchPoint& pt) {
    InputTrace u = sc.fixed_inputs;
    std::size_t dim = space.continuous_vars.size();
    for (const auto& sig : space.input_signal_vars) {
        InputSeries series;
        series.interpolation = sig.interpolation;
        int cp = sig.control_points;
        for (int k = 0; k < cp; ++k) {
            double t = cp == 1 ? 0.0
                               : sc.duration * static_cast<double>(k) /
                                     static_cast<double>(cp - 1);
            series.times.push_back(t);
            series.values.push_back(pt.continuous[dim + static_cast<std::size_t>(k)]);
        }
        dim += static_cast<std::size_t>(cp);
        u.channels[sig.channel] = std::move(series);
    }
    for (std::size_t v = 0; v < space.discrete_vars.size(); ++v) {
        const auto& var = space.discrete_vars[v];
        const std::string& level = var.levels[static_cast<std::size_t>(pt.discrete[v])];
        char* end = nullptr;
        double value = std::strtod(level.c_str(), &end);
        if (end == level.c_str() || *end != '\0')
            throw Error("discrete level '" + level + "' of '" + var.name +
                        "' is not numeric");
        u.channels[var.name] = InputSeries{{0.0}, {value}, Interp::Hold};
    }
    // Scalar continuous variables become constant input channels for the
    // two-car scenario (perception maps them onto parameters instead).
    for (std::size_t c = 0; c < space.continuous_vars.size(); ++c)
        u.channels[space.continuous_vars[c].name] =
            InputSeries{{0.0}, {pt.continuous[c]}, Interp::Hold};
    return u;
}

std::map<std::string, double> assemble_params(const ScenarioConfig& sc,
                                              const SearchSpace& space,
                                              const SearchPoint& pt) {
    std::map<std::string, double> params = sc.params;
    for (std::size_t c = 0; c < space.continuous_vars.size(); ++c)
        params[space.continuous_vars[c].name] = pt.continuous[c];
    for (std::size_t v = 0; v < space.discrete_vars.size(); ++v) {
        const auto& var = space.discrete_vars[v];
        const std::string& level = var.levels[static_cast<std::size_t>(pt.discrete[v])];
        char* end = nullptr;
        double value = std::strtod(level.c_str(), &end);
        if (end == level.c_str() || *end != '\0')
            throw Error("discrete level '" + level + "' of '" + var.name +
                        "' is not numeric");
        params[var.name] = value;
    }
    return params;
}

struct Campaign {
    ScenarioConfig scenario;
    SearchSpace space;
    Formula requirement;
    std::function<Trace(const SearchPoint&)> simulate;
    Objective objective;
};

Trace simulate_scenario_at(const ScenarioConfig& sc, const SearchSpace& space,
                           const SearchPoint& pt) {
    if (sc.kind == "two_car") {
        TwoCarState x0;
        auto get = [&](const char* k, double dflt) {
            auto it = sc.x0.find(k);
            return it == sc.x0.end() ? dflt : it->second;
        };
        x0.z_ego = get("z_ego", 0.0);
        x0.v_ego = get("v_ego", 20.0);
        x0.z_agent = get("z_agent", 40.0);
        x0.v_agent = get("v_agent", 20.0);
        return simulate_two_car(x0, assemble_inputs(sc, space, pt), sc.duration, sc.dt);
    }
    auto params = assemble_params(sc, space, pt);
    return simulate_perception_scenario(perception_params_from_map(params, sc.sensors),
                                        sc.duration, sc.dt);
}

Campaign build_campaign(const json& config) {
    Campaign c;
    c.scenario = parse_scenario(config.at("scenario"));
    c.space = config.contains("search") ? parse_search(config.at("search")) : SearchSpace{};

    // Probe simulation: defines the signal space the requirement is parsed
    // against (midpoint / level-0 defaults).
    SearchPoint probe;
    for (const auto& d : c.space.continuous_dims())
        probe.continuous.push_back((d.lo + d.hi) / 2.0);
    probe.discrete.assign(c.space.discrete_vars.size(), 0);
    Trace probe_trace = simulate_scenario_at(c.scenario, c.space, probe);

    const json& req = config.at("requirement");
    if (req.contains("formula")) {
        c.requirement = parse_formula(req.at("formula").get<std::string>(),
                                      probe_trace.space());
    } else if (req.contains("name")) {
        RequirementParams params = req.contains("params")
                                       ? parse_requirement_params(req.at("params"))
                                       : RequirementParams{};
        c.requirement = build_requirement(req.at("name").get<std::string>(), params);
    } else {
        throw Error("requirement needs either 'formula' or 'name'");
    }

    ScenarioConfig sc = c.scenario;
    SearchSpace space = c.space;
    c.simulate = [sc, space](const SearchPoint& pt) {
        return simulate_scenario_at(sc, space, pt);
    };
    Formula req_formula = c.requirement;
    auto simulate = c.simulate;
    c.objective.evaluate = [simulate, req_formula](const SearchPoint& pt) {
        return robustness(req_formula, simulate(pt));
    };
    return c;
}

MixedStrengthSpec parse_ca_spec(const json& j) {
    MixedStrengthSpec spec;
    spec.default_strength = j.at("default_strength").get<int>();
    for (const auto& d : j.at("domains")) {
        std::string name = d.at("name").get<std::string>();
        if (d.contains("levels")) {
            spec.domains.push_back(
                ParameterDomain::discrete(name, d.at("levels").get<std::vector<std::string>>()));
        } else {
            auto range = d.at("range").get<std::vector<double>>();
            if (range.size() != 2) throw Error("domain range must be [lo, hi]");
            spec.domains.push_back(ParameterDomain::continuous(
                name, range[0], range[1], d.at("level_count").get<int>()));
        }
    }
    if (j.contains("strength_groups"))
        for (const auto& g : j.at("strength_groups"))
            spec.strength_groups.push_back(
                {g.at("parameters").get<std::vector<std::string>>(),
                 g.at("strength").get<int>()});
    spec.validate();
    return spec;
}

// ── subcommands ─────────────────────────────────────────────────────────────

int cmd_monitor(const std::string& formula_text, const std::string& formula_file,
                const std::string& trace_path, std::string meta_path) {
    if (meta_path.empty()) meta_path = default_meta_path(trace_path);
    Trace tr = read_trace_csv(trace_path, meta_path);
    auto report = validate_trace(tr);
    if (!report.valid()) {
        for (const auto& v : report.violations)
            std::cerr << "error: invalid trace: " << v.message << "\n";
        return 3;
    }
    std::string text = formula_text;
    if (text.empty()) {
        if (formula_file.empty()) throw Error("provide --formula or --formula-file");
        std::ifstream in(formula_file);
        if (!in) throw Error("cannot open formula file '" + formula_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Formula f = parse_formula(text, tr.space());
    MonitorVerdict v = monitor_verdict(f, tr);
    std::cout << verdict_to_json(v) << "\n";
    if (v.inconclusive) return 2;
    return v.satisfied ? 0 : 1;
}

int cmd_generate_ca(const std::string& config_path, std::uint64_t seed,
                    const std::string& out_prefix) {
    MixedStrengthSpec spec = parse_ca_spec(load_json(config_path));
    CoveringArray ca = generate_ca(spec, seed);
    CoverageReport report = verify_coverage(ca);
    write_ca_csv(ca, out_prefix + ".csv");
    write_ca_sidecar(ca, report, out_prefix + ".json");
    double pct = report.total_required == 0
                     ? 100.0
                     : 100.0 * static_cast<double>(report.total_covered) /
                           static_cast<double>(report.total_required);
    std::cout << "rows=" << ca.rows.size() << " coverage=" << report.total_covered << "/"
              << report.total_required << " (" << pct << "%)\n";
    if (!report.complete()) {
        std::cerr << "error: generated array does not reach full coverage\n";
        return 3;
    }
    return 0;
}

int cmd_falsify(const std::string& config_path, std::uint64_t seed,
                const std::string& out_dir, int jobs) {
    json config = load_json(config_path);
    Campaign campaign = build_campaign(config);
    const json& method = config.at("method");
    std::string name = method.at("name").get<std::string>();

    CampaignResult result;
    if (name == "random") {
        int budget = method.at("budget").get<int>();
        if (budget < 1) throw Error("empty budget");
        result = uniform_random_search(campaign.space, campaign.objective, budget, seed);
    } else if (name == "sa") {
        SAConfig cfg;
        cfg.budget = method.at("budget").get<int>();
        if (cfg.budget < 1) throw Error("empty budget");
        if (method.contains("sa")) {
            const json& sa = method.at("sa");
            if (sa.contains("initial_temperature"))
                cfg.initial_temperature = sa.at("initial_temperature").get<double>();
            if (sa.contains("cooling_factor"))
                cfg.cooling_factor = sa.at("cooling_factor").get<double>();
            if (sa.contains("proposal_scale"))
                cfg.proposal_scale = sa.at("proposal_scale").get<double>();
            if (sa.contains("restart_patience"))
                cfg.restart_patience = sa.at("restart_patience").get<int>();
        }
        cfg.seed = seed;
        result = falsify_sa(campaign.space, campaign.objective, cfg);
    } else if (name == "ca+sa") {
        if (!method.contains("ca_file")) throw Error("method 'ca+sa' needs 'ca_file'");
        std::string ca_file = method.at("ca_file").get<std::string>();
        std::string spec_file =
            method.contains("ca_spec_file")
                ? method.at("ca_spec_file").get<std::string>()
                : (ca_file.size() > 4 && ca_file.substr(ca_file.size() - 4) == ".csv"
                       ? ca_file.substr(0, ca_file.size() - 4) + ".json"
                       : ca_file + ".json");
        json sidecar = load_json(spec_file);
        MixedStrengthSpec spec =
            parse_ca_spec(sidecar.contains("spec") ? sidecar.at("spec") : sidecar);
        CoveringArray ca = read_ca_csv(spec, ca_file);
        int per_seed = method.value("per_seed_budget", 50);
        int extra = method.value("max_extra_budget", 300);
        result = ca_then_falsify(ca, campaign.space, campaign.objective, per_seed, extra,
                                 seed, jobs);
    } else {
        throw Error("method.name must be one of: random, sa, ca+sa");
    }

    std::filesystem::create_directories(out_dir);
    write_campaign_jsonl(result, campaign.space, out_dir + "/evaluations.jsonl");
    write_campaign_summary(result, campaign.space, name, seed, out_dir + "/summary.json");
    if (!result.evaluations.empty()) {
        Trace best = campaign.simulate(result.evaluations[result.best_index].point);
        write_trace_csv(best, out_dir + "/best_trace.csv",
                        out_dir + "/best_trace.meta.json");
    }
    log_info("falsify: " + std::to_string(result.evaluations.size()) + " evaluations, best " +
             std::to_string(result.best_robustness()));
    std::cout << "evaluations=" << result.evaluations.size()
              << " falsified=" << (result.falsified ? "true" : "false")
              << " falsifying_count=" << result.falsifying_count
              << " best=" << result.best_robustness() << "\n";
    return result.falsified ? 1 : 0;
}

int cmd_heatmap(const std::string& config_path, const std::string& out_prefix, int jobs) {
    json config = load_json(config_path);
    Campaign campaign = build_campaign(config);
    auto grid = config.at("grid").get<std::vector<int>>();
    if (grid.size() != 2) throw Error("grid must be [x_cells, y_cells]");
    HeatmapResult hm =
        robustness_heatmap(campaign.space, campaign.objective, grid[0], grid[1], jobs);
    write_heatmap_csv(hm, out_prefix + ".csv", out_prefix + ".axes.json");
    std::cout << "cells=" << (hm.x_values.size() * hm.y_values.size())
              << " counterexamples=" << hm.counterexample_count << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    json config = load_json(config_path);
    ScenarioConfig sc = parse_scenario(config.at("scenario"));
    SearchSpace empty;
    SearchPoint origin;
    Trace tr = simulate_scenario_at(sc, empty, origin);
    write_trace_csv(tr, out_path, default_meta_path(out_path));
    std::cout << "samples=" << tr.sample_count() << " duration=" << tr.duration() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STL requirements monitoring and falsification"};
    app.require_subcommand(1);

    std::string formula_text, formula_file, trace_path, meta_path;
    std::string config_path, out_path = "out";
    std::uint64_t seed = 0;
    int jobs = 1;

    auto* monitor_cmd = app.add_subcommand("monitor", "evaluate a formula on a trace");
    monitor_cmd->add_option("--formula", formula_text, "formula text");
    monitor_cmd->add_option("--formula-file", formula_file, "file holding the formula");
    monitor_cmd->add_option("--trace", trace_path, "trace CSV")->required();
    monitor_cmd->add_option("--meta", meta_path, "trace metadata JSON");

    auto* ca_cmd = app.add_subcommand("generate-ca", "generate a covering array");
    ca_cmd->add_option("--config", config_path, "covering array spec JSON")->required();
    ca_cmd->add_option("--seed", seed, "generator seed");
    ca_cmd->add_option("--out", out_path, "output prefix");

    auto* falsify_cmd = app.add_subcommand("falsify", "run a falsification campaign");
    falsify_cmd->add_option("--config", config_path, "campaign config JSON")->required();
    falsify_cmd->add_option("--seed", seed, "campaign seed");
    falsify_cmd->add_option("--out", out_path, "output directory");
    falsify_cmd->add_option("--jobs", jobs, "parallel simulations for the CA phase");

    auto* heatmap_cmd = app.add_subcommand("heatmap", "robustness over a 2-variable grid");
    heatmap_cmd->add_option("--config", config_path, "heatmap config JSON")->required();
    heatmap_cmd->add_option("--out", out_path, "output prefix");
    heatmap_cmd->add_option("--jobs", jobs, "parallel cell evaluations");

    auto* sim_cmd = app.add_subcommand("simulate", "dump a raw scenario trace");
    sim_cmd->add_option("--config", config_path, "scenario config JSON")->required();
    sim_cmd->add_option("--out", out_path, "output trace CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (app.got_subcommand(monitor_cmd))
            return cmd_monitor(formula_text, formula_file, trace_path, meta_path);
        if (app.got_subcommand(ca_cmd)) return cmd_generate_ca(config_path, seed, out_path);
        if (app.got_subcommand(falsify_cmd))
            return cmd_falsify(config_path, seed, out_path, jobs);
        if (app.got_subcommand(heatmap_cmd)) return cmd_heatmap(config_path, out_path, jobs);
        if (app.got_subcommand(sim_cmd)) return cmd_simulate(config_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
