#include "stlf/campaign_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace stlf {

namespace {

nlohmann::json point_to_json(const SearchSpace& space, const SearchPoint& pt) {
    nlohmann::json j = nlohmann::json::object();
    auto dims = space.continuous_dims();
    for (std::size_t d = 0; d < dims.size(); ++d) j[dims[d].name] = pt.continuous[d];
    for (std::size_t v = 0; v < space.discrete_vars.size(); ++v)
        j[space.discrete_vars[v].name] =
            space.discrete_vars[v].levels[static_cast<std::size_t>(pt.discrete[v])];
    return j;
}

std::string num17(double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_campaign_jsonl(const CampaignResult& result, const SearchSpace& space,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < result.evaluations.size(); ++i) {
        nlohmann::json line = {{"index", i},
                               {"point", point_to_json(space, result.evaluations[i].point)},
                               {"robustness", result.evaluations[i].robustness},
                               {"trace_id", i}};
        out << line.dump() << "\n";
    }
    if (!out.flush()) throw Error("failed writing '" + path + "'");
}

void write_campaign_summary(const CampaignResult& result, const SearchSpace& space,
                            const std::string& method, std::uint64_t seed,
                            const std::string& path) {
    nlohmann::json j = {
        {"method", method},
        {"seed", seed},
        {"evaluations", result.evaluations.size()},
        {"falsified", result.falsified},
        {"falsifying_count", result.falsifying_count},
        {"best_index", result.best_index},
        {"best_robustness", result.best_robustness()},
        {"best_point", result.evaluations.empty()
                           ? nlohmann::json(nullptr)
                           : point_to_json(space, result.evaluations[result.best_index].point)},
        {"min_envelope", result.min_envelope},
    };
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out.flush()) throw Error("failed writing '" + path + "'");
}

void write_heatmap_csv(const HeatmapResult& hm, const std::string& csv_path,
                       const std::string& axes_path) {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot open '" + csv_path + "' for writing");
    for (std::size_t i = 0; i < hm.values.size(); ++i) {
        for (std::size_t j = 0; j < hm.values[i].size(); ++j)
            out << (j ? "," : "") << (hm.valid[i][j] ? num17(hm.values[i][j]) : "nan");
        out << "\n";
    }
    if (!out.flush()) throw Error("failed writing '" + csv_path + "'");

    nlohmann::json axes = {{"x_name", hm.x_name},
                           {"y_name", hm.y_name},
                           {"x_values", hm.x_values},
                           {"y_values", hm.y_values},
                           {"layout", "rows follow x_values, columns follow y_values"},
                           {"counterexample_count", hm.counterexample_count}};
    std::ofstream ax(axes_path);
    if (!ax) throw Error("cannot open '" + axes_path + "' for writing");
    ax << axes.dump(2) << "\n";
    if (!ax.flush()) throw Error("failed writing '" + axes_path + "'");
}

std::string verdict_to_json(const MonitorVerdict& v) {
    nlohmann::json j = {{"robustness", v.robustness},
                        {"satisfied", v.satisfied},
                        {"worst_time", v.worst_time},
                        {"inconclusive", v.inconclusive},
                        {"extension_sensitive", v.extension_sensitive}};
    return j.dump();
}

// Defined here so covering_array.cpp stays free of the JSON dependency.
void write_ca_sidecar(const CoveringArray& ca, const CoverageReport& report,
                      const std::string& json_path) {
    nlohmann::json domains = nlohmann::json::array();
    for (const auto& d : ca.spec.domains) {
        nlohmann::json jd = {{"name", d.name}};
        if (d.is_continuous()) {
            jd["range"] = {d.range->first, d.range->second};
            jd["level_count"] = d.continuous_levels;
        } else {
            jd["levels"] = d.symbolic_levels;
        }
        domains.push_back(jd);
    }
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : ca.spec.strength_groups)
        groups.push_back({{"parameters", g.parameters}, {"strength", g.strength}});

    nlohmann::json scopes = nlohmann::json::array();
    for (const auto& s : report.scopes) {
        nlohmann::json js = {{"strength", s.strength},
                             {"required", s.required},
                             {"covered", s.covered}};
        if (s.parameters.has_value()) js["parameters"] = *s.parameters;
        scopes.push_back(js);
    }
    nlohmann::json missing = nlohmann::json::array();
    for (const auto& m : report.missing) {
        nlohmann::json jm = nlohmann::json::object();
        for (const auto& [param, value] : m.assignment) jm[param] = value;
        missing.push_back(jm);
    }

    nlohmann::json j = {
        {"spec",
         {{"default_strength", ca.spec.default_strength},
          {"domains", domains},
          {"strength_groups", groups}}},
        {"rows", ca.rows.size()},
        {"coverage",
         {{"scopes", scopes},
          {"total_required", report.total_required},
          {"total_covered", report.total_covered},
          {"complete", report.complete()},
          {"missing", missing}}},
    };
    std::ofstream out(json_path);
    if (!out) throw Error("cannot open '" + json_path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out.flush()) throw Error("failed writing '" + json_path + "'");
}

}  // namespace stlf
