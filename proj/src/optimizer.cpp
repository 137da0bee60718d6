#include "stlf/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "stlf/rng.hpp"

namespace stlf {

std::vector<SearchSpace::Dim> SearchSpace::continuous_dims() const {
    std::vector<Dim> dims;
    for (const auto& v : continuous_vars) dims.push_back({v.name, v.lo, v.hi});
    for (const auto& sig : input_signal_vars)
        for (int k = 0; k < sig.control_points; ++k)
            dims.push_back({sig.channel + "[" + std::to_string(k) + "]", sig.lo, sig.hi});
    return dims;
}

void SearchSpace::validate() const {
    for (const auto& v : continuous_vars)
        if (!(v.lo < v.hi)) throw Error("search variable '" + v.name + "': lo must be < hi");
    for (const auto& v : discrete_vars)
        if (v.levels.empty())
            throw Error("search variable '" + v.name + "' has no levels");
    for (const auto& sig : input_signal_vars) {
        if (sig.control_points < 1)
            throw Error("signal variable '" + sig.channel + "' needs >= 1 control point");
        if (!(sig.lo < sig.hi))
            throw Error("signal variable '" + sig.channel + "': lo must be < hi");
    }
}

std::string describe_point(const SearchSpace& space, const SearchPoint& pt) {
    std::ostringstream out;
    auto dims = space.continuous_dims();
    for (std::size_t d = 0; d < dims.size() && d < pt.continuous.size(); ++d)
        out << (d ? ", " : "") << dims[d].name << "=" << pt.continuous[d];
    for (std::size_t v = 0; v < space.discrete_vars.size() && v < pt.discrete.size(); ++v)
        out << (pt.continuous.empty() && v == 0 ? "" : ", ") << space.discrete_vars[v].name
            << "=" << space.discrete_vars[v].levels[static_cast<std::size_t>(pt.discrete[v])];
    return out.str();
}

void SAConfig::validate() const {
    if (budget < 1) throw Error("SA budget must be >= 1");
    if (!(cooling_factor > 0.0 && cooling_factor < 1.0))
        throw Error("cooling factor must lie in (0, 1)");
    if (!(proposal_scale > 0.0 && proposal_scale <= 1.0))
        throw Error("proposal scale must lie in (0, 1]");
    if (restart_patience < 1) throw Error("restart patience must be >= 1");
}

namespace {

double clamp(double v, double lo, double hi) { return std::max(lo, std::min(hi, v)); }

double evaluate_checked(const Objective& objective, const SearchSpace& space,
                        const SearchPoint& pt) {
    try {
        return objective.evaluate(pt);
    } catch (const SimulationError&) {
        throw;
    } catch (const std::exception& e) {
        throw SimulationError(std::string("simulator failure: ") + e.what() + " at point (" +
                                  describe_point(space, pt) + ")",
                              pt);
    }
}

void record(CampaignResult& result, SearchPoint pt, double rob) {
    result.evaluations.push_back({std::move(pt), rob});
    double prev = result.min_envelope.empty()
                      ? std::numeric_limits<double>::infinity()
                      : result.min_envelope.back();
    result.min_envelope.push_back(std::min(prev, rob));
    if (rob < result.evaluations[result.best_index].robustness ||
        result.evaluations.size() == 1)
        result.best_index = result.evaluations.size() - 1;
    if (rob < 0.0) {
        result.falsified = true;
        ++result.falsifying_count;
    }
}

SearchPoint sample_uniform(const SearchSpace& space,
                           const std::vector<SearchSpace::Dim>& dims, Rng& rng) {
    SearchPoint pt;
    pt.continuous.reserve(dims.size());
    for (const auto& d : dims) pt.continuous.push_back(rng.uniform(d.lo, d.hi));
    pt.discrete.reserve(space.discrete_vars.size());
    for (const auto& v : space.discrete_vars)
        pt.discrete.push_back(static_cast<int>(rng.index(v.levels.size())));
    return pt;
}

}  // namespace

CampaignResult uniform_random_search(const SearchSpace& space, const Objective& objective,
                                     int budget, std::uint64_t seed) {
    space.validate();
    if (budget < 1) throw Error("search budget must be >= 1");
    auto dims = space.continuous_dims();
    Rng rng(seed);
    CampaignResult result;
    for (int i = 0; i < budget; ++i) {
        SearchPoint pt = sample_uniform(space, dims, rng);
        double rob = evaluate_checked(objective, space, pt);
        record(result, std::move(pt), rob);
        if (rob < 0.0) break;
    }
    return result;
}

CampaignResult falsify_sa(const SearchSpace& space, const Objective& objective,
                          const SAConfig& cfg, std::optional<SearchPoint> warm_start,
                          bool freeze_discrete) {
    space.validate();
    cfg.validate();
    auto dims = space.continuous_dims();
    Rng rng(cfg.seed);
    CampaignResult result;

    SearchPoint current =
        warm_start.has_value() ? *warm_start : sample_uniform(space, dims, rng);
    if (current.continuous.size() != dims.size() ||
        current.discrete.size() != space.discrete_vars.size())
        throw Error("warm start point does not match the search space");

    double current_rob = evaluate_checked(objective, space, current);
    record(result, current, current_rob);
    if (current_rob < 0.0) return result;

    double temperature = cfg.initial_temperature > 0.0
                             ? cfg.initial_temperature
                             : 0.1 * std::fabs(current_rob);
    SearchPoint best = current;
    double best_rob = current_rob;
    int non_improving = 0;

    while (static_cast<int>(result.evaluations.size()) < cfg.budget) {
        SearchPoint proposal = current;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            double step = rng.gauss() * cfg.proposal_scale * (dims[d].hi - dims[d].lo);
            proposal.continuous[d] = clamp(proposal.continuous[d] + step, dims[d].lo,
                                           dims[d].hi);
        }
        if (!freeze_discrete && !space.discrete_vars.empty() && rng.chance(0.2)) {
            std::size_t which = rng.index(space.discrete_vars.size());
            proposal.discrete[which] =
                static_cast<int>(rng.index(space.discrete_vars[which].levels.size()));
        }

        double rob = evaluate_checked(objective, space, proposal);
        record(result, proposal, rob);
        if (rob < 0.0) break;

        double delta = rob - current_rob;
        bool accept = delta <= 0.0;
        if (!accept && temperature > 0.0) accept = rng.chance(std::exp(-delta / temperature));
        if (accept) {
            current = proposal;
            current_rob = rob;
            temperature *= cfg.cooling_factor;
        }
        if (rob < best_rob) {
            best = proposal;
            best_rob = rob;
            non_improving = 0;
        } else if (++non_improving >= cfg.restart_patience) {
            current = best;
            current_rob = best_rob;
            non_improving = 0;
        }
    }
    return result;
}

namespace {

// Map a CA row onto a search point: CA parameters must name search
// variables; everything else gets a deterministic default (continuous:
// midpoint, discrete: level 0).
SearchPoint row_to_point(const CoveringArray& ca, const SearchSpace& space,
                         const std::vector<SearchSpace::Dim>& dims,
                         const std::vector<std::size_t>& row) {
    SearchPoint pt;
    pt.continuous.reserve(dims.size());
    for (const auto& d : dims) pt.continuous.push_back((d.lo + d.hi) / 2.0);
    pt.discrete.assign(space.discrete_vars.size(), 0);

    for (std::size_t p = 0; p < ca.spec.domains.size(); ++p) {
        const ParameterDomain& dom = ca.spec.domains[p];
        bool matched = false;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            if (dims[d].name == dom.name) {
                if (!dom.is_continuous())
                    throw Error("CA parameter '" + dom.name +
                                "' is discrete but matches a continuous search variable");
                pt.continuous[d] = dom.level_number(row[p]);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        for (std::size_t v = 0; v < space.discrete_vars.size(); ++v) {
            if (space.discrete_vars[v].name == dom.name) {
                const auto& levels = space.discrete_vars[v].levels;
                std::string value = dom.level_value(row[p]);
                auto it = std::find(levels.begin(), levels.end(), value);
                if (it == levels.end())
                    throw Error("CA level '" + value + "' is not a level of search variable '" +
                                dom.name + "'");
                pt.discrete[v] = static_cast<int>(it - levels.begin());
                matched = true;
                break;
            }
        }
        if (!matched)
            throw Error("CA parameter '" + dom.name + "' does not match any search variable");
    }
    return pt;
}

}  // namespace

CampaignResult ca_then_falsify(const CoveringArray& ca, const SearchSpace& space,
                               const Objective& objective, int per_seed_budget,
                               int max_extra_budget, std::uint64_t seed, int jobs) {
    space.validate();
    if (ca.rows.empty()) throw Error("covering array has no rows");
    if (per_seed_budget < 1) throw Error("per-seed budget must be >= 1");
    if (max_extra_budget < 0) throw Error("extra budget must be >= 0");
    auto dims = space.continuous_dims();

    // Phase 1: evaluate every CA row (in parallel when jobs > 1; results are
    // recorded in row order either way).
    std::vector<SearchPoint> points;
    points.reserve(ca.rows.size());
    for (const auto& row : ca.rows) points.push_back(row_to_point(ca, space, dims, row));

    std::vector<double> row_rob(points.size());
    std::vector<std::exception_ptr> row_err(points.size());
    int workers = std::max(1, jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            row_rob[i] = evaluate_checked(objective, space, points[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= points.size()) return;
                try {
                    row_rob[i] = evaluate_checked(objective, space, points[i]);
                } catch (...) {
                    row_err[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        for (auto& err : row_err)
            if (err) std::rethrow_exception(err);
    }

    CampaignResult result;
    for (std::size_t i = 0; i < points.size(); ++i) record(result, points[i], row_rob[i]);

    // Phase 2: SA warm-started from the non-falsifying rows, smallest
    // positive robustness first; rows at or below zero are already
    // counterexamples and are not reseeded.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (row_rob[i] > 0.0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row_rob[a] != row_rob[b]) return row_rob[a] < row_rob[b];
        return a < b;
    });

    Rng seeder(seed);
    int remaining = max_extra_budget;
    for (std::size_t k = 0; k < order.size() && remaining > 0; ++k) {
        SAConfig cfg;
        cfg.budget = std::min(per_seed_budget, remaining);
        cfg.seed = seeder.child(k).next_u64();
        CampaignResult sa = falsify_sa(space, objective, cfg, points[order[k]],
                                       /*freeze_discrete=*/true);
        remaining -= static_cast<int>(sa.evaluations.size());
        for (const auto& ev : sa.evaluations) record(result, ev.point, ev.robustness);
    }
    return result;
}

HeatmapResult robustness_heatmap(const SearchSpace& space, const Objective& objective,
                                 int x_cells, int y_cells, int jobs) {
    space.validate();
    auto dims = space.continuous_dims();
    if (dims.size() != 2 || !space.discrete_vars.empty())
        throw Error("heatmap needs exactly two free scalar variables");
    if (x_cells < 1 || y_cells < 1) throw Error("heatmap grid must be >= 1x1");

    auto axis = [](const SearchSpace::Dim& d, int n) {
        std::vector<double> vals(static_cast<std::size_t>(n));
        if (n == 1) {
            vals[0] = (d.lo + d.hi) / 2.0;
        } else {
            for (int k = 0; k < n; ++k)
                vals[static_cast<std::size_t>(k)] =
                    d.lo + (d.hi - d.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        }
        return vals;
    };

    HeatmapResult hm;
    hm.x_name = dims[0].name;
    hm.y_name = dims[1].name;
    hm.x_values = axis(dims[0], x_cells);
    hm.y_values = axis(dims[1], y_cells);
    hm.values.assign(hm.x_values.size(),
                     std::vector<double>(hm.y_values.size(),
                                         std::numeric_limits<double>::quiet_NaN()));
    hm.valid.assign(hm.x_values.size(), std::vector<char>(hm.y_values.size(), 1));
    hm.cell_errors.assign(hm.x_values.size() * hm.y_values.size(), "");

    const std::size_t total = hm.x_values.size() * hm.y_values.size();
    auto eval_cell = [&](std::size_t cell) {
        std::size_t i = cell / hm.y_values.size();
        std::size_t j = cell % hm.y_values.size();
        SearchPoint pt;
        pt.continuous = {hm.x_values[i], hm.y_values[j]};
        try {
            hm.values[i][j] = evaluate_checked(objective, space, pt);
        } catch (const SimulationError& e) {
            hm.valid[i][j] = 0;
            hm.cell_errors[cell] = e.what();
        }
    };

    int workers = std::max(1, jobs);
    if (workers == 1) {
        for (std::size_t cell = 0; cell < total; ++cell) eval_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            while (true) {
                std::size_t cell = next.fetch_add(1);
                if (cell >= total) return;
                eval_cell(cell);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < hm.x_values.size(); ++i)
        for (std::size_t j = 0; j < hm.y_values.size(); ++j)
            if (hm.valid[i][j] && hm.values[i][j] < 0.0) ++hm.counterexample_count;
    return hm;
}

}  // namespace stlf
