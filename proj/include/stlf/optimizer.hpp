// ============================================================================
// stlf/optimizer.hpp — robustness-guided falsification campaigns
// ============================================================================
//
// A falsification campaign minimizes the robustness of a requirement over a
// search space; any evaluation below zero is a counterexample.  Three
// strategies are provided: uniform random sampling, simulated annealing,
// and the covering-array-seeded pipeline (evaluate every CA row, then run
// SA warm-started from the non-falsifying rows in ascending robustness
// order).  All strategies are deterministic given their seed.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stlf/covering_array.hpp"
#include "stlf/scenario.hpp"

namespace stlf {

// ── search space ────────────────────────────────────────────────────────────

struct ContinuousVar {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

struct DiscreteVar {
    std::string name;
    std::vector<std::string> levels;
};

struct InputSignalVar {
    std::string channel;
    int control_points = 1;
    double lo = 0.0;
    double hi = 1.0;
    Interp interpolation = Interp::Linear;
};

struct SearchSpace {
    std::vector<ContinuousVar> continuous_vars;
    std::vector<DiscreteVar> discrete_vars;
    std::vector<InputSignalVar> input_signal_vars;

    struct Dim {
        std::string name;  // var name, or "<channel>[k]" for control points
        double lo;
        double hi;
    };

    /// Scalar continuous dimensions: continuous_vars in order, then each
    /// input signal expanded to its control points.
    std::vector<Dim> continuous_dims() const;

    void validate() const;
};

struct SearchPoint {
    std::vector<double> continuous;  // matches SearchSpace::continuous_dims()
    std::vector<int> discrete;       // level index per discrete var

    bool operator==(const SearchPoint& o) const {
        return continuous == o.continuous && discrete == o.discrete;
    }
};

/// Human-readable "name=value" rendering, used in error messages and logs.
std::string describe_point(const SearchSpace& space, const SearchPoint& pt);

// ── objective ───────────────────────────────────────────────────────────────

/// Maps a search point to a robustness value.  Must be pure (thread-safe,
/// deterministic): campaign phases may evaluate points concurrently.
struct Objective {
    std::function<double(const SearchPoint&)> evaluate;
};

/// A simulator failure, carrying the offending point.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, SearchPoint point)
        : Error(what), point(std::move(point)) {}
    SearchPoint point;
};

// ── campaign results ────────────────────────────────────────────────────────

struct Evaluation {
    SearchPoint point;
    double robustness = 0.0;
};

struct CampaignResult {
    std::vector<Evaluation> evaluations;
    std::vector<double> min_envelope;  // running minimum, non-increasing
    std::size_t best_index = 0;
    bool falsified = false;       // best robustness < 0
    int falsifying_count = 0;     // evaluations with robustness < 0

    double best_robustness() const {
        return evaluations.empty() ? std::numeric_limits<double>::infinity()
                                   : evaluations[best_index].robustness;
    }
};

// ── configuration ───────────────────────────────────────────────────────────

struct SAConfig {
    int budget = 100;
    double initial_temperature = 0.0;  // <= 0: use 0.1 * |first robustness|
    double cooling_factor = 0.97;      // applied per accepted step
    double proposal_scale = 0.1;       // Gaussian step as a fraction of each range
    int restart_patience = 30;         // jump back to best after this many non-improving steps
    std::uint64_t seed = 0;

    void validate() const;
};

// ── strategies ──────────────────────────────────────────────────────────────

CampaignResult uniform_random_search(const SearchSpace& space, const Objective& objective,
                                     int budget, std::uint64_t seed);

CampaignResult falsify_sa(const SearchSpace& space, const Objective& objective,
                          const SAConfig& cfg,
                          std::optional<SearchPoint> warm_start = std::nullopt,
                          bool freeze_discrete = false);

/// Covering-array-seeded falsification: phase 1 evaluates every CA row
/// (search variables absent from the CA default to the range midpoint /
/// level 0); phase 2 ranks the non-falsifying rows by ascending robustness
/// and runs falsify_sa warm-started from each in order (discrete variables
/// frozen to the row, continuous free), spending at most per_seed_budget
/// per row until max_extra_budget is exhausted.  `jobs` parallelizes the
/// phase-1 evaluations; the result is identical for any jobs >= 1.
CampaignResult ca_then_falsify(const CoveringArray& ca, const SearchSpace& space,
                               const Objective& objective, int per_seed_budget,
                               int max_extra_budget, std::uint64_t seed, int jobs = 1);

// ── heatmap ─────────────────────────────────────────────────────────────────

struct HeatmapResult {
    std::string x_name, y_name;
    std::vector<double> x_values, y_values;
    // values[i][j] = objective at (x_values[i], y_values[j]); row-major scan.
    std::vector<std::vector<double>> values;
    std::vector<std::vector<char>> valid;  // 0 where the simulator failed
    std::vector<std::string> cell_errors;
    int counterexample_count = 0;  // valid cells with robustness < 0
};

/// Requires a space with exactly two continuous dimensions and no discrete
/// variables; a 1-cell axis evaluates at the range midpoint.
HeatmapResult robustness_heatmap(const SearchSpace& space, const Objective& objective,
                                 int x_cells, int y_cells, int jobs = 1);

}  // namespace stlf
