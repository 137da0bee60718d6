#include "stlf/covering_array.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stlf/rng.hpp"

namespace stlf {

ParameterDomain ParameterDomain::discrete(std::string name, std::vector<std::string> levels) {
    ParameterDomain d;
    d.name = std::move(name);
    d.symbolic_levels = std::move(levels);
    d.validate();
    return d;
}

ParameterDomain ParameterDomain::continuous(std::string name, double lo, double hi,
                                            int levels) {
    ParameterDomain d;
    d.name = std::move(name);
    d.range = {lo, hi};
    d.continuous_levels = levels;
    d.validate();
    return d;
}

double ParameterDomain::level_number(std::size_t idx) const {
    if (!is_continuous()) throw Error("domain '" + name + "' is not continuous");
    auto [lo, hi] = *range;
    std::size_t n = level_count();
    if (n == 1) return (lo + hi) / 2.0;
    return lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(n - 1);
}

namespace {
std::string num17(double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}
}  // namespace

std::string ParameterDomain::level_value(std::size_t idx) const {
    if (idx >= level_count())
        throw Error("domain '" + name + "': level index out of range");
    if (is_continuous()) return num17(level_number(idx));
    return symbolic_levels[idx];
}

std::size_t ParameterDomain::level_index(const std::string& value) const {
    for (std::size_t i = 0; i < level_count(); ++i)
        if (level_value(i) == value) return i;
    if (is_continuous()) {
        // accept any serialization of a representative value
        char* end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && *end == '\0')
            for (std::size_t i = 0; i < level_count(); ++i)
                if (level_number(i) == v) return i;
    }
    throw Error("value '" + value + "' is not a level of domain '" + name + "'");
}

void ParameterDomain::validate() const {
    if (name.empty()) throw Error("parameter domain must be named");
    if (is_continuous()) {
        if (!symbolic_levels.empty())
            throw Error("domain '" + name + "' cannot be both discrete and continuous");
        if (!(range->first < range->second))
            throw Error("domain '" + name + "': range must satisfy lo < hi");
        if (continuous_levels < 2)
            throw Error("domain '" + name + "' needs at least 2 levels");
    } else {
        if (symbolic_levels.size() < 2)
            throw Error("domain '" + name + "' needs at least 2 levels");
        std::set<std::string> uniq(symbolic_levels.begin(), symbolic_levels.end());
        if (uniq.size() != symbolic_levels.size())
            throw Error("domain '" + name + "' has duplicate levels");
    }
}

std::size_t MixedStrengthSpec::domain_index(const std::string& name) const {
    for (std::size_t i = 0; i < domains.size(); ++i)
        if (domains[i].name == name) return i;
    throw Error("unknown parameter '" + name + "'");
}

void MixedStrengthSpec::validate() const {
    if (domains.empty()) throw Error("covering array spec has no parameters");
    std::set<std::string> names;
    for (const auto& d : domains) {
        d.validate();
        if (!names.insert(d.name).second)
            throw Error("duplicate parameter '" + d.name + "'");
    }
    if (default_strength < 1 || static_cast<std::size_t>(default_strength) > domains.size())
        throw Error("default strength must satisfy 1 <= t <= parameter count");
    for (const auto& g : strength_groups) {
        if (g.strength <= default_strength)
            throw Error("group strength must exceed the default strength");
        std::set<std::string> sub(g.parameters.begin(), g.parameters.end());
        if (sub.size() != g.parameters.size())
            throw Error("strength group lists a parameter twice");
        if (sub.size() < static_cast<std::size_t>(g.strength))
            throw Error("strength group smaller than its strength");
        for (const auto& p : g.parameters) domain_index(p);  // throws when unknown
    }
}

// ── required subsets and tuple bookkeeping ──────────────────────────────────

namespace {

void enumerate_subsets(const std::vector<std::size_t>& pool, std::size_t t,
                       std::vector<std::size_t>& scratch,
                       std::set<std::vector<std::size_t>>& out, std::size_t start = 0) {
    if (scratch.size() == t) {
        out.insert(scratch);
        return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
        scratch.push_back(pool[i]);
        enumerate_subsets(pool, t, scratch, out, i + 1);
        scratch.pop_back();
    }
}

std::set<std::vector<std::size_t>> scope_subsets(const std::vector<std::size_t>& pool,
                                                 int strength) {
    std::set<std::vector<std::size_t>> out;
    std::vector<std::size_t> scratch;
    enumerate_subsets(pool, static_cast<std::size_t>(strength), scratch, out);
    return out;
}

std::set<std::vector<std::size_t>> required_subsets(const MixedStrengthSpec& spec) {
    std::vector<std::size_t> all(spec.domains.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto subsets = scope_subsets(all, spec.default_strength);
    for (const auto& g : spec.strength_groups) {
        std::vector<std::size_t> pool;
        for (const auto& p : g.parameters) pool.push_back(spec.domain_index(p));
        std::sort(pool.begin(), pool.end());
        auto extra = scope_subsets(pool, g.strength);
        subsets.insert(extra.begin(), extra.end());
    }
    return subsets;
}

// Coverage bookkeeping for one required parameter subset.
struct Tracker {
    std::vector<std::size_t> params;   // parameter indices (sorted)
    std::vector<std::size_t> stride;   // mixed-radix strides
    std::vector<char> covered;
    std::size_t remaining = 0;

    Tracker(const MixedStrengthSpec& spec, std::vector<std::size_t> ps)
        : params(std::move(ps)) {
        std::size_t total = 1;
        stride.resize(params.size());
        for (std::size_t i = params.size(); i-- > 0;) {
            stride[i] = total;
            total *= spec.domains[params[i]].level_count();
        }
        covered.assign(total, 0);
        remaining = total;
    }

    std::size_t tuple_index(const std::vector<std::size_t>& row) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < params.size(); ++i) idx += row[params[i]] * stride[i];
        return idx;
    }

    // Tuple index when parameter `p` (a member of params) takes `level` and
    // all other members are assigned in `row`.
    std::size_t tuple_index_with(const std::vector<std::size_t>& row, std::size_t p,
                                 std::size_t level) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < params.size(); ++i)
            idx += (params[i] == p ? level : row[params[i]]) * stride[i];
        return idx;
    }

    void decode(std::size_t idx, std::vector<std::size_t>& levels) const {
        levels.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            levels[i] = idx / stride[i];
            idx %= stride[i];
        }
    }
};

}  // namespace

unsigned long long count_required_tuples(const MixedStrengthSpec& spec) {
    spec.validate();
    unsigned long long total = 0;
    for (const auto& subset : required_subsets(spec)) {
        unsigned long long prod = 1;
        for (std::size_t p : subset) prod *= spec.domains[p].level_count();
        total += prod;
    }
    return total;
}

CoveringArray generate_ca(const MixedStrengthSpec& spec, std::uint64_t seed) {
    spec.validate();
    constexpr std::size_t kCandidatesPerRow = 50;
    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

    std::vector<Tracker> trackers;
    for (const auto& subset : required_subsets(spec)) trackers.emplace_back(spec, subset);

    // trackers_of[p]: indices of trackers whose subset contains parameter p
    std::vector<std::vector<std::size_t>> trackers_of(spec.domains.size());
    for (std::size_t ti = 0; ti < trackers.size(); ++ti)
        for (std::size_t p : trackers[ti].params) trackers_of[p].push_back(ti);

    std::size_t total_remaining = 0;
    for (const auto& t : trackers) total_remaining += t.remaining;

    Rng rng(seed);
    CoveringArray ca;
    ca.spec = spec;

    std::vector<std::size_t> order(spec.domains.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    auto pick_uncovered_seed = [&](bool deterministic)
        -> std::pair<std::size_t, std::size_t> {  // (tracker, tuple index)
        if (deterministic) {
            for (std::size_t ti = 0; ti < trackers.size(); ++ti)
                if (trackers[ti].remaining > 0)
                    for (std::size_t x = 0; x < trackers[ti].covered.size(); ++x)
                        if (!trackers[ti].covered[x]) return {ti, x};
            throw Error("internal: no uncovered tuple left");
        }
        // random tracker with remaining work, then a random uncovered tuple
        std::vector<std::size_t> live;
        for (std::size_t ti = 0; ti < trackers.size(); ++ti)
            if (trackers[ti].remaining > 0) live.push_back(ti);
        std::size_t ti = live[rng.index(live.size())];
        const auto& cov = trackers[ti].covered;
        std::size_t start = rng.index(cov.size());
        for (std::size_t k = 0; k < cov.size(); ++k) {
            std::size_t x = (start + k) % cov.size();
            if (!cov[x]) return {ti, x};
        }
        throw Error("internal: tracker bookkeeping out of sync");
    };

    auto count_new = [&](const std::vector<std::size_t>& row) {
        std::size_t gain = 0;
        for (const auto& t : trackers)
            if (!t.covered[t.tuple_index(row)]) ++gain;
        return gain;
    };

    while (total_remaining > 0) {
        std::vector<std::size_t> best_row;
        std::size_t best_gain = 0;

        for (std::size_t cand = 0; cand < kCandidatesPerRow; ++cand) {
            std::vector<std::size_t> row(spec.domains.size(), kUnassigned);

            auto [ti, tuple] = pick_uncovered_seed(cand == 0);
            std::vector<std::size_t> seed_levels;
            trackers[ti].decode(tuple, seed_levels);
            for (std::size_t i = 0; i < trackers[ti].params.size(); ++i)
                row[trackers[ti].params[i]] = seed_levels[i];

            // Fill the remaining parameters in random order, each greedily.
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.index(i)]);
            for (std::size_t p : order) {
                if (row[p] != kUnassigned) continue;
                std::size_t best_level = 0;
                std::size_t best_score = 0;
                for (std::size_t lvl = 0; lvl < spec.domains[p].level_count(); ++lvl) {
                    std::size_t score = 0;
                    for (std::size_t tj : trackers_of[p]) {
                        const Tracker& t = trackers[tj];
                        bool ready = true;
                        for (std::size_t q : t.params)
                            if (q != p && row[q] == kUnassigned) {
                                ready = false;
                                break;
                            }
                        if (ready && !t.covered[t.tuple_index_with(row, p, lvl)]) ++score;
                    }
                    if (score > best_score) {  // ties keep the lowest level index
                        best_score = score;
                        best_level = lvl;
                    }
                }
                row[p] = best_level;
            }

            std::size_t gain = count_new(row);
            if (gain > best_gain) {
                best_gain = gain;
                best_row = std::move(row);
            }
        }

        // The deterministic seed candidate always covers >= 1 new tuple.
        for (auto& t : trackers) {
            std::size_t idx = t.tuple_index(best_row);
            if (!t.covered[idx]) {
                t.covered[idx] = 1;
                --t.remaining;
                --total_remaining;
            }
        }
        ca.rows.push_back(std::move(best_row));
    }

    CoverageReport check = verify_coverage(ca);
    if (!check.complete())
        throw Error("internal: generated covering array failed verification");
    return ca;
}

CoverageReport verify_coverage(const CoveringArray& ca) {
    const MixedStrengthSpec& spec = ca.spec;
    spec.validate();
    for (const auto& row : ca.rows) {
        if (row.size() != spec.domains.size())
            throw Error("covering array row width does not match the spec");
        for (std::size_t p = 0; p < row.size(); ++p)
            if (row[p] >= spec.domains[p].level_count())
                throw Error("row level " + std::to_string(row[p]) +
                            " is not in domain '" + spec.domains[p].name + "'");
    }

    auto deduped = required_subsets(spec);
    std::vector<Tracker> trackers;
    for (const auto& subset : deduped) trackers.emplace_back(spec, subset);
    for (const auto& row : ca.rows)
        for (auto& t : trackers) {
            std::size_t idx = t.tuple_index(row);
            if (!t.covered[idx]) {
                t.covered[idx] = 1;
                --t.remaining;
            }
        }

    CoverageReport report;
    for (const auto& t : trackers) {
        report.total_required += t.covered.size();
        report.total_covered += t.covered.size() - t.remaining;
    }

    // Per-scope accounting (scopes may overlap; each counts its own subsets).
    auto scope_stats = [&](const std::set<std::vector<std::size_t>>& subsets) {
        unsigned long long req = 0, cov = 0;
        for (const auto& t : trackers)
            if (subsets.count(t.params)) {
                req += t.covered.size();
                cov += t.covered.size() - t.remaining;
            }
        return std::pair{req, cov};
    };

    std::vector<std::size_t> all(spec.domains.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    {
        auto subsets = scope_subsets(all, spec.default_strength);
        auto [req, cov] = scope_stats(subsets);
        report.scopes.push_back({spec.default_strength, std::nullopt, req, cov});
    }
    for (const auto& g : spec.strength_groups) {
        std::vector<std::size_t> pool;
        for (const auto& p : g.parameters) pool.push_back(spec.domain_index(p));
        std::sort(pool.begin(), pool.end());
        auto subsets = scope_subsets(pool, g.strength);
        auto [req, cov] = scope_stats(subsets);
        report.scopes.push_back({g.strength, g.parameters, req, cov});
    }

    constexpr std::size_t kMaxMissing = 100;
    for (const auto& t : trackers) {
        if (report.missing.size() >= kMaxMissing) break;
        if (t.remaining == 0) continue;
        std::vector<std::size_t> levels;
        for (std::size_t x = 0; x < t.covered.size() && report.missing.size() < kMaxMissing;
             ++x) {
            if (t.covered[x]) continue;
            t.decode(x, levels);
            MissingTuple m;
            for (std::size_t i = 0; i < t.params.size(); ++i)
                m.assignment.emplace_back(spec.domains[t.params[i]].name,
                                          spec.domains[t.params[i]].level_value(levels[i]));
            report.missing.push_back(std::move(m));
        }
    }
    return report;
}

void write_ca_csv(const CoveringArray& ca, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot open '" + csv_path + "' for writing");
    for (std::size_t p = 0; p < ca.spec.domains.size(); ++p)
        out << (p ? "," : "") << ca.spec.domains[p].name;
    out << "\n";
    for (const auto& row : ca.rows) {
        for (std::size_t p = 0; p < row.size(); ++p)
            out << (p ? "," : "") << ca.spec.domains[p].level_value(row[p]);
        out << "\n";
    }
    if (!out.flush()) throw Error("failed writing '" + csv_path + "'");
}

CoveringArray read_ca_csv(const MixedStrengthSpec& spec, const std::string& csv_path) {
    spec.validate();
    std::ifstream in(csv_path);
    if (!in) throw Error("cannot open covering array '" + csv_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("covering array '" + csv_path + "' is empty");

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = s.find(',', start);
            if (pos == std::string::npos) {
                out.push_back(s.substr(start));
                break;
            }
            out.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return out;
    };

    auto header = split(line);
    std::vector<std::size_t> column_domain;
    for (const auto& name : header) column_domain.push_back(spec.domain_index(name));
    if (header.size() != spec.domains.size())
        throw Error("covering array header does not list every parameter");

    CoveringArray ca;
    ca.spec = spec;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != header.size())
            throw Error("covering array row has wrong field count");
        std::vector<std::size_t> row(spec.domains.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row[column_domain[c]] = spec.domains[column_domain[c]].level_index(fields[c]);
        ca.rows.push_back(std::move(row));
    }
    return ca;
}

}  // namespace stlf
