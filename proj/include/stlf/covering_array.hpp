// ============================================================================
// stlf/covering_array.hpp — mixed-strength covering arrays
// ============================================================================
//
// A covering array CA(t, k, (v_1..v_k)) is a test matrix over k parameters
// in which every t-way combination of parameter levels appears in at least
// one row; it degenerates to the exhaustive product when t = k.  Mixed
// strength applies a higher t to designated parameter subsets.  Generation
// is greedy one-row-at-a-time (AETG style): each row is the best of a pool
// of candidate rows, each seeded from an uncovered tuple and completed by
// locally maximizing newly covered tuples (ties to the lowest level index).
// The result is verified internally and is best-effort minimal, not
// provably minimal.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stlf/interval.hpp"

namespace stlf {

struct ParameterDomain {
    std::string name;
    std::vector<std::string> symbolic_levels;            // discrete domains
    std::optional<std::pair<double, double>> range;      // continuous domains
    int continuous_levels = 0;

    static ParameterDomain discrete(std::string name, std::vector<std::string> levels);
    static ParameterDomain continuous(std::string name, double lo, double hi, int levels);

    bool is_continuous() const { return range.has_value(); }
    std::size_t level_count() const {
        return is_continuous() ? static_cast<std::size_t>(continuous_levels)
                               : symbolic_levels.size();
    }
    /// Representative numeric value of a continuous level (evenly spaced,
    /// endpoints included when level_count >= 2).
    double level_number(std::size_t idx) const;
    /// Printable level value (the symbolic value, or the representative
    /// number serialized with 17 significant digits).
    std::string level_value(std::size_t idx) const;
    /// Inverse of level_value; throws when the value is not in the domain.
    std::size_t level_index(const std::string& value) const;

    void validate() const;
};

struct StrengthGroup {
    std::vector<std::string> parameters;
    int strength = 0;
};

struct MixedStrengthSpec {
    std::vector<ParameterDomain> domains;
    int default_strength = 2;
    std::vector<StrengthGroup> strength_groups;

    std::size_t parameter_count() const { return domains.size(); }
    std::size_t domain_index(const std::string& name) const;
    void validate() const;
};

struct CoveringArray {
    MixedStrengthSpec spec;
    std::vector<std::vector<std::size_t>> rows;  // level index per parameter
};

/// Exact number of distinct required tuples: the sum over every required
/// parameter subset of the product of its level counts, with subsets
/// required by multiple strength scopes counted once.
unsigned long long count_required_tuples(const MixedStrengthSpec& spec);

CoveringArray generate_ca(const MixedStrengthSpec& spec, std::uint64_t seed);

struct MissingTuple {
    std::vector<std::pair<std::string, std::string>> assignment;  // (parameter, value)
};

struct ScopeCoverage {
    int strength = 0;
    std::optional<std::vector<std::string>> parameters;  // nullopt: default scope
    unsigned long long required = 0;
    unsigned long long covered = 0;
};

struct CoverageReport {
    std::vector<ScopeCoverage> scopes;
    unsigned long long total_required = 0;  // deduplicated across scopes
    unsigned long long total_covered = 0;
    std::vector<MissingTuple> missing;      // at most 100 listed

    bool complete() const { return total_covered == total_required; }
};

CoverageReport verify_coverage(const CoveringArray& ca);

// CSV (header = parameter names, one row per test) and a JSON sidecar with
// the spec and coverage report.
void write_ca_csv(const CoveringArray& ca, const std::string& csv_path);
void write_ca_sidecar(const CoveringArray& ca, const CoverageReport& report,
                      const std::string& json_path);
CoveringArray read_ca_csv(const MixedStrengthSpec& spec, const std::string& csv_path);

}  // namespace stlf
