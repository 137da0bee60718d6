// ============================================================================
// stlf/trace.hpp — simulation traces: timestamped samples plus parameters
// ============================================================================
//
// A trace is the triple (y, u, p): output and input samples on a shared,
// strictly increasing time base, plus a constant parameter vector.  Traces
// are immutable once built and stored column-wise for fast monitor access.
//
// ============================================================================

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlf/interval.hpp"

namespace stlf {

enum class ChannelKind { Real, Boolean };

struct SignalSpace {
    std::vector<std::string> output_channels;
    std::vector<std::string> input_channels;
    std::vector<std::string> parameter_names;
    std::map<std::string, ChannelKind> channel_kinds;  // default Real if absent

    ChannelKind kind_of(const std::string& name) const {
        auto it = channel_kinds.find(name);
        return it == channel_kinds.end() ? ChannelKind::Real : it->second;
    }

    bool has_channel(const std::string& name) const;
    bool has_parameter(const std::string& name) const;

    /// Output channels followed by input channels (the trace column order).
    std::vector<std::string> sample_channels() const;

    /// Throws unless all names are unique across the three groups.
    void validate() const;
};

struct Sample {
    double time = 0.0;
    std::map<std::string, double> values;
};

class Trace {
public:
    Trace(SignalSpace space, std::vector<Sample> samples,
          std::map<std::string, double> params, double duration);

    /// Column-wise constructor: columns must match space.sample_channels().
    Trace(SignalSpace space, std::vector<double> times,
          std::vector<std::vector<double>> columns,
          std::map<std::string, double> params, double duration);

    const SignalSpace& space() const { return space_; }
    const std::vector<double>& times() const { return times_; }
    double duration() const { return duration_; }
    const std::map<std::string, double>& params() const { return params_; }

    std::size_t sample_count() const { return times_.size(); }
    /// Index of the last sample (N, where sample_count() == N+1).
    std::size_t last_index() const { return times_.size() - 1; }

    double time_at(std::size_t i) const { return times_.at(i); }
    Sample sample(std::size_t i) const;

    /// Column lookup; nullptr when name is not a sampled channel.
    const std::vector<double>* column(const std::string& name) const;
    /// Parameter lookup; nullopt when name is not a parameter.
    std::optional<double> parameter(const std::string& name) const;

private:
    SignalSpace space_;
    std::vector<std::string> channel_order_;
    std::map<std::string, std::size_t> channel_index_;
    std::vector<double> times_;
    std::vector<std::vector<double>> columns_;  // one per channel
    std::map<std::string, double> params_;
    double duration_ = 0.0;
};

// ── validation ──────────────────────────────────────────────────────────────

struct TraceViolation {
    enum class Kind { Monotonicity, DurationMismatch, Empty };
    Kind kind;
    std::size_t index;  // sample index for Monotonicity
    std::string message;
};

struct ValidationReport {
    std::vector<TraceViolation> violations;
    bool valid() const { return violations.empty(); }
};

/// Report-style check of the trace invariants: non-empty, strictly
/// increasing timestamps, last timestamp equal to the declared duration.
ValidationReport validate_trace(const Trace& tr);

// ── file format ─────────────────────────────────────────────────────────────
//
// CSV with header `time,<channel>,...` (output channels then input
// channels), one row per sample, values serialized with 17 significant
// digits so the round-trip is bit-exact.  A JSON sidecar carries the
// SignalSpace, the parameter vector, and the duration.

void write_trace_csv(const Trace& tr, const std::string& csv_path,
                     const std::string& meta_path);
Trace read_trace_csv(const std::string& csv_path, const std::string& meta_path);

/// Default sidecar path: "<base>.meta.json" where base strips a ".csv" suffix.
std::string default_meta_path(const std::string& csv_path);

}  // namespace stlf
