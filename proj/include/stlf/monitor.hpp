// ============================================================================
// stlf/monitor.hpp — discrete-time robust semantics over traces
// ============================================================================
//
// robustness() implements the standard discrete-time robust semantics:
// true is +inf, a predicate is the signed distance of the combined sample
// point [y_i u_i p] into the predicate's set, negation flips sign, or is
// max, next evaluates one sample later (-inf past the end), and
//
//   [[phi1 U_I phi2]](sigma, i) =
//       max_{j : (t_j - t_i) in I} min([[phi2]](sigma, j),
//                                      min_{i <= k < j} [[phi1]](sigma, k))
//
// with an empty candidate set evaluating to -inf.  Candidate selection uses
// timestamps, not indices, so non-uniform sampling works.  The sugar
// operators (eventually, always, release, implies) are evaluated directly
// by their own min/max recursions, which makes the desugaring-equivalence
// tests meaningful rather than circular.
//
// boolean_satisfaction() is an independent boolean-semantics evaluator used
// as the soundness oracle; it never consults the robustness path.
//
// On finite traces the candidates of unbounded (or trailing-edge) intervals
// range over the available samples only; monitor_verdict() additionally
// reports whether extending the trace could change the verdict.
//
// ============================================================================

#pragma once

#include "stlf/formula.hpp"
#include "stlf/trace.hpp"

namespace stlf {

double robustness(const Formula& f, const Trace& tr, std::size_t i = 0);

bool boolean_satisfaction(const Formula& f, const Trace& tr, std::size_t i = 0);

/// Timestamp of the sample whose predicate distance the optimizing min/max
/// path selects (ties broken toward the earliest time).  For satisfied
/// formulas this is the critical (least-robust) witness time.
double worst_time(const Formula& f, const Trace& tr);

struct MonitorVerdict {
    double robustness = 0.0;
    bool satisfied = false;        // robustness > 0
    double worst_time = 0.0;
    bool inconclusive = false;     // robustness == 0 (soundness theorem is silent)
    bool extension_sensitive = false;  // verdict could change if the trace continued
};

MonitorVerdict monitor_verdict(const Formula& f, const Trace& tr);

}  // namespace stlf
