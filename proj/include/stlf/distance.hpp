// ============================================================================
// stlf/distance.hpp — signed distance from points to predicate sets
// ============================================================================
//
// Dist(s, A) is positive when s is in A (distance to the complement) and
// negative otherwise (distance to A), +inf for the full space and -inf for
// the empty set.  For unions of halfspace conjunctions under the Euclidean
// metric the value is computed exactly:
//
//   * outside: min over disjuncts of the exact projection distance onto
//     each convex polyhedron (active-set enumeration over face subsets);
//   * inside: the complement is expanded by De Morgan into a union of
//     polyhedra (one complemented face chosen per disjunct) and the same
//     exact projection applies.
//
// The enumeration is exponential in the number of faces per predicate,
// which is small (<= a handful of channels) for specification predicates.
//
// ============================================================================

#pragma once

#include <map>
#include <string>

#include "stlf/predicate.hpp"

namespace stlf {

struct Metric {
    enum class Kind { Euclidean };
    Kind kind = Kind::Euclidean;
};

double metric_distance(const Metric& m, const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b);

/// Signed distance from point to set under metric m.  Throws when the point
/// is missing a channel referenced by the set.
double signed_distance(const std::map<std::string, double>& point, const PredicateSet& set,
                       const Metric& m = {});

}  // namespace stlf
