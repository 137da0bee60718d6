// Independent oracles: brute-force signed distance and hand-coded boolean
// checkers for the R2-R5 requirement patterns.  These deliberately avoid
// the library's monitor and distance code paths.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "stlf/predicate.hpp"

namespace stlf::testing {

/// Nearest-point search over a regular grid of `steps`^dims points spanning
/// point +/- extent in every referenced channel.  Accurate to about the
/// grid pitch; intended to confirm closed-form distances.
double brute_force_signed_distance(const std::map<std::string, double>& point,
                                   const PredicateSet& set, double extent = 25.0,
                                   int steps = 2001);

// Channel-array checkers.  Boolean channels arrive as +/-1 doubles; all
// window arithmetic uses timestamps.

bool r2_holds(const std::vector<double>& times, const std::vector<double>& w,
              const std::vector<double>& d, double t1);

bool r3_holds(const std::vector<double>& times, const std::vector<double>& w,
              const std::vector<double>& d, const std::vector<double>& e, double eps_err,
              double t1);

bool r4_holds(const std::vector<double>& times, const std::vector<double>& w,
              const std::vector<double>& d, const std::vector<double>& e,
              const std::vector<double>& dist, double eps_dist, double eps_err, double t1,
              double t2);

bool r5_holds(const std::vector<double>& times, const std::vector<double>& b,
              const std::vector<double>& fc, double t1, double t2);

}  // namespace stlf::testing
