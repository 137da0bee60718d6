// ============================================================================
// stlf/requirements.hpp — the five driving-scenario requirement formulas
// ============================================================================
//
//   R1  system-level safety: the ego vehicle should not collide with an
//       object (conjunction over objects of [] !(dist < eps_dist)).
//   R2  sensor-level: a visible obstacle must be detected within t1.
//   R3  sensor-level: localization errors must not stay large for t1.
//   R4  sensor-to-system: a sensor fault sustained for t1 must not be
//       followed by a collision within (t1, t2].
//   R5  comfort: no sustained unnecessary hard braking (t1 window with no
//       predicted collision) and no three brake releases each within t2 of
//       the previous.
//
// Channel conventions (matching the perception scenario): dist_<i>,
// W_<i>_<sensor>, D_<i>_<sensor>, E_<i>_<sensor>, B, FC; boolean channels
// are encoded as +/-1.
//
// ============================================================================

#pragma once

#include <string>
#include <vector>

#include "stlf/formula.hpp"

namespace stlf {

struct RequirementParams {
    double eps_dist = 0.0;  // m, collision threshold
    double eps_err = 0.5;   // m, acceptable localization error
    double t1 = 0.6;        // s
    double t2 = 0.5;        // s
    std::vector<int> object_ids = {1};
    std::vector<std::string> sensors = {"combined"};

    void validate() const;
};

std::string chan_dist(int object);
std::string chan_w(int object, const std::string& sensor);
std::string chan_d(int object, const std::string& sensor);
std::string chan_e(int object, const std::string& sensor);

Formula build_R1(const RequirementParams& params);
Formula build_R2(const RequirementParams& params, int object, const std::string& sensor);
Formula build_R3(const RequirementParams& params, int object, const std::string& sensor);
Formula build_R4(const RequirementParams& params, int object, const std::string& sensor);
Formula build_R5(const RequirementParams& params);

/// Build a requirement by name ("R1".."R5"); R2-R4 conjoin over every
/// (object, sensor) pair in params.
Formula build_requirement(const std::string& name, const RequirementParams& params);

}  // namespace stlf
