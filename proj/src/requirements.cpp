#include "stlf/requirements.hpp"

#include <algorithm>

namespace stlf {

namespace {

const char* kSensorTags[] = {"ccd", "lidar", "radar", "combined"};

void check_sensor(const std::string& sensor) {
    for (const char* tag : kSensorTags)
        if (sensor == tag) return;
    throw Error("unknown sensor tag '" + sensor + "'");
}

Formula conjoin(const std::vector<Formula>& fs) {
    if (fs.empty()) throw Error("cannot conjoin an empty requirement list");
    Formula out = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::conj(out, fs[i]);
    return out;
}

}  // namespace

void RequirementParams::validate() const {
    if (eps_dist < 0) throw Error("eps_dist must be >= 0");
    if (!(eps_err > 0)) throw Error("eps_err must be > 0");
    if (!(t1 > 0)) throw Error("t1 must be > 0");
    if (!(t2 > 0)) throw Error("t2 must be > 0");
    for (const auto& s : sensors) check_sensor(s);
}

std::string chan_dist(int object) { return "dist_" + std::to_string(object); }
std::string chan_w(int object, const std::string& sensor) {
    return "W_" + std::to_string(object) + "_" + sensor;
}
std::string chan_d(int object, const std::string& sensor) {
    return "D_" + std::to_string(object) + "_" + sensor;
}
std::string chan_e(int object, const std::string& sensor) {
    return "E_" + std::to_string(object) + "_" + sensor;
}

Formula build_R1(const RequirementParams& params) {
    params.validate();
    if (params.object_ids.empty()) throw Error("R1 needs at least one object");
    std::vector<Formula> parts;
    for (int obj : params.object_ids) {
        // [] !(dist(i, ego) < eps_dist)
        Formula coll = Formula::linear({{chan_dist(obj), 1.0}}, Relation::Lt, params.eps_dist);
        parts.push_back(Formula::always(Formula::negate(coll)));
    }
    return conjoin(parts);
}

Formula build_R2(const RequirementParams& params, int object, const std::string& sensor) {
    params.validate();
    check_sensor(sensor);
    Formula w = Formula::boolean_channel(chan_w(object, sensor));
    Formula d = Formula::boolean_channel(chan_d(object, sensor));
    // []((W && !D) -> <>_[0,t1] (D || !W))
    Formula antecedent = Formula::conj(w, Formula::negate(d));
    Formula consequent = Formula::eventually(Interval(0.0, params.t1),
                                             Formula::disj(d, Formula::negate(w)));
    return Formula::always(Formula::implies(antecedent, consequent));
}

Formula build_R3(const RequirementParams& params, int object, const std::string& sensor) {
    params.validate();
    check_sensor(sensor);
    Formula w = Formula::boolean_channel(chan_w(object, sensor));
    Formula d = Formula::boolean_channel(chan_d(object, sensor));
    Formula err_high =
        Formula::linear({{chan_e(object, sensor), 1.0}}, Relation::Gt, params.eps_err);
    Formula err_low =
        Formula::linear({{chan_e(object, sensor), 1.0}}, Relation::Lt, params.eps_err);
    // []((W && (!D || E > eps)) -> <>_[0,t1] (!W || (D && E < eps)))
    Formula poor = Formula::conj(w, Formula::disj(Formula::negate(d), err_high));
    Formula good = Formula::disj(Formula::negate(w), Formula::conj(d, err_low));
    return Formula::always(
        Formula::implies(poor, Formula::eventually(Interval(0.0, params.t1), good)));
}

Formula build_R4(const RequirementParams& params, int object, const std::string& sensor) {
    params.validate();
    check_sensor(sensor);
    if (!(params.t2 > params.t1)) throw Error("R4 requires t2 > t1");
    Formula w = Formula::boolean_channel(chan_w(object, sensor));
    Formula d = Formula::boolean_channel(chan_d(object, sensor));
    Formula err_high =
        Formula::linear({{chan_e(object, sensor), 1.0}}, Relation::Gt, params.eps_err);
    Formula coll =
        Formula::linear({{chan_dist(object), 1.0}}, Relation::Lt, params.eps_dist);
    // [] !( []_[0,t1](!coll && W && (!D || E > eps)) && <>_(t1,t2] coll )
    Formula sustained_fault = Formula::always(
        Interval(0.0, params.t1),
        Formula::conj(Formula::conj(Formula::negate(coll), w),
                      Formula::disj(Formula::negate(d), err_high)));
    Formula then_collision =
        Formula::eventually(Interval(params.t1, params.t2, false, true), coll);
    return Formula::always(
        Formula::negate(Formula::conj(sustained_fault, then_collision)));
}

Formula build_R5(const RequirementParams& params) {
    params.validate();
    Formula b = Formula::boolean_channel("B");
    Formula fc = Formula::boolean_channel("FC");
    // edge = B && X !B : the brake-release event
    auto edge = [&] { return Formula::conj(b, Formula::next(Formula::negate(b))); };
    // clause 1: ! []_[0,t1] (B && !FC)
    Formula sustained = Formula::negate(Formula::always(
        Interval(0.0, params.t1), Formula::conj(b, Formula::negate(fc))));
    // clause 2: !( edge && <>_(0,t2] (edge && <>_(0,t2] edge) )
    Interval win(0.0, params.t2, false, true);
    Formula chain = Formula::negate(Formula::conj(
        edge(), Formula::eventually(win, Formula::conj(edge(), Formula::eventually(
                                                                   win, edge())))));
    return Formula::always(Formula::conj(sustained, chain));
}

Formula build_requirement(const std::string& name, const RequirementParams& params) {
    if (name == "R1") return build_R1(params);
    if (name == "R5") return build_R5(params);
    if (name == "R2" || name == "R3" || name == "R4") {
        if (params.object_ids.empty() || params.sensors.empty())
            throw Error(name + " needs at least one object and one sensor");
        std::vector<Formula> parts;
        for (int obj : params.object_ids)
            for (const auto& s : params.sensors) {
                if (name == "R2") parts.push_back(build_R2(params, obj, s));
                if (name == "R3") parts.push_back(build_R3(params, obj, s));
                if (name == "R4") parts.push_back(build_R4(params, obj, s));
            }
        return conjoin(parts);
    }
    throw Error("unknown requirement '" + name + "' (expected R1..R5)");
}

}  // namespace stlf
