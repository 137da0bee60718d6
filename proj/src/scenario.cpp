#include "stlf/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace stlf {

namespace {

double clamp(double v, double lo, double hi) { return std::max(lo, std::min(hi, v)); }

std::size_t step_count(double T, double dt) {
    if (!(T > 0.0)) throw Error("simulation time T must be positive");
    if (!(dt > 0.0)) throw Error("simulation step dt must be positive");
    double steps = T / dt;
    auto n = static_cast<std::size_t>(std::llround(steps));
    if (n == 0 || std::fabs(static_cast<double>(n) * dt - T) > 1e-9)
        throw Error("simulation time T must be a whole number of dt steps");
    return n;
}

void validate_input_series(const InputTrace& u, double T) {
    for (const auto& [name, series] : u.channels) {
        if (series.times.empty() || series.times.size() != series.values.size())
            throw Error("input channel '" + name + "' has malformed control points");
        for (std::size_t i = 1; i < series.times.size(); ++i)
            if (!(series.times[i - 1] < series.times[i]))
                throw Error("input channel '" + name +
                            "': timestamps not strictly increasing");
        if (series.times.back() > T)
            throw Error("input channel '" + name + "': timestamp exceeds T");
    }
}

}  // namespace

double interpolate_input(const InputSeries& series, double t) {
    if (series.times.empty()) throw Error("input series has no control points");
    if (t < series.times.front() - 1e-12)
        throw Error("input lookup before the first control point");
    if (t >= series.times.back()) return series.values.back();
    std::size_t hi = 1;
    while (series.times[hi] <= t) ++hi;
    if (series.interpolation == Interp::Hold) return series.values[hi - 1];
    double t0 = series.times[hi - 1], t1 = series.times[hi];
    double w = (t - t0) / (t1 - t0);
    return series.values[hi - 1] + w * (series.values[hi] - series.values[hi - 1]);
}

double interpolate_input(const InputTrace& u, double t, const std::string& channel) {
    auto it = u.channels.find(channel);
    if (it == u.channels.end()) throw Error("input channel '" + channel + "' not provided");
    return interpolate_input(it->second, t);
}

// ── two-car scenario ────────────────────────────────────────────────────────

double ego_acc_controller(const TwoCarState& s) {
    constexpr double kMinGap = 2.0;        // m, emergency full brake below
    constexpr double kHeadway = 0.25;      // s
    constexpr double kEngageMargin = 4.0;  // m beyond g* where the PD takes over
    constexpr double kSetSpeed = 40.0;     // m/s cruise target
    constexpr double kP = 0.3;
    constexpr double kD = 0.8;

    double gap = s.z_agent - s.z_ego;
    double desired = kMinGap + kHeadway * s.v_ego;
    if (gap < kMinGap) return -6.0;
    double acc;
    if (gap <= desired + kEngageMargin)
        acc = kP * (gap - desired) + kD * (s.v_agent - s.v_ego);
    else
        acc = 1.0 * (kSetSpeed - s.v_ego);
    return clamp(acc, -6.0, 3.0);
}

Trace simulate_two_car(const TwoCarState& x0, const InputTrace& u, double T, double dt) {
    if (!(x0.z_agent > x0.z_ego))
        throw Error("two_car: agent must start ahead of the ego vehicle");
    validate_input_series(u, T);
    const std::size_t n = step_count(T, dt);

    SignalSpace space;
    space.output_channels = {"z_ego", "z_agent", "v_ego", "v_agent"};
    space.input_channels = {"xi", "mu"};

    std::vector<double> times(n + 1);
    std::vector<std::vector<double>> cols(6, std::vector<double>(n + 1));

    TwoCarState s = x0;
    for (std::size_t i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) * dt;
        times[i] = t;
        double xi = interpolate_input(u, t, "xi");
        double mu = interpolate_input(u, t, "mu");
        cols[0][i] = s.z_ego;
        cols[1][i] = s.z_agent;
        cols[2][i] = s.v_ego;
        cols[3][i] = s.v_agent;
        cols[4][i] = xi;
        cols[5][i] = mu;
        if (i == n) break;
        double acc = clamp(ego_acc_controller(s), -6.0, 3.0);
        s.z_ego += dt * s.v_ego;
        s.v_ego = std::max(0.0, s.v_ego + dt * acc);
        s.z_agent += dt * mu * s.v_agent;
        s.v_agent = std::max(0.0, s.v_agent + dt * xi);
    }
    double duration = times.back();
    return Trace(std::move(space), std::move(times), std::move(cols), {}, duration);
}

SimulatorFn make_two_car_simulator(double dt) {
    SimulatorFn sim;
    sim.name = "two_car";
    sim.dt = dt;
    sim.space.output_channels = {"z_ego", "z_agent", "v_ego", "v_agent"};
    sim.space.input_channels = {"xi", "mu"};
    sim.x0_schema = {"z_ego", "v_ego", "z_agent", "v_agent"};
    sim.run = [dt](const std::map<std::string, double>& x0, const InputTrace& u,
                   const std::map<std::string, double>&, double T) {
        TwoCarState s;
        auto get = [&](const char* k, double dflt) {
            auto it = x0.find(k);
            return it == x0.end() ? dflt : it->second;
        };
        s.z_ego = get("z_ego", 0.0);
        s.v_ego = get("v_ego", 20.0);
        s.z_agent = get("z_agent", 40.0);
        s.v_agent = get("v_agent", 20.0);
        return simulate_two_car(s, u, T, dt);
    };
    return sim;
}

// ── CTRV ────────────────────────────────────────────────────────────────────

std::vector<CtrvState> ctrv_predict(const CtrvState& s0, double horizon, double dt) {
    if (!(dt > 0.0)) throw Error("ctrv_predict: dt must be positive");
    if (horizon < 0.0) throw Error("ctrv_predict: horizon must be >= 0");
    auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    std::vector<CtrvState> out;
    out.reserve(steps + 1);
    CtrvState s = s0;
    out.push_back(s);
    for (std::size_t k = 0; k < steps; ++k) {
        if (std::fabs(s.yaw_rate) > 1e-6) {
            double ratio = s.speed / s.yaw_rate;
            s.x += ratio * (std::sin(s.heading + s.yaw_rate * dt) - std::sin(s.heading));
            s.y += ratio * (-std::cos(s.heading + s.yaw_rate * dt) + std::cos(s.heading));
        } else {
            s.x += s.speed * std::cos(s.heading) * dt;
            s.y += s.speed * std::sin(s.heading) * dt;
        }
        s.heading += s.yaw_rate * dt;
        out.push_back(s);
    }
    return out;
}

double ctrv_min_future_distance(const CtrvState& ego, const CtrvState& agent, double horizon,
                                double dt) {
    auto pe = ctrv_predict(ego, horizon, dt);
    auto pa = ctrv_predict(agent, horizon, dt);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pe.size(); ++k) {
        double dx = pe[k].x - pa[k].x;
        double dy = pe[k].y - pa[k].y;
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

// ── perception-fault scenario ───────────────────────────────────────────────

namespace {

bool in_window(double t, double start, double duration) {
    return t >= start && t <= start + duration;
}

}  // namespace

Trace simulate_perception_scenario(const PerceptionParams& p, double T, double dt) {
    const std::size_t n = step_count(T, dt);
    if (p.sensors.empty()) throw Error("perception: at least one sensor is required");
    for (const auto& s : p.sensors)
        if (s != "ccd" && s != "lidar" && s != "radar")
            throw Error("perception: unknown sensor '" + s + "'");
    for (const auto& [sensor, f] : p.faults) {
        if (std::find(p.sensors.begin(), p.sensors.end(), sensor) == p.sensors.end())
            throw Error("perception: fault declared for unknown sensor '" + sensor + "'");
        if (f.dropout_duration < 0 || f.error_duration < 0 || f.error_magnitude < 0)
            throw Error("perception: fault windows must be non-negative");
        if (f.dropout_start < 0 || f.dropout_start + f.dropout_duration > T)
            throw Error("perception: dropout window outside [0, T]");
        if (f.error_start < 0 || f.error_start + f.error_duration > T)
            throw Error("perception: error window outside [0, T]");
    }

    // Geometry: the crossing point is the origin; the ego drives +x along
    // y = 0, the pedestrian walks +y from below.
    double ego_x = -p.ego_gap;
    double ego_v = p.ego_speed;
    double ped_y = -p.ped_offset;
    const double footprints = PerceptionParams::kEgoRadius + PerceptionParams::kPedRadius;

    {
        double d0 = std::hypot(ego_x, ped_y) - footprints;
        if (d0 <= 0.0) throw Error("perception: objects initialized overlapping");
    }

    std::vector<std::string> sensor_list = p.sensors;
    sensor_list.push_back("combined");

    SignalSpace space;
    space.output_channels = {"dist_1", "br"};
    space.channel_kinds["dist_1"] = ChannelKind::Real;
    space.channel_kinds["br"] = ChannelKind::Real;
    for (const auto& s : sensor_list) {
        for (const char* prefix : {"W_1_", "D_1_"}) {
            std::string name = prefix + s;
            space.output_channels.push_back(name);
            space.channel_kinds[name] = ChannelKind::Boolean;
        }
        std::string err = "E_1_" + s;
        space.output_channels.push_back(err);
        space.channel_kinds[err] = ChannelKind::Real;
    }
    space.output_channels.push_back("B");
    space.channel_kinds["B"] = ChannelKind::Boolean;
    space.output_channels.push_back("FC");
    space.channel_kinds["FC"] = ChannelKind::Boolean;
    space.output_channels.push_back("ego_x");
    space.output_channels.push_back("ped_y");
    space.output_channels.push_back("v_ego");

    std::map<std::string, double> trace_params = {
        {"ego_speed", p.ego_speed}, {"ego_gap", p.ego_gap},
        {"ped_speed", p.ped_speed}, {"ped_offset", p.ped_offset}};
    for (const auto& [sensor, f] : p.faults) {
        trace_params["dropout_start_" + sensor] = f.dropout_start;
        trace_params["dropout_duration_" + sensor] = f.dropout_duration;
        trace_params["error_start_" + sensor] = f.error_start;
        trace_params["error_duration_" + sensor] = f.error_duration;
        trace_params["error_magnitude_" + sensor] = f.error_magnitude;
    }
    space.parameter_names.clear();
    for (const auto& [k, _] : trace_params) space.parameter_names.push_back(k);

    const std::size_t ncols = space.output_channels.size();
    std::vector<double> times(n + 1);
    std::vector<std::vector<double>> cols(ncols, std::vector<double>(n + 1));
    std::map<std::string, std::size_t> col_of;
    for (std::size_t c = 0; c < ncols; ++c) col_of[space.output_channels[c]] = c;

    const double cos_half =
        std::cos(PerceptionParams::kSensorHalfAngle * M_PI / 180.0);

    for (std::size_t i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) * dt;
        times[i] = t;

        double dx = 0.0 - ego_x;
        double dy = ped_y - 0.0;
        double center_dist = std::hypot(dx, dy);
        double dist = center_dist - footprints;

        // Per-sensor channels.  Visibility is a pure range/bearing cone test
        // (heading +x); detection drops inside the dropout window; the error
        // signal is baseline noise plus the injected spike.
        bool any_visible = false, any_detected = false;
        double fused_error = std::numeric_limits<double>::infinity();
        double min_error_all = std::numeric_limits<double>::infinity();
        for (const auto& s : p.sensors) {
            bool visible = false;
            if (center_dist <= PerceptionParams::kSensorRange) {
                double along = center_dist > 1e-12 ? dx / center_dist : 1.0;
                visible = along >= cos_half;
            }
            const SensorFault* f = nullptr;
            auto itf = p.faults.find(s);
            if (itf != p.faults.end()) f = &itf->second;
            bool dropped = f && f->dropout_duration > 0 &&
                           in_window(t, f->dropout_start, f->dropout_duration);
            bool detected = visible && !dropped;
            double err = PerceptionParams::kBaselineError;
            if (f && f->error_duration > 0 && in_window(t, f->error_start, f->error_duration))
                err += f->error_magnitude;

            cols[col_of["W_1_" + s]][i] = visible ? 1.0 : -1.0;
            cols[col_of["D_1_" + s]][i] = detected ? 1.0 : -1.0;
            cols[col_of["E_1_" + s]][i] = err;
            any_visible = any_visible || visible;
            any_detected = any_detected || detected;
            if (detected) fused_error = std::min(fused_error, err);
            min_error_all = std::min(min_error_all, err);
        }
        if (!std::isfinite(fused_error)) fused_error = min_error_all;
        cols[col_of["W_1_combined"]][i] = any_visible ? 1.0 : -1.0;
        cols[col_of["D_1_combined"]][i] = any_detected ? 1.0 : -1.0;
        cols[col_of["E_1_combined"]][i] = fused_error;

        // Braking policy on the fused perceived state: the perceived
        // pedestrian is displaced laterally by the fused error.
        double br = 0.0;
        if (any_detected) {
            CtrvState ego_pred{ego_x, 0.0, 0.0, ego_v, 0.0};
            CtrvState ped_pred{0.0, ped_y - fused_error, M_PI / 2.0, p.ped_speed, 0.0};
            double predicted = ctrv_min_future_distance(ego_pred, ped_pred) - footprints;
            br = clamp((PerceptionParams::kRiskDistance - predicted) /
                           PerceptionParams::kRiskDistance,
                       0.0, 1.0);
        }
        cols[col_of["br"]][i] = br;
        cols[col_of["B"]][i] = br > 0.5 ? 1.0 : -1.0;

        // Future-collision flag from ground truth.
        CtrvState ego_true{ego_x, 0.0, 0.0, ego_v, 0.0};
        CtrvState ped_true{0.0, ped_y, M_PI / 2.0, p.ped_speed, 0.0};
        double d_f_min = ctrv_min_future_distance(ego_true, ped_true);
        cols[col_of["FC"]][i] = d_f_min < PerceptionParams::kFcThreshold ? 1.0 : -1.0;

        cols[col_of["dist_1"]][i] = dist;
        cols[col_of["ego_x"]][i] = ego_x;
        cols[col_of["ped_y"]][i] = ped_y;
        cols[col_of["v_ego"]][i] = ego_v;

        if (i == n) break;
        ego_x += dt * ego_v;
        ego_v = std::max(0.0, ego_v - dt * br * PerceptionParams::kMaxBrake);
        ped_y += dt * p.ped_speed;
    }

    double duration = times.back();
    return Trace(std::move(space), std::move(times), std::move(cols),
                 std::move(trace_params), duration);
}

PerceptionParams perception_params_from_map(const std::map<std::string, double>& p,
                                            const std::vector<std::string>& sensors) {
    PerceptionParams out;
    out.sensors = sensors;
    auto get = [&](const char* k, double dflt) {
        auto it = p.find(k);
        return it == p.end() ? dflt : it->second;
    };
    out.ego_speed = get("ego_speed", out.ego_speed);
    out.ego_gap = get("ego_gap", out.ego_gap);
    out.ped_speed = get("ped_speed", out.ped_speed);
    out.ped_offset = get("ped_offset", out.ped_offset);
    for (const auto& s : sensors) {
        SensorFault f;
        f.dropout_start = get(("dropout_start_" + s).c_str(), 0.0);
        f.dropout_duration = get(("dropout_duration_" + s).c_str(), 0.0);
        f.error_start = get(("error_start_" + s).c_str(), 0.0);
        f.error_duration = get(("error_duration_" + s).c_str(), 0.0);
        f.error_magnitude = get(("error_magnitude_" + s).c_str(), 0.0);
        if (f.dropout_duration > 0 || f.error_duration > 0 || f.error_magnitude > 0)
            out.faults[s] = f;
    }
    return out;
}

SimulatorFn make_perception_simulator(double dt) {
    SimulatorFn sim;
    sim.name = "perception";
    sim.dt = dt;
    sim.param_schema = {"ego_speed",      "ego_gap",        "ped_speed",
                        "ped_offset",     "sensor_count",   "dropout_start_<s>",
                        "dropout_duration_<s>", "error_start_<s>",
                        "error_duration_<s>",   "error_magnitude_<s>"};
    sim.run = [dt](const std::map<std::string, double>&, const InputTrace&,
                   const std::map<std::string, double>& p, double T) {
        std::vector<std::string> sensors = {"ccd"};
        auto it = p.find("sensor_count");  // optional: 1..3 -> ccd, lidar, radar
        if (it != p.end()) {
            sensors.clear();
            int count = static_cast<int>(it->second);
            const char* names[] = {"ccd", "lidar", "radar"};
            for (int k = 0; k < count && k < 3; ++k) sensors.push_back(names[k]);
        }
        return simulate_perception_scenario(perception_params_from_map(p, sensors), T, dt);
    };
    return sim;
}

}  // namespace stlf
