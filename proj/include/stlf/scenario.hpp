// ============================================================================
// stlf/scenario.hpp — desk-scale deterministic simulators
// ============================================================================
//
// Implements the scenario contract sim: (x0, u, p, T) -> trace with
// fixed-step forward Euler integration.  Two scenarios are built in:
//
//   two_car      — an ego vehicle with a longitudinal ACC following an
//                  adversarial agent with integrator dynamics
//                  (z_a' = mu * v_a, v_a' = xi, velocities clamped at 0).
//   perception   — an abstract perception-fault channel model: a pedestrian
//                  crossing in front of the ego on straight-line paths,
//                  with per-sensor visibility W, detection D (dropout
//                  windows), localization error E (baseline + injected
//                  spikes), exact object distance, a braking policy on the
//                  fused perceived state (br, B = br > 0.5), and the
//                  CTRV-based future-collision flag FC = (d_f,min < 0.5).
//
// Simulators are pure: identical inputs give byte-identical traces.
//
// ============================================================================

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stlf/trace.hpp"

namespace stlf {

// ── input traces ────────────────────────────────────────────────────────────

enum class Interp { Linear, Hold };

struct InputSeries {
    std::vector<double> times;   // strictly increasing, times.front() == t0
    std::vector<double> values;
    Interp interpolation = Interp::Linear;
};

struct InputTrace {
    std::map<std::string, InputSeries> channels;

    static InputTrace constant(const std::string& channel, double value,
                               Interp interp = Interp::Hold) {
        InputTrace u;
        u.channels[channel] = InputSeries{{0.0}, {value}, interp};
        return u;
    }
};

/// Piecewise-linear (real channels) or zero-order-hold (discrete channels)
/// lookup; values hold constant after the last control point.  Throws when
/// t precedes the first control point.
double interpolate_input(const InputSeries& series, double t);
double interpolate_input(const InputTrace& u, double t, const std::string& channel);

// ── generic simulator handle ────────────────────────────────────────────────

struct SimulatorFn {
    std::string name;
    SignalSpace space;
    double dt = 0.05;
    std::vector<std::string> x0_schema;     // accepted initial-condition fields
    std::vector<std::string> param_schema;  // accepted scenario parameters
    std::function<Trace(const std::map<std::string, double>& x0, const InputTrace& u,
                        const std::map<std::string, double>& p, double T)>
        run;
};

// ── two-car scenario ────────────────────────────────────────────────────────

struct TwoCarState {
    double z_ego = 0.0;
    double v_ego = 0.0;
    double z_agent = 0.0;
    double v_agent = 0.0;
};

/// Longitudinal ACC: follow-gap PD inside the engagement zone, cruise
/// toward a set speed outside it, full brake below 2 m.  Deliberately not a
/// safe ACC: a fast approach can outrun the late engagement.
double ego_acc_controller(const TwoCarState& state);

/// Forward-Euler two-car simulation at fixed dt; T must be a whole number
/// of steps.  Outputs z_ego, z_agent plus auxiliary v_ego, v_agent; inputs
/// xi (linear interpolation) and mu (hold) are resampled onto the trace.
Trace simulate_two_car(const TwoCarState& x0, const InputTrace& u, double T,
                       double dt = 0.05);

SimulatorFn make_two_car_simulator(double dt = 0.05);

// ── CTRV prediction ─────────────────────────────────────────────────────────

struct CtrvState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // rad
    double speed = 0.0;    // m/s, >= 0
    double yaw_rate = 0.0; // rad/s
};

/// Closed-form constant-turn-rate-and-velocity rollout; returns the state
/// at t = 0, dt, ..., floor(horizon/dt)*dt (start state included).
std::vector<CtrvState> ctrv_predict(const CtrvState& s, double horizon, double dt);

/// Minimum Euclidean distance between the two synchronized predictions.
double ctrv_min_future_distance(const CtrvState& ego, const CtrvState& agent,
                                double horizon = 3.0, double dt = 0.1);

// ── perception-fault scenario ───────────────────────────────────────────────

struct SensorFault {
    double dropout_start = 0.0;     // detection gap window [start, start+duration]
    double dropout_duration = 0.0;
    double error_start = 0.0;       // localization spike window
    double error_duration = 0.0;
    double error_magnitude = 0.0;   // added to the 0.1 m baseline
};

struct PerceptionParams {
    double ego_speed = 15.0;        // m/s, initial cruise speed
    double ego_gap = 30.0;          // m from ego start to the crossing point
    double ped_speed = 1.5;         // m/s
    double ped_offset = 3.0;        // m from pedestrian start to the ego lane
    std::vector<std::string> sensors = {"ccd"};
    std::map<std::string, SensorFault> faults;  // keyed by sensor name

    static constexpr double kSensorRange = 60.0;      // m
    static constexpr double kSensorHalfAngle = 60.0;  // degrees
    static constexpr double kBaselineError = 0.1;     // m
    static constexpr double kEgoRadius = 1.0;         // m footprint
    static constexpr double kPedRadius = 0.3;         // m footprint
    static constexpr double kRiskDistance = 6.0;      // m, braking ramp start
    static constexpr double kMaxBrake = 8.0;          // m/s^2
    static constexpr double kFcThreshold = 0.5;       // m, FC flag
};

/// Output channels: dist_1, br plus, per sensor s in sensors + "combined",
/// boolean W_1_s, D_1_s and real E_1_s, plus boolean B and FC.
Trace simulate_perception_scenario(const PerceptionParams& p, double T, double dt = 0.05);

/// Generic handle; x0/u unused (geometry and faults arrive through p).
SimulatorFn make_perception_simulator(double dt = 0.05);

/// Numeric parameter map <-> PerceptionParams (sensor faults are keyed as
/// "<field>_<sensor>", e.g. "dropout_start_ccd").
PerceptionParams perception_params_from_map(const std::map<std::string, double>& p,
                                            const std::vector<std::string>& sensors);

}  // namespace stlf
