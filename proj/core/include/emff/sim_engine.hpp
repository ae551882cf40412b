#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emff/amff.hpp"
#include "emff/estimator.hpp"
#include "emff/formation.hpp"
#include "emff/testbed1d.hpp"

namespace emff {

enum class RunMode { open_loop, closed_loop };

/// Initial 1D state of one satellite on the track.
struct SatelliteInit {
    double position = 0.0; // m
    double velocity = 0.0; // m/s
};

/// Desired-separation switch for multi-maneuver runs: at `time` the desired
/// relative positions of the listed ordered pairs are replaced.
struct SetpointSwitch {
    double time = 0.0; // s
    std::map<PairKey, double> desired; // m, ordered pair -> new d_ij
};

struct Scenario {
    std::string name;
    std::vector<SatelliteInit> sats;
    double sat_mass = 0.0;   // kg, identical units
    double damping = 0.0;    // N*s/m, applied to every body
    FormationGraph graph;
    FrequencyPlan plan;
    CoilSpec coil;
    KalmanConfig kalman;     // kalman.period must equal plan.period
    DeadBand band{0.015, 0.021};
    double duration = 0.0;   // s
    double dt = 5e-4;        // s
    double control_on = 0.0; // s, amplitudes are zero before this time
    double noise_var = 0.0;  // m^2, injected measurement noise (may be 0; the
                             // filter's design variance is kalman.meas_var)
    std::uint64_t seed = 0;
    RunMode mode = RunMode::closed_loop;
    std::map<PairKey, double> open_loop_currents; // A, used in open_loop mode
    std::optional<SetpointSwitch> setpoint_switch;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
    /// Control steps in the run (telemetry has steps()+1 rows).
    long steps() const;
};

/// One logged quantity set for an ordered pair at a control tick.
struct PairSample {
    double q = 0.0;      // m, noisy relative-position measurement
    double r_hat = 0.0;  // m
    double v_hat = 0.0;  // m/s
    double current = 0.0; // A, saturated amplitude applied over the window
    double f_hat = 0.0;  // N, approximate average force from the applied amplitudes
};

struct TelemetryRow {
    double t = 0.0; // s
    std::vector<PairSample> pairs; // indexed like Telemetry::pair_order
};

struct Telemetry {
    std::vector<PairKey> pair_order; // sorted ordered pairs (i,j), j in N_i
    std::vector<TelemetryRow> rows;
    // Fine-grained true states, recorded when Scenario-independent callers ask
    // for them through run_scenario's log_fine flag.
    std::vector<double> fine_t;
    std::vector<std::vector<double>> fine_pos; // [step][satellite]
    std::vector<std::vector<double>> fine_vel;
    double momentum_drift = 0.0; // max |sum m v - sum m v0| over the run

    int pair_index(int i, int j) const;
};

struct Metrics {
    double overshoot_cm = 0.0;
    double settling_s = 0.0;
    bool settled = false;
    double max_force = 0.0; // N
    double force_rms = 0.0; // N, sqrt of mean squared logged force
};

struct MetricsSummary {
    Metrics mean;
    Metrics stddev;
    std::vector<Metrics> runs;
};

/// Thrown when the integrator trips the separation guard.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instantaneous 1D dipole force on i from j for moments along the track:
/// (c0/|r|^4) * (-2 sgn(r) u_i u_j).
double pair_force_1d(double r, double ui, double uj);

/// Deterministic fixed-step run. Identical (scenario, seed) gives identical
/// telemetry. Throws SimulationError if any separation falls below 0.01 m.
Telemetry run_scenario(const Scenario& s, bool log_fine = false);

/// Per-pair step-response metrics against the reference separation |d|,
/// evaluated on rows with t >= t_from. Settling is the first time after which
/// |r_hat| stays within 1% of |d| for the rest of the run.
Metrics compute_metrics(const Telemetry& tel, int i, int j, double d_abs,
                        double t_from = 0.0);

/// Independent runs over the seed list; summary statistics per metric for the
/// ordered pair (i, j).
MetricsSummary monte_carlo(const Scenario& s, const std::vector<std::uint64_t>& seeds,
                           int i, int j, double d_abs, double t_from = 0.0);

} // namespace emff
