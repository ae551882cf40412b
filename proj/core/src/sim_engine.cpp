#include "emff/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "emff/em_model.hpp"

namespace emff {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

constexpr double kGuardSeparation = 0.01; // m

long whole_ratio(double num, double den, const char* what) {
    const double ratio = num / den;
    const long n = std::lround(ratio);
    if (n < 1 || std::fabs(ratio - n) > 1e-9 * ratio) {
        throw std::invalid_argument(std::string("Scenario: ") + what);
    }
    return n;
}

} // namespace

void Scenario::validate() const {
    graph.validate();
    plan.validate();
    kalman.validate();
    if (static_cast<int>(sats.size()) != graph.n) {
        throw std::invalid_argument("Scenario: satellite count does not match the graph");
    }
    if (sat_mass <= 0.0) {
        throw std::invalid_argument("Scenario: sat_mass must be positive");
    }
    if (damping < 0.0) {
        throw std::invalid_argument("Scenario: damping must be nonnegative");
    }
    if (coil.turns <= 0 || coil.area <= 0.0 || coil.max_current <= 0.0) {
        throw std::invalid_argument("Scenario: coil turns, area and max_current must be positive");
    }
    if (std::fabs(kalman.period - plan.period) > 1e-9 * plan.period) {
        throw std::invalid_argument("Scenario: control period must equal the frequency-plan window");
    }
    if (noise_var < 0.0) {
        throw std::invalid_argument("Scenario: noise_var must be nonnegative");
    }
    if (control_on < 0.0 || duration < control_on) {
        throw std::invalid_argument("Scenario: need duration >= control_on >= 0");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("Scenario: dt must be positive");
    }
    whole_ratio(kalman.period, dt, "dt must divide the control period");
    double omega_max = 0.0;
    for (const auto& [pair, w] : plan.pair_omega) {
        omega_max = std::max(omega_max, w);
        if (!graph.has_edge(pair.first, pair.second)) {
            throw std::invalid_argument("Scenario: frequency given for a non-edge");
        }
    }
    for (const auto& e : graph.edges) {
        (void)plan.omega(e.first, e.second); // throws when missing
    }
    if (omega_max > 0.0 && dt > (2.0 * 3.14159265358979323846 / omega_max) / 40.0) {
        throw std::invalid_argument("Scenario: dt must be at most 1/40 of the shortest period");
    }
    for (const auto& [pair, amp] : open_loop_currents) {
        (void)amp;
        if (!graph.has_edge(pair.first, pair.second)) {
            throw std::invalid_argument("Scenario: open-loop current given for a non-edge");
        }
    }
    if (setpoint_switch) {
        if (setpoint_switch->time < 0.0 || setpoint_switch->time > duration) {
            throw std::invalid_argument("Scenario: setpoint switch time outside the run");
        }
        for (const auto& [pair, d] : setpoint_switch->desired) {
            (void)d;
            if (!graph.has_edge(pair.first, pair.second)) {
                throw std::invalid_argument("Scenario: setpoint switch names a non-edge");
            }
        }
    }
    bool any_rho = false;
    for (const auto& e : graph.edges) {
        if (graph.rho_of(e.first, e.second) > 0.0) any_rho = true;
    }
    if (any_rho && !(band.eps0 > 0.0 && band.eps1 > band.eps0)) {
        throw std::invalid_argument("Scenario: integral action needs eps1 > eps0 > 0");
    }
}

long Scenario::steps() const { return std::lround(duration / kalman.period); }

int Telemetry::pair_index(int i, int j) const {
    for (std::size_t k = 0; k < pair_order.size(); ++k) {
        if (pair_order[k] == PairKey{i, j}) return static_cast<int>(k);
    }
    throw std::invalid_argument("Telemetry: unknown ordered pair");
}

double pair_force_1d(double r, double ui, double uj) {
    const double rn = std::fabs(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("pair_force_1d: singular separation");
    }
    const double r4 = rn * rn * rn * rn;
    return (consts::c0 / r4) * (-2.0 * sgn(r) * ui * uj);
}

namespace {

struct PairLoop {
    KalmanState kf;
    double xi = 0.0;
    double prev_r_hat = 0.0;
    bool initialized = false;
};

struct Derivative {
    std::vector<double> dpos;
    std::vector<double> dvel;
};

// Accelerations at absolute time t under the window's held amplitudes.
Derivative derivative(const Scenario& s, const std::vector<double>& pos,
                      const std::vector<double>& vel,
                      const std::map<PairKey, double>& amps, double t) {
    const int n = s.graph.n;
    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    for (const auto& [pair, p] : amps) {
        u[static_cast<std::size_t>(pair.first - 1)] +=
            p * std::sin(s.plan.omega(pair.first, pair.second) * t);
    }
    Derivative d;
    d.dpos = vel;
    d.dvel.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            // r_ij = x_i - x_j, the vector from j to i; pair_force_1d gives
            // the force on i.
            const double r = pos[static_cast<std::size_t>(i - 1)] -
                             pos[static_cast<std::size_t>(j - 1)];
            if (std::fabs(r) < kGuardSeparation) {
                std::ostringstream msg;
                msg << "separation guard: |r_" << i << j << "| = " << std::fabs(r)
                    << " m < " << kGuardSeparation << " m at t = " << t << " s";
                throw SimulationError(msg.str());
            }
            const double f = pair_force_1d(r, u[static_cast<std::size_t>(i - 1)],
                                           u[static_cast<std::size_t>(j - 1)]);
            d.dvel[static_cast<std::size_t>(i - 1)] += f / s.sat_mass;
            d.dvel[static_cast<std::size_t>(j - 1)] -= f / s.sat_mass;
        }
        d.dvel[static_cast<std::size_t>(i - 1)] -=
            s.damping * vel[static_cast<std::size_t>(i - 1)] / s.sat_mass;
    }
    return d;
}

void rk4_step(const Scenario& s, std::vector<double>& pos, std::vector<double>& vel,
              const std::map<PairKey, double>& amps, double t, double dt) {
    const std::size_t n = pos.size();
    const Derivative k1 = derivative(s, pos, vel, amps, t);
    std::vector<double> p2(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        p2[i] = pos[i] + 0.5 * dt * k1.dpos[i];
        v2[i] = vel[i] + 0.5 * dt * k1.dvel[i];
    }
    const Derivative k2 = derivative(s, p2, v2, amps, t + 0.5 * dt);
    std::vector<double> p3(n), v3(n);
    for (std::size_t i = 0; i < n; ++i) {
        p3[i] = pos[i] + 0.5 * dt * k2.dpos[i];
        v3[i] = vel[i] + 0.5 * dt * k2.dvel[i];
    }
    const Derivative k3 = derivative(s, p3, v3, amps, t + 0.5 * dt);
    std::vector<double> p4(n), v4(n);
    for (std::size_t i = 0; i < n; ++i) {
        p4[i] = pos[i] + dt * k3.dpos[i];
        v4[i] = vel[i] + dt * k3.dvel[i];
    }
    const Derivative k4 = derivative(s, p4, v4, amps, t + dt);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] += dt / 6.0 * (k1.dpos[i] + 2.0 * k2.dpos[i] + 2.0 * k3.dpos[i] + k4.dpos[i]);
        vel[i] += dt / 6.0 * (k1.dvel[i] + 2.0 * k2.dvel[i] + 2.0 * k3.dvel[i] + k4.dvel[i]);
    }
}

} // namespace

Telemetry run_scenario(const Scenario& s, bool log_fine) {
    s.validate();
    const int n = s.graph.n;
    const double t_ctrl = s.kalman.period;
    const long substeps = std::lround(t_ctrl / s.dt);
    const long total_steps = s.steps();

    Telemetry tel;
    for (int i = 1; i <= n; ++i) {
        for (int j : s.graph.neighbors(i)) {
            tel.pair_order.emplace_back(i, j);
        }
    }

    const Mat2 p_cov = solve_dare(s.kalman);
    const std::array<double, 2> gain = kalman_gain(p_cov, s.kalman);

    std::vector<double> pos, vel;
    for (const auto& sat : s.sats) {
        pos.push_back(sat.position);
        vel.push_back(sat.velocity);
    }
    double momentum0 = 0.0;
    for (double v : vel) momentum0 += s.sat_mass * v;

    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(s.noise_var));

    std::map<PairKey, PairLoop> loops;
    for (const auto& key : tel.pair_order) {
        loops[key].kf.gain = gain;
    }
    std::map<PairKey, double> currents;  // saturated A, held over the window
    std::map<PairKey, double> moments;   // p = N A I
    std::map<PairKey, double> prev_moments;
    for (const auto& key : tel.pair_order) {
        currents[key] = moments[key] = prev_moments[key] = 0.0;
    }

    for (long k = 0; k <= total_steps; ++k) {
        const double t = k * t_ctrl;

        std::map<PairKey, double> meas;
        for (const auto& [i, j] : tel.pair_order) {
            const double truth = pos[static_cast<std::size_t>(i - 1)] -
                                 pos[static_cast<std::size_t>(j - 1)];
            meas[{i, j}] = truth + (s.noise_var > 0.0 ? gauss(rng) : 0.0);
        }

        for (const auto& key : tel.pair_order) {
            loops[key].prev_r_hat = loops[key].kf.r_hat;
        }
        for (const auto& [i, j] : tel.pair_order) {
            PairLoop& loop = loops[{i, j}];
            if (!loop.initialized) {
                loop.kf.r_hat = meas[{i, j}];
                loop.kf.v_hat = 0.0;
                loop.initialized = true;
                continue;
            }
            // Satellite i's view of the elapsed window: its own estimates plus
            // relative positions of j reconstructed through pair (i, j).
            auto est_r = [&](int a, int b) {
                if (a == i) return loops[PairKey{i, b}].prev_r_hat;
                if (b == i) return -loops[PairKey{i, j}].prev_r_hat;
                return loops[PairKey{i, b}].prev_r_hat - loops[PairKey{i, j}].prev_r_hat;
            };
            const double nu = input_estimate(
                s.graph, i, j, s.sat_mass, [&](int a, int b) {
                    return realized_avg_force_1d(est_r(a, b), prev_moments.at({a, b}),
                                                 prev_moments.at({b, a}));
                });
            loop.kf = kf_update(loop.kf, meas[{i, j}], nu, s.kalman);
        }

        prev_moments = moments;
        const bool active = t >= s.control_on - 1e-9 * t_ctrl;
        if (!active) {
            for (auto& [key, c] : currents) c = 0.0;
        } else if (s.mode == RunMode::open_loop) {
            for (auto& [key, c] : currents) {
                auto it = s.open_loop_currents.find(key);
                c = it == s.open_loop_currents.end() ? 0.0 : it->second;
            }
        } else {
            std::map<PairKey, double> weighted;
            for (const auto& [i, j] : tel.pair_order) {
                PairLoop& loop = loops[{i, j}];
                double d = s.graph.desired_of(i, j).x;
                if (s.setpoint_switch && t >= s.setpoint_switch->time - 1e-9 * t_ctrl) {
                    auto it = s.setpoint_switch->desired.find({i, j});
                    if (it != s.setpoint_switch->desired.end()) d = it->second;
                    auto rit = s.setpoint_switch->desired.find({j, i});
                    if (rit != s.setpoint_switch->desired.end()) d = -rit->second;
                }
                const double rho = s.graph.rho_of(i, j);
                if (rho > 0.0) {
                    loop.xi = integrator_update(loop.xi, loop.kf.r_hat, d, s.band);
                }
                const double f_star = desired_force_1d(
                    loop.kf.r_hat, loop.kf.v_hat, d, loop.xi,
                    s.graph.alpha_of(i, j), s.graph.beta, rho, s.sat_mass);
                weighted[{i, j}] = s.graph.gamma_of(i, j) *
                                   raw_current(loop.kf.r_hat, f_star, i - j, s.coil);
            }
            for (int i = 1; i <= n; ++i) {
                std::vector<std::pair<double, double>> amp_omega;
                for (int j : s.graph.neighbors(i)) {
                    amp_omega.emplace_back(weighted[{i, j}], s.plan.omega(i, j));
                }
                const double peak = peak_window_current(amp_omega, t_ctrl);
                const double scale = peak > s.coil.max_current
                                         ? s.coil.max_current / peak
                                         : 1.0;
                for (int j : s.graph.neighbors(i)) {
                    currents[{i, j}] = scale * weighted[{i, j}];
                }
            }
        }
        for (const auto& key : tel.pair_order) {
            moments[key] = s.coil.na() * currents[key];
        }

        TelemetryRow row;
        row.t = t;
        for (const auto& [i, j] : tel.pair_order) {
            const PairLoop& loop = loops.at({i, j});
            PairSample sample;
            sample.q = meas[{i, j}];
            sample.r_hat = loop.kf.r_hat;
            sample.v_hat = loop.kf.v_hat;
            sample.current = currents[{i, j}];
            sample.f_hat = realized_avg_force_1d(loop.kf.r_hat, moments[{i, j}],
                                                 moments[{j, i}]);
            row.pairs.push_back(sample);
        }
        tel.rows.push_back(row);

        if (k == total_steps) break;
        for (long sub = 0; sub < substeps; ++sub) {
            const double t_sub = t + sub * s.dt;
            rk4_step(s, pos, vel, moments, t_sub, s.dt);
            if (log_fine) {
                tel.fine_t.push_back(t_sub + s.dt);
                tel.fine_pos.push_back(pos);
                tel.fine_vel.push_back(vel);
            }
            if (s.damping == 0.0) {
                double momentum = 0.0;
                for (double v : vel) momentum += s.sat_mass * v;
                tel.momentum_drift =
                    std::max(tel.momentum_drift, std::fabs(momentum - momentum0));
            }
        }
    }
    return tel;
}

Metrics compute_metrics(const Telemetry& tel, int i, int j, double d_abs,
                        double t_from) {
    if (tel.rows.empty()) {
        throw std::invalid_argument("compute_metrics: empty telemetry");
    }
    const int idx = tel.pair_index(i, j);
    std::vector<double> t, r_abs, f;
    for (const auto& row : tel.rows) {
        if (row.t < t_from - 1e-12) continue;
        t.push_back(row.t);
        r_abs.push_back(std::fabs(row.pairs[static_cast<std::size_t>(idx)].r_hat));
        f.push_back(row.pairs[static_cast<std::size_t>(idx)].f_hat);
    }
    if (t.empty()) {
        throw std::invalid_argument("compute_metrics: no telemetry at or after t_from");
    }

    Metrics m;
    double dir = sgn(d_abs - r_abs.front());
    if (dir == 0.0) dir = 1.0;
    double overshoot = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        overshoot = std::max(overshoot, dir * (r_abs[k] - d_abs));
        m.max_force = std::max(m.max_force, std::fabs(f[k]));
        sum_sq += f[k] * f[k];
    }
    m.overshoot_cm = 100.0 * overshoot;
    m.force_rms = std::sqrt(sum_sq / static_cast<double>(t.size()));

    const double band = 0.01 * d_abs;
    std::size_t settle = t.size();
    for (std::size_t k = t.size(); k-- > 0;) {
        if (std::fabs(r_abs[k] - d_abs) > band) break;
        settle = k;
    }
    if (settle < t.size()) {
        m.settled = true;
        m.settling_s = t[settle] - t.front();
    } else {
        m.settled = false;
        m.settling_s = t.back() - t.front();
    }
    return m;
}

MetricsSummary monte_carlo(const Scenario& s, const std::vector<std::uint64_t>& seeds,
                           int i, int j, double d_abs, double t_from) {
    if (seeds.empty()) {
        throw std::invalid_argument("monte_carlo: need at least one seed");
    }
    MetricsSummary summary;
    for (std::uint64_t seed : seeds) {
        Scenario run = s;
        run.seed = seed;
        summary.runs.push_back(compute_metrics(run_scenario(run), i, j, d_abs, t_from));
    }
    const double count = static_cast<double>(summary.runs.size());
    bool all_settled = true;
    for (const Metrics& m : summary.runs) {
        summary.mean.overshoot_cm += m.overshoot_cm / count;
        summary.mean.settling_s += m.settling_s / count;
        summary.mean.max_force += m.max_force / count;
        summary.mean.force_rms += m.force_rms / count;
        all_settled = all_settled && m.settled;
    }
    summary.mean.settled = all_settled;
    if (summary.runs.size() > 1) {
        for (const Metrics& m : summary.runs) {
            const double denom = count - 1.0;
            summary.stddev.overshoot_cm +=
                (m.overshoot_cm - summary.mean.overshoot_cm) *
                (m.overshoot_cm - summary.mean.overshoot_cm) / denom;
            summary.stddev.settling_s += (m.settling_s - summary.mean.settling_s) *
                                         (m.settling_s - summary.mean.settling_s) / denom;
            summary.stddev.max_force += (m.max_force - summary.mean.max_force) *
                                        (m.max_force - summary.mean.max_force) / denom;
            summary.stddev.force_rms += (m.force_rms - summary.mean.force_rms) *
                                        (m.force_rms - summary.mean.force_rms) / denom;
        }
        summary.stddev.overshoot_cm = std::sqrt(summary.stddev.overshoot_cm);
        summary.stddev.settling_s = std::sqrt(summary.stddev.settling_s);
        summary.stddev.max_force = std::sqrt(summary.stddev.max_force);
        summary.stddev.force_rms = std::sqrt(summary.stddev.force_rms);
    }
    return summary;
}

} // namespace emff
