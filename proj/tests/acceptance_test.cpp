// Release gate: one line per criterion, nonzero exit when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "emff/em_model.hpp"
#include "emff/scenario_config.hpp"
#include "emff/sim_engine.hpp"
#include "emff/telemetry_csv.hpp"
#include "emff/testbed1d.hpp"
#include "emff/verify.hpp"

using namespace emff;

namespace {

int failures = 0;

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, passed ? "PASS" : "FAIL",
                detail.c_str());
    if (!passed) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

Scenario load_bundled(const std::string& name) {
    return load_scenario(std::string(EMFF_SCENARIO_DIR "/") + name);
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Vec3 v{u(rng), u(rng), u(rng)};
        const double n = magnitude(v);
        if (n > 0.1 && n < 1.0) return (1.0 / n) * v;
    }
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

// 1. Published filter gains from the published design variances.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        KalmanConfig cfg;
        std::array<double, 2> target;
    };
    const Case cases[2] = {
        {{0.1, 1.2e-6, 5e-6}, {0.0942, 0.0466}},
        {{0.1, 2.0e-6, 5e-6}, {0.1064, 0.0598}},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const Case& c : cases) {
        const auto l = kalman_gain(solve_dare(c.cfg), c.cfg);
        const double err = std::max(std::fabs(l[0] - c.target[0]),
                                    std::fabs(l[1] - c.target[1]));
        if (err > 5e-4) ok = false;
        detail << "L = [" << l[0] << ", " << l[1] << "] target [" << c.target[0]
               << ", " << c.target[1] << "]; ";
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 1.0;
    detail << elapsed << " s";
    report(1, ok, detail.str());
}

// 2. Closed-form amplitude allocation realizes the requested shape value.
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> mag_exp(-3.0, 3.0);
    std::uniform_real_distribution<double> radius(0.1, 2.0);
    int bad = 0;
    auto check = [&](const Vec3& r, const Vec3& f_star) {
        const AmplitudePair gh = allocate_pair(r, f_star);
        const double err = magnitude(force_shape(r, gh.g, gh.h) - f_star);
        if (err > 1e-9 * std::max(1.0, magnitude(f_star))) ++bad;
    };
    for (int k = 0; k < 10000; ++k) {
        check(radius(rng) * random_unit(rng),
              std::pow(10.0, mag_exp(rng)) * random_unit(rng));
    }
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const double scale = std::pow(10.0, mag_exp(rng));
        check(r, Vec3{});
        check(r, (scale / magnitude(r)) * r);
        check(r, (-scale / magnitude(r)) * r);
        const Vec3 perp = cross(r, random_unit(rng));
        if (magnitude(perp) > 1e-6) check(r, (scale / magnitude(perp)) * perp);
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << bad << " allocation failures; " << elapsed << " s";
    report(2, bad == 0 && elapsed < 5.0, detail.str());
}

// 3. Window averaging: same-frequency closed form and cross-frequency nulling.
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> amp(-30.0, 30.0);
    std::uniform_real_distribution<double> radius(0.1, 2.0);
    std::uniform_int_distribution<int> cycles(1, 20);
    const double period = 0.1;
    const double two_pi = 2.0 * 3.14159265358979323846;
    int bad = 0;
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const Vec3 p_ij{amp(rng), amp(rng), amp(rng)};
        const Vec3 p_ji{amp(rng), amp(rng), amp(rng)};
        const double w = two_pi * cycles(rng) / period;
        const Vec3 avg = numeric_average_oracle(
            r, [&](double t) { return std::sin(w * t) * p_ij; },
            [&](double t) { return std::sin(w * t) * p_ji; }, 0, period);
        const Vec3 analytic = averaged_force_shape(r, p_ij, p_ji);
        if (magnitude(avg - analytic) >
            1e-9 * std::max(1.0, magnitude(analytic))) {
            ++bad;
        }
    }
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const Vec3 p_ij{amp(rng), amp(rng), amp(rng)};
        const Vec3 p_ji{amp(rng), amp(rng), amp(rng)};
        const int c1 = cycles(rng);
        int c2 = cycles(rng);
        while (c2 == c1) c2 = cycles(rng);
        const Vec3 avg = numeric_average_oracle(
            r, [&](double t) { return std::sin(two_pi * c1 / period * t) * p_ij; },
            [&](double t) { return std::sin(two_pi * c2 / period * t) * p_ji; },
            0, period);
        const double scale = std::max(1.0, magnitude(force_shape(r, p_ij, p_ji)));
        if (magnitude(avg) > 1e-9 * scale) ++bad;
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << bad << " averaging failures; " << elapsed << " s";
    report(3, bad == 0 && elapsed < 10.0, detail.str());
}

// 4. Momentum conservation over 100 s of undamped closed-loop flight.
void criterion_4() {
    Scenario s = reference_three_sat_scenario();
    s.damping = 0.0;
    s.duration = 100.0;
    s.seed = 7;
    double p0 = 0.0;
    for (const auto& sat : s.sats) p0 += s.sat_mass * sat.velocity;
    const double scale = std::max(1.0, std::fabs(p0));
    const Telemetry tel = run_scenario(s);
    std::ostringstream detail;
    detail << "drift " << tel.momentum_drift << " over 100 s, bound "
           << 1e-9 * scale;
    report(4, tel.momentum_drift <= 1e-9 * scale, detail.str());
}

// 5 and 6: repulsion/attraction step-response statistics over 20 seeds.
void step_response_criterion(int criterion, const std::string& file,
                             double ts_lo, double ts_hi, double f_lo,
                             double f_hi, double p_lo, double p_hi,
                             double os_max) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = load_bundled(file);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t k = 1; k <= 20; ++k) seeds.push_back(k);
    // Settling is counted from the start of the run; actuation begins 5 s in.
    const MetricsSummary sum = monte_carlo(s, seeds, 1, 2, 0.45, 0.0);
    bool ok = sum.mean.settled;
    ok = ok && in_range(sum.mean.settling_s, ts_lo, ts_hi);
    ok = ok && in_range(sum.mean.max_force, f_lo, f_hi);
    ok = ok && in_range(sum.mean.force_rms, p_lo, p_hi);
    if (os_max > 0.0) ok = ok && sum.mean.overshoot_cm <= os_max;
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    std::ostringstream detail;
    detail << "mean T_s " << sum.mean.settling_s << " s [" << ts_lo << ", "
           << ts_hi << "], max|F| " << sum.mean.max_force << " N [" << f_lo
           << ", " << f_hi << "], P " << sum.mean.force_rms << " N [" << p_lo
           << ", " << p_hi << "]";
    if (os_max > 0.0) {
        detail << ", overshoot " << sum.mean.overshoot_cm << " cm <= " << os_max;
    }
    detail << "; " << elapsed << " s";
    report(criterion, ok, detail.str());
}

// 7. Open-loop direction checks with 1 s bin means of the measured separation.
void criterion_7() {
    auto bin_means = [](const Telemetry& tel, double t_from) {
        std::vector<double> means;
        double sum = 0.0;
        int count = 0;
        int bin = -1;
        for (const auto& row : tel.rows) {
            if (row.t < t_from) continue;
            const int b = static_cast<int>(row.t - t_from);
            if (b != bin) {
                if (count > 0) means.push_back(sum / count);
                bin = b;
                sum = 0.0;
                count = 0;
            }
            sum += std::fabs(row.pairs[0].q);
            ++count;
        }
        if (count > 0) means.push_back(sum / count);
        return means;
    };

    const Telemetry approach = run_scenario(load_bundled(
        "exp1_open_loop_attraction.cfg"));
    const Telemetry separate = run_scenario(load_bundled(
        "exp2_open_loop_repulsion.cfg"));
    const std::vector<double> a = bin_means(approach, 5.0);
    const std::vector<double> b = bin_means(separate, 5.0);
    bool ok = a.size() >= 10 && b.size() >= 10;
    for (std::size_t k = 1; ok && k < a.size(); ++k) ok = a[k] < a[k - 1];
    for (std::size_t k = 1; ok && k < b.size(); ++k) ok = b[k] > b[k - 1];
    std::ostringstream detail;
    detail << "approach " << (a.empty() ? 0.0 : a.front()) << " -> "
           << (a.empty() ? 0.0 : a.back()) << " m, separation "
           << (b.empty() ? 0.0 : b.front()) << " -> "
           << (b.empty() ? 0.0 : b.back()) << " m, both monotone per 1 s bin";
    report(7, ok, detail.str());
}

// 8. Three-satellite convergence with the per-coil amplitude budget intact.
void criterion_8() {
    const char* files[] = {"exp6_three_sat_repulsion.cfg",
                           "exp7_three_sat_attraction.cfg",
                           "exp8_three_sat_mixed.cfg"};
    bool ok = true;
    std::ostringstream detail;
    for (const char* file : files) {
        const Scenario s = load_bundled(file);
        const Telemetry tel = run_scenario(s);
        double worst_err = 0.0;
        double worst_peak = 0.0;
        for (const auto& row : tel.rows) {
            for (int i = 1; i <= s.graph.n; ++i) {
                std::vector<std::pair<double, double>> amp_omega;
                for (int j : s.graph.neighbors(i)) {
                    const auto& p = row.pairs[static_cast<std::size_t>(
                        tel.pair_index(i, j))];
                    amp_omega.emplace_back(p.current, s.plan.omega(i, j));
                }
                worst_peak = std::max(
                    worst_peak, peak_window_current(amp_omega, s.plan.period));
            }
            if (row.t < 40.0) continue;
            for (const PairKey& key : {PairKey{1, 2}, PairKey{1, 3}}) {
                const auto& p = row.pairs[static_cast<std::size_t>(
                    tel.pair_index(key.first, key.second))];
                const double d = s.graph.desired_of(key.first, key.second).x;
                worst_err = std::max(worst_err, std::fabs(p.r_hat - d));
            }
        }
        const bool file_ok = worst_err < 0.015 &&
                             worst_peak <= 2.35 * (1.0 + 1e-9);
        ok = ok && file_ok;
        detail << file << ": max|r_hat - d| " << worst_err
               << " m (t >= 40 s), peak current " << worst_peak << " A; ";
    }
    report(8, ok, detail.str());
}

// 9. Setpoint switch re-settles within 35 s.
void criterion_9() {
    const Scenario s = load_bundled("exp5_multi_setpoint.cfg");
    const Telemetry tel = run_scenario(s);
    const Metrics m = compute_metrics(tel, 1, 2, 0.5, 60.0);
    std::ostringstream detail;
    detail << "re-settles in " << m.settling_s << " s"
           << (m.settled ? "" : " (unsettled)") << ", bound 35 s";
    report(9, m.settled && m.settling_s <= 35.0, detail.str());
}

// 10. Full verify suite plus every bundled scenario inside the time budget,
// with seed-for-seed reproducible telemetry.
void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    const bool verify_ok = all_passed(run_verify());
    const char* files[] = {
        "exp1_open_loop_attraction.cfg", "exp2_open_loop_repulsion.cfg",
        "exp3_repulsion.cfg",            "exp4_attraction.cfg",
        "exp5_multi_setpoint.cfg",       "exp6_three_sat_repulsion.cfg",
        "exp7_three_sat_attraction.cfg", "exp8_three_sat_mixed.cfg"};
    bool runs_ok = true;
    for (const char* file : files) {
        try {
            run_scenario(load_bundled(file));
        } catch (const std::exception&) {
            runs_ok = false;
        }
    }
    const Scenario s = load_bundled("exp3_repulsion.cfg");
    const bool reproducible =
        telemetry_to_csv(run_scenario(s)) == telemetry_to_csv(run_scenario(s));
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << "verify " << (verify_ok ? "pass" : "FAIL") << ", scenarios "
           << (runs_ok ? "ran" : "FAILED") << ", byte-identical CSV "
           << (reproducible ? "yes" : "no") << "; " << elapsed << " s < 300 s";
    report(10, verify_ok && runs_ok && reproducible && elapsed < 300.0,
           detail.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    step_response_criterion(5, "exp3_repulsion.cfg", 16.5, 20.1, 2.1e-3, 3.2e-3,
                            1.0e-4, 1.8e-4, 1.2);
    step_response_criterion(6, "exp4_attraction.cfg", 16.9, 20.7, 2.6e-3, 4.2e-3,
                            1.2e-4, 2.1e-4, 0.0);
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
