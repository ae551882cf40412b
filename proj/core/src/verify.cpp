#include "emff/verify.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "emff/em_model.hpp"

namespace emff {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Vec3 v{u(rng), u(rng), u(rng)};
        const double n = magnitude(v);
        if (n > 0.1 && n < 1.0) return (1.0 / n) * v;
    }
}

SuiteResult check_allocation() {
    SuiteResult result;
    result.name = "allocation";
    std::mt19937_64 rng(20240817u);
    std::uniform_real_distribution<double> mag_exp(-3.0, 3.0);
    std::uniform_real_distribution<double> radius(0.1, 2.0);

    int failures = 0;
    double worst = 0.0;
    auto check_case = [&](const Vec3& r, const Vec3& f_star) {
        const AmplitudePair gh = allocate_pair(r, f_star);
        const Vec3 realized = force_shape(r, gh.g, gh.h);
        const double err = magnitude(realized - f_star);
        const double tol = 1e-9 * std::max(1.0, magnitude(f_star));
        worst = std::max(worst, err / tol);
        if (err > tol) ++failures;
    };

    for (int k = 0; k < 10000; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const Vec3 f_star = std::pow(10.0, mag_exp(rng)) * random_unit(rng);
        check_case(r, f_star);
    }
    // degenerate manifolds: zero target, parallel, antiparallel, orthogonal
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const double scale = std::pow(10.0, mag_exp(rng));
        check_case(r, Vec3{});
        check_case(r, (scale / magnitude(r)) * r);
        check_case(r, (-scale / magnitude(r)) * r);
        const Vec3 any = random_unit(rng);
        const Vec3 perp = cross(r, any);
        if (magnitude(perp) > 1e-6) {
            check_case(r, (scale / magnitude(perp)) * perp);
        }
    }

    std::ostringstream detail;
    detail << failures << " failures over 10400 cases, worst error "
           << worst << "x tolerance";
    result.detail = detail.str();
    result.passed = failures == 0;
    return result;
}

SuiteResult check_averaging() {
    SuiteResult result;
    result.name = "force-averaging";
    std::mt19937_64 rng(20240818u);
    std::uniform_real_distribution<double> amp(-30.0, 30.0);
    std::uniform_real_distribution<double> radius(0.1, 2.0);
    std::uniform_int_distribution<int> cycles(1, 20);
    const double period = 0.1;

    int failures = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const Vec3 p_ij{amp(rng), amp(rng), amp(rng)};
        const Vec3 p_ji{amp(rng), amp(rng), amp(rng)};
        const double omega = 2.0 * kPi * cycles(rng) / period;
        const Vec3 avg = numeric_average_oracle(
            r, [&](double t) { return std::sin(omega * t) * p_ij; },
            [&](double t) { return std::sin(omega * t) * p_ji; }, 0, period);
        const Vec3 analytic = averaged_force_shape(r, p_ij, p_ji);
        const double err = magnitude(avg - analytic);
        const double tol = 1e-9 * std::max(1.0, magnitude(analytic));
        worst = std::max(worst, err / tol);
        if (err > tol) ++failures;
    }
    for (int k = 0; k < 100; ++k) {
        const Vec3 r = radius(rng) * random_unit(rng);
        const Vec3 p_ij{amp(rng), amp(rng), amp(rng)};
        const Vec3 p_ji{amp(rng), amp(rng), amp(rng)};
        const int c1 = cycles(rng);
        int c2 = cycles(rng);
        while (c2 == c1) c2 = cycles(rng);
        const double w1 = 2.0 * kPi * c1 / period;
        const double w2 = 2.0 * kPi * c2 / period;
        const Vec3 avg = numeric_average_oracle(
            r, [&](double t) { return std::sin(w1 * t) * p_ij; },
            [&](double t) { return std::sin(w2 * t) * p_ji; }, 0, period);
        const double scale =
            std::max(1.0, magnitude(force_shape(r, p_ij, p_ji)));
        const double err = magnitude(avg);
        const double tol = 1e-9 * scale;
        worst = std::max(worst, err / tol);
        if (err > tol) ++failures;
    }

    std::ostringstream detail;
    detail << failures
           << " failures over 100 same-frequency and 100 cross-frequency windows, "
           << "worst error " << worst << "x tolerance";
    result.detail = detail.str();
    result.passed = failures == 0;
    return result;
}

double riccati_residual(const Mat2& p, const KalmanConfig& cfg) {
    const double t = cfg.period;
    const double b0 = 0.5 * t * t;
    const double b1 = t;
    const double m00 = p(0, 0) + t * (p(0, 1) + p(1, 0)) + t * t * p(1, 1);
    const double m01 = p(0, 1) + t * p(1, 1);
    const double m10 = p(1, 0) + t * p(1, 1);
    const double m11 = p(1, 1);
    const double s = p(0, 0) + cfg.meas_var;
    const double k0 = p(0, 0) + t * p(1, 0);
    const double k1 = p(1, 0);
    const double n00 = m00 - k0 * k0 / s + cfg.dist_var * b0 * b0;
    const double n01 = m01 - k0 * k1 / s + cfg.dist_var * b0 * b1;
    const double n10 = m10 - k1 * k0 / s + cfg.dist_var * b1 * b0;
    const double n11 = m11 - k1 * k1 / s + cfg.dist_var * b1 * b1;
    double res = std::fabs(n00 - p(0, 0));
    res = std::max(res, std::fabs(n01 - p(0, 1)));
    res = std::max(res, std::fabs(n10 - p(1, 0)));
    res = std::max(res, std::fabs(n11 - p(1, 1)));
    return res;
}

double closed_loop_spectral_radius(const std::array<double, 2>& l, double t) {
    // A - L C A = [[1-l0, t(1-l0)], [-l1, 1 - l1 t]]
    const double a = 1.0 - l[0];
    const double b = t * (1.0 - l[0]);
    const double c = -l[1];
    const double d = 1.0 - l[1] * t;
    const std::complex<double> tr(a + d, 0.0);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
    return std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
}

SuiteResult check_filter_gain() {
    SuiteResult result;
    result.name = "filter-gain";
    struct Case {
        KalmanConfig cfg;
        std::array<double, 2> target;
    };
    const Case cases[2] = {
        {{0.1, 1.2e-6, 2.8756e-7}, {0.0942, 0.0466}},
        {{0.1, 2.0e-6, 8.0124e-7}, {0.1064, 0.0598}},
    };
    bool passed = true;
    std::ostringstream detail;
    for (const Case& c : cases) {
        const Mat2 p = solve_dare(c.cfg);
        const std::array<double, 2> l = kalman_gain(p, c.cfg);
        const double res = riccati_residual(p, c.cfg);
        const double radius = closed_loop_spectral_radius(l, c.cfg.period);
        const double err = std::max(std::fabs(l[0] - c.target[0]),
                                    std::fabs(l[1] - c.target[1]));
        if (res > 1e-12 || radius >= 1.0 || err > 5e-4) passed = false;
        detail << "L = [" << l[0] << ", " << l[1] << "] target [" << c.target[0]
               << ", " << c.target[1] << "] err " << err << " residual " << res
               << " radius " << radius << "; ";
    }
    result.detail = detail.str();
    result.passed = passed;
    return result;
}

SuiteResult check_momentum() {
    SuiteResult result;
    result.name = "momentum";
    Scenario s = reference_three_sat_scenario();
    s.damping = 0.0;
    s.duration = 100.0;
    s.seed = 7;
    double p0 = 0.0;
    for (const auto& sat : s.sats) p0 += s.sat_mass * sat.velocity;
    const double scale = std::max(1.0, std::fabs(p0));
    try {
        const Telemetry tel = run_scenario(s);
        std::ostringstream detail;
        detail << "drift " << tel.momentum_drift << " over 100 s, bound "
               << 1e-9 * scale;
        result.detail = detail.str();
        result.passed = tel.momentum_drift <= 1e-9 * scale;
    } catch (const std::exception& e) {
        result.detail = e.what();
        result.passed = false;
    }
    return result;
}

} // namespace

Scenario reference_two_sat_scenario() {
    Scenario s;
    s.name = "two_sat_repulsion";
    s.sats = {{0.0, 0.0}, {0.4, 0.0}};
    s.sat_mass = 3.469;
    s.damping = 0.0;
    s.graph.n = 2;
    s.graph.edges.insert({1, 2});
    s.graph.alpha[{1, 2}] = 0.0158;
    s.graph.beta = 6.89;
    s.graph.desired[{1, 2}] = Vec3{-0.45, 0.0, 0.0};
    s.plan.pair_omega[{1, 2}] = 40.0 * kPi;
    s.plan.period = 0.1;
    s.coil = CoilSpec{500, 0.03, 2.35};
    s.kalman = KalmanConfig{0.1, 1.2e-6, 2.8756e-7};
    s.duration = 45.0;
    s.control_on = 5.0;
    s.noise_var = 1.2e-6;
    s.seed = 1;
    return s;
}

Scenario reference_three_sat_scenario() {
    Scenario s;
    s.name = "three_sat_repulsion";
    s.sats = {{0.0, 0.0}, {-0.346, 0.0}, {0.377, 0.0}};
    s.sat_mass = 3.469;
    s.damping = 0.08;
    s.graph.n = 3;
    s.graph.edges.insert({1, 2});
    s.graph.edges.insert({1, 3});
    s.graph.alpha[{1, 2}] = 0.0158;
    s.graph.alpha[{1, 3}] = 0.0158;
    s.graph.beta = 7.38;
    s.graph.rho[{1, 2}] = 0.00136;
    s.graph.rho[{1, 3}] = 0.00136;
    s.graph.gamma[{1, 2}] = 0.8;
    s.graph.gamma[{2, 1}] = 1.25;
    s.graph.gamma[{1, 3}] = 0.8;
    s.graph.gamma[{3, 1}] = 1.25;
    s.graph.desired[{1, 2}] = Vec3{0.42, 0.0, 0.0};
    s.graph.desired[{1, 3}] = Vec3{-0.45, 0.0, 0.0};
    s.plan.pair_omega[{1, 2}] = 20.0 * kPi;
    s.plan.pair_omega[{1, 3}] = 40.0 * kPi;
    s.plan.period = 0.1;
    s.coil = CoilSpec{500, 0.03, 2.35};
    s.kalman = KalmanConfig{0.1, 2.0e-6, 8.0124e-7};
    s.band = DeadBand{0.015, 0.021};
    s.duration = 45.0;
    s.control_on = 0.0;
    s.noise_var = 2.0e-6;
    s.seed = 1;
    return s;
}

std::vector<SuiteResult> run_verify() {
    return {check_allocation(), check_averaging(), check_filter_gain(),
            check_momentum()};
}

bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results) {
        if (!r.passed) return false;
    }
    return true;
}

} // namespace emff
