#include "emff/amff.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "emff/em_model.hpp"

namespace emff {

namespace {
constexpr double kPi = 3.14159265358979323846;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double sqrt_clamped(double x) { return std::sqrt(std::max(x, 0.0)); }
} // namespace

double FrequencyPlan::omega(int i, int j) const {
    auto it = pair_omega.find(unordered_key(i, j));
    if (it == pair_omega.end()) {
        throw std::invalid_argument("FrequencyPlan: no frequency for pair");
    }
    return it->second;
}

void FrequencyPlan::validate() const {
    if (period <= 0.0) {
        throw std::invalid_argument("FrequencyPlan: period must be positive");
    }
    for (auto a = pair_omega.begin(); a != pair_omega.end(); ++a) {
        if (a->second <= 0.0) {
            throw std::invalid_argument("FrequencyPlan: frequencies must be positive");
        }
        const double cycles = period * a->second / (2.0 * kPi);
        if (std::fabs(cycles - std::round(cycles)) > 1e-9 * cycles) {
            throw std::invalid_argument(
                "FrequencyPlan: period is not a whole number of cycles for a pair");
        }
        for (auto b = std::next(a); b != pair_omega.end(); ++b) {
            if (std::fabs(a->second - b->second) <= 1e-9 * std::fabs(a->second)) {
                throw std::invalid_argument(
                    "FrequencyPlan: pair frequencies must be distinct");
            }
        }
    }
}

Vec3 moment_waveform(int i, double t, const FrequencyPlan& plan,
                     const AmplitudeSet& amps, long step) {
    const double t0 = static_cast<double>(step) * plan.period;
    const double slack = 1e-9 * plan.period;
    if (t < t0 - slack || t > t0 + plan.period + slack) {
        throw std::invalid_argument("moment_waveform: t outside the step window");
    }
    Vec3 u;
    for (const auto& [key, p] : amps.amp) {
        if (key.first != i) continue;
        u += p * std::sin(plan.omega(key.first, key.second) * t);
    }
    return u;
}

Vec3 averaged_force_shape(const Vec3& r, const Vec3& p_ij, const Vec3& p_ji) {
    return 0.5 * force_shape(r, p_ij, p_ji);
}

Vec3 numeric_average_oracle(const Vec3& r,
                            const std::function<Vec3(double)>& waveform_i,
                            const std::function<Vec3(double)>& waveform_j,
                            long step, double period) {
    constexpr int kIntervals = 4096; // even; trig-polynomial integrand
    const double t0 = static_cast<double>(step) * period;
    const double h = period / kIntervals;
    Vec3 sum;
    for (int n = 0; n <= kIntervals; ++n) {
        const double t = t0 + n * h;
        const double weight = (n == 0 || n == kIntervals) ? 1.0 : (n % 2 ? 4.0 : 2.0);
        sum += weight * force_shape(r, waveform_i(t), waveform_j(t));
    }
    return sum * (h / 3.0 / period);
}

Vec3 approx_avg_force(const Vec3& r, const Vec3& p_ij, const Vec3& p_ji) {
    const double rn = magnitude(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("approx_avg_force: singular separation");
    }
    const double r2 = rn * rn;
    return (consts::c0 / (2.0 * r2 * r2)) * force_shape(r, p_ij, p_ji);
}

AmplitudePair allocate_pair(const Vec3& r, const Vec3& f_star) {
    const double rn = magnitude(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("allocate_pair: singular separation");
    }
    const double fn = magnitude(f_star);
    const double rf = dot(r, f_star);
    const Vec3 rxf = cross(r, f_star);
    const double rxf_n = magnitude(rxf);

    const double phi1 = std::sqrt(rxf_n * rxf_n + rn * rn * fn * fn);
    const int s = sgn(rf);
    const double phi2 = (2.0 - static_cast<double>(s * s)) * phi1;

    const double g_r = -0.5 * s * sqrt_clamped((std::fabs(rf) + phi1) / rn);
    const double g_rf = sqrt_clamped((-std::fabs(rf) + phi2) / rn) / std::sqrt(2.0);
    const double h_r = 0.5 * sqrt_clamped((std::fabs(rf) + phi2) / rn);
    const double h_rf = -s * sqrt_clamped((-std::fabs(rf) + phi1) / rn) / std::sqrt(2.0);

    AmplitudePair out;
    out.g = (g_r / rn) * r;
    out.h = (h_r / rn) * r;
    if (rxf_n > 1e-12 * rn * fn) {
        const Vec3 tangent = cross(rxf, r) / (rn * rxf_n);
        out.g += g_rf * tangent;
        out.h += h_rf * tangent;
    }
    return out;
}

Vec3 select_amplitudes(int i, int j, const Vec3& r_ij, const Vec3& f_star_ij) {
    if (i == j) {
        throw std::invalid_argument("select_amplitudes: i and j must differ");
    }
    if (i < j) {
        return allocate_pair(r_ij, f_star_ij).g;
    }
    // Mirror into the lower-indexed pair's variables before taking the h
    // branch; evaluating h at (r_ij, f*_ij) directly flips the sign of the
    // realized force.
    return allocate_pair(-r_ij, -f_star_ij).h;
}

} // namespace emff
