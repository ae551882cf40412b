#include "emff/testbed1d.hpp"

#include <cmath>
#include <stdexcept>

#include "emff/em_model.hpp"

namespace emff {

namespace {
double sgn(double x) { return (x > 0.0) - (x < 0.0); }
} // namespace

double integrator_update(double xi_prev, double r, double d, const DeadBand& band) {
    if (!(band.eps0 > 0.0 && band.eps1 > band.eps0)) {
        throw std::invalid_argument("integrator_update: need eps1 > eps0 > 0");
    }
    const double err = r - d;
    const double mag = std::fabs(err);
    if (mag > band.eps0 && mag < band.eps1) {
        return xi_prev + err;
    }
    return 0.0;
}

double desired_force_1d(double r, double v, double d, double xi,
                        double alpha, double beta, double rho, double sat_mass) {
    const double rn = std::fabs(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("desired_force_1d: singular separation");
    }
    const double r4 = rn * rn * rn * rn;
    return (-2.0 * sat_mass * r4 / consts::c0) *
           (alpha * ((r - d) + beta * v) + rho * xi);
}

double raw_current(double r, double f_star, int i_minus_j, const CoilSpec& coil) {
    if (i_minus_j == 0) {
        throw std::invalid_argument("raw_current: i and j must differ");
    }
    const double root = std::sqrt(std::fabs(f_star) / 2.0) / coil.na();
    if (i_minus_j < 0) {
        return -sgn(f_star) * root;
    }
    return -sgn(r) * root;
}

double peak_window_current(const std::vector<std::pair<double, double>>& amp_omega,
                           double period) {
    constexpr int kGrid = 2000;
    double peak = 0.0;
    for (int n = 0; n < kGrid; ++n) {
        const double t = period * n / kGrid;
        double s = 0.0;
        for (const auto& [amp, omega] : amp_omega) {
            s += amp * std::sin(omega * t);
        }
        peak = std::max(peak, std::fabs(s));
    }
    return peak;
}

std::map<PairKey, double> saturate_currents(const std::map<PairKey, double>& raw,
                                            double peak, double i_max,
                                            const std::map<PairKey, double>& gamma) {
    const double scale = peak > i_max ? i_max / peak : 1.0;
    std::map<PairKey, double> out;
    for (const auto& [key, amp] : raw) {
        auto it = gamma.find(key);
        const double g = it == gamma.end() ? 1.0 : it->second;
        out[key] = g * scale * amp;
    }
    return out;
}

double realized_avg_force_1d(double r, double p_ij, double p_ji) {
    const double rn = std::fabs(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("realized_avg_force_1d: singular separation");
    }
    const double r4 = rn * rn * rn * rn;
    return (consts::c0 / (2.0 * r4)) * (-2.0 * sgn(r) * p_ij * p_ji);
}

} // namespace emff
