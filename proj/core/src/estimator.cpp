#include "emff/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emff {

void KalmanConfig::validate() const {
    if (period <= 0.0 || meas_var <= 0.0 || dist_var <= 0.0) {
        throw std::invalid_argument("KalmanConfig: T, V and w must be positive");
    }
}

Mat2 solve_dare(const KalmanConfig& cfg) {
    cfg.validate();
    const double t = cfg.period;
    const double b0 = 0.5 * t * t;
    const double b1 = t;

    Mat2 p;
    p(0, 0) = p(1, 1) = 1.0;

    for (long iter = 0; iter < 1000000; ++iter) {
        // M = A P A'
        const double m00 = p(0, 0) + t * (p(0, 1) + p(1, 0)) + t * t * p(1, 1);
        const double m01 = p(0, 1) + t * p(1, 1);
        const double m10 = p(1, 0) + t * p(1, 1);
        const double m11 = p(1, 1);
        // innovation variance and gain column K = A P C' / s
        const double s = p(0, 0) + cfg.meas_var;
        const double k0 = p(0, 0) + t * p(1, 0);
        const double k1 = p(1, 0);

        Mat2 next;
        next(0, 0) = m00 - k0 * k0 / s + cfg.dist_var * b0 * b0;
        next(0, 1) = m01 - k0 * k1 / s + cfg.dist_var * b0 * b1;
        next(1, 0) = m10 - k1 * k0 / s + cfg.dist_var * b1 * b0;
        next(1, 1) = m11 - k1 * k1 / s + cfg.dist_var * b1 * b1;

        double delta = 0.0;
        for (int e = 0; e < 4; ++e) {
            delta = std::max(delta, std::fabs(next.m[static_cast<std::size_t>(e)] -
                                              p.m[static_cast<std::size_t>(e)]));
        }
        p = next;
        if (delta <= 1e-13) {
            return p;
        }
    }
    throw std::runtime_error("solve_dare: no convergence after 1e6 iterations");
}

std::array<double, 2> kalman_gain(const Mat2& p, const KalmanConfig& cfg) {
    const double s = p(0, 0) + cfg.meas_var;
    if (s <= 0.0) {
        throw std::runtime_error("kalman_gain: singular innovation variance");
    }
    return {p(0, 0) / s, p(1, 0) / s};
}

KalmanState kf_update(const KalmanState& state, double meas, double nu_hat,
                      const KalmanConfig& cfg) {
    const double t = cfg.period;
    const double l0 = state.gain[0];
    const double l1 = state.gain[1];
    // C A = [1, T], C B = T^2/2
    const double pred_r = state.r_hat + t * state.v_hat;
    const double cb = 0.5 * t * t;

    KalmanState next = state;
    next.r_hat = pred_r - l0 * pred_r + (cb - l0 * cb) * nu_hat + l0 * meas;
    next.v_hat = state.v_hat - l1 * pred_r + (t - l1 * cb) * nu_hat + l1 * meas;
    return next;
}

double input_estimate(const FormationGraph& graph, int i, int j, double sat_mass,
                      const std::function<double(int, int)>& force_of) {
    double sum = 0.0;
    for (int g : graph.neighbors(i)) {
        sum += force_of(i, g);
    }
    sum -= force_of(j, i);
    for (int h : graph.neighbors(i)) {
        if (h != j && graph.has_edge(j, h)) {
            sum -= force_of(j, h);
        }
    }
    return sum / sat_mass;
}

} // namespace emff
