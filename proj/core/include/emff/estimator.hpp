#pragma once

#include <array>
#include <functional>

#include "emff/formation.hpp"

namespace emff {

/// Symmetric 2x2 matrix, row-major.
struct Mat2 {
    std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
};

/// Sampled-data double-integrator filter model:
/// A = [[1, T], [0, 1]], B = [T^2/2, T]^T, C = [1, 0], W = w B B^T.
struct KalmanConfig {
    double period = 0.1;  // T, s
    double meas_var = 0.0; // V, m^2
    double dist_var = 0.0; // w, m^2/s^4

    void validate() const;
};

/// Filtered relative position/velocity and the (steady-state) gain.
struct KalmanState {
    double r_hat = 0.0; // m
    double v_hat = 0.0; // m/s
    std::array<double, 2> gain{0.0, 0.0}; // L
};

/// Steady-state prediction covariance: fixed point of
/// P <- A P A' - A P C'(C P C' + V)^{-1} C P A' + W,
/// iterated from the identity until the update is below 1e-13 elementwise.
/// Throws std::runtime_error after 1e6 iterations without convergence.
Mat2 solve_dare(const KalmanConfig& cfg);

/// L = P C' (C P C' + V)^{-1}.
std::array<double, 2> kalman_gain(const Mat2& p, const KalmanConfig& cfg);

/// One step of the steady-state filter recursion:
/// x_k = (A - L C A) x_{k-1} + (B - L C B) nu_{k-1} + L q_k.
KalmanState kf_update(const KalmanState& state, double meas, double nu_hat,
                      const KalmanConfig& cfg);

/// Relative-acceleration input for the (i, j) filter, built only from data
/// available on satellite i: its own neighbor forces minus the forces applied
/// to j by i and by common neighbors of i and j. `force_of(a, b)` must return
/// satellite i's value of the approximate average force on a from b.
double input_estimate(const FormationGraph& graph, int i, int j, double sat_mass,
                      const std::function<double(int, int)>& force_of);

} // namespace emff
