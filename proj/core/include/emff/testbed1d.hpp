#pragma once

#include <map>
#include <utility>
#include <vector>

#include "emff/amff.hpp"

namespace emff {

/// Electromagnetic coil parameters of one actuation unit.
struct CoilSpec {
    int turns = 500;            // N
    double area = 0.0;          // A, m^2
    double max_current = 2.35;  // current amplitude cap, A

    double na() const { return turns * area; } // moment per ampere, m^2
};

/// Deadband for the integral action: the error integrates only while
/// |r - d| lies strictly inside (eps0, eps1); outside, the state resets.
struct DeadBand {
    double eps0 = 0.0; // m
    double eps1 = 0.0; // m
};

/// One step of the deadband integrator. Returns the next accumulated error.
double integrator_update(double xi_prev, double r, double d, const DeadBand& band);

/// Modified desired force-shape value with integral action:
/// -(2 m |r|^4 / c0) * (alpha*((r-d) + beta*v) + rho*xi).
double desired_force_1d(double r, double v, double d, double xi,
                        double alpha, double beta, double rho, double sat_mass);

/// Unweighted current amplitude realizing f_star for the directed pair with
/// index difference i-j. Branches:
///   i-j < 0:  -sgn(f*)/(N A) * sqrt(|f*|/2)
///   i-j > 0:  -sgn(r)/(N A) * sqrt(|f*|/2)
/// The product of the two directed amplitudes then satisfies
/// -2 sgn(r) (NA I_ij)(NA I_ji) = f*. The i-j > 0 branch negates the sign
/// of its textbook form; the positive-sign variant commands the opposite
/// force (see the unit tests for the product identity).
double raw_current(double r, double f_star, int i_minus_j, const CoilSpec& coil);

/// Max of |sum_k amp_k * sin(omega_k t)| over one window, evaluated on a
/// 2000-point uniform grid.
double peak_window_current(const std::vector<std::pair<double, double>>& amp_omega,
                           double period);

/// Applies the authority weights gamma and caps the summed waveform at i_max:
/// every weighted amplitude is scaled by i_max/peak when peak > i_max.
/// `peak` must be peak_window_current of the same weighted set.
std::map<PairKey, double> saturate_currents(const std::map<PairKey, double>& raw,
                                            double peak, double i_max,
                                            const std::map<PairKey, double>& gamma);

/// 1D approximate average force: (c0/(2|r|^4)) * (-2 sgn(r) p_ij p_ji).
double realized_avg_force_1d(double r, double p_ij, double p_ji);

} // namespace emff
