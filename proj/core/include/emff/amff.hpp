#pragma once

#include <functional>
#include <map>
#include <utility>

#include "emff/vec3.hpp"

namespace emff {

/// Ordered satellite pair (i, j), i != j. Satellite ids are 1-based.
using PairKey = std::pair<int, int>;

/// Unordered key for per-pair data shared by both directions.
inline PairKey unordered_key(int i, int j) {
    return i < j ? PairKey{i, j} : PairKey{j, i};
}

/// Interaction frequencies, one per unordered pair, plus the common window
/// length T. Every pair frequency must complete a whole number of periods in T.
struct FrequencyPlan {
    std::map<PairKey, double> pair_omega; // rad/s, keyed by unordered pair
    double period = 0.0;                  // T, s

    double omega(int i, int j) const;

    /// Throws std::invalid_argument when frequencies are non-positive, repeat
    /// across pairs, or T is not a common multiple of the pair periods.
    void validate() const;
};

/// Per-step sinusoid amplitudes p_ij, the control variables. Keyed by the
/// ordered pair; entries exist exactly for the formation graph's edges.
struct AmplitudeSet {
    std::map<PairKey, Vec3> amp;
};

/// Magnetic moment of satellite i at time t within step k:
/// sum over neighbors of p_ij * sin(omega_ij * t).
/// Throws std::invalid_argument when t lies outside [kT, kT+T).
Vec3 moment_waveform(int i, double t, const FrequencyPlan& plan,
                     const AmplitudeSet& amps, long step);

/// Window average of force_shape for a same-frequency amplitude pair:
/// 0.5 * force_shape(r, p_ij, p_ji).
Vec3 averaged_force_shape(const Vec3& r, const Vec3& p_ij, const Vec3& p_ji);

/// Composite-Simpson time average of force_shape(r, ui(t), uj(t)) over one
/// window [kT, kT+T), with frozen r. Reference quadrature for the averaging
/// results; >= 4096 nodes.
Vec3 numeric_average_oracle(const Vec3& r,
                            const std::function<Vec3(double)>& waveform_i,
                            const std::function<Vec3(double)>& waveform_j,
                            long step, double period);

/// Approximate average intersatellite force in newtons:
/// (c0 / (2 |r|^4)) * force_shape(r, p_ij, p_ji).
Vec3 approx_avg_force(const Vec3& r, const Vec3& p_ij, const Vec3& p_ji);

struct AmplitudePair {
    Vec3 g;
    Vec3 h;
};

/// Closed-form amplitude pair (g, h) with force_shape(r, g, h) == f_star.
/// Branches on whether r and f_star are parallel; |r x f*| below
/// 1e-12 * |r| * |f*| is treated as the parallel case.
AmplitudePair allocate_pair(const Vec3& r, const Vec3& f_star);

/// Amplitude for the ordered pair (i, j): the g branch when i < j, and for
/// i > j the h branch evaluated in the lower-indexed satellite's variables
/// (r_ji = -r_ij, f*_ji = -f*_ij), so that the two directed amplitudes
/// jointly realize f_star. Arguments are the pair's own r_ij and f*_ij.
Vec3 select_amplitudes(int i, int j, const Vec3& r_ij, const Vec3& f_star_ij);

} // namespace emff
