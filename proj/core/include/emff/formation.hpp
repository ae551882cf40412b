#pragma once

#include <map>
#include <set>
#include <vector>

#include "emff/amff.hpp"
#include "emff/vec3.hpp"

namespace emff {

/// Formation feedback structure: undirected graph, per-edge gains, per-pair
/// control-authority weights and desired relative positions.
struct FormationGraph {
    int n = 0;                          // satellite count, ids 1..n
    std::set<PairKey> edges;            // unordered pairs
    std::map<PairKey, double> alpha;    // spring gain per edge (unordered key)
    double beta = 0.0;                  // global dashpot gain, s
    std::map<PairKey, double> rho;      // integral gain per edge (unordered key)
    std::map<PairKey, double> gamma;    // authority weight per ordered pair
    std::map<PairKey, Vec3> desired;    // d_ij per ordered pair, m

    bool has_edge(int i, int j) const { return edges.count(unordered_key(i, j)) > 0; }
    double alpha_of(int i, int j) const;
    double rho_of(int i, int j) const;
    double gamma_of(int i, int j) const;
    Vec3 desired_of(int i, int j) const;

    /// Neighbor set of satellite i; the control loop of satellite i may read
    /// only these pairs' measurements.
    std::vector<int> neighbors(int i) const;

    /// Checks connectivity, gain symmetry/positivity, d_ij = -d_ji and
    /// gamma_ji = 1/gamma_ij. Throws std::invalid_argument with the violated
    /// condition named.
    void validate() const;
};

/// Desired intersatellite force-shape value for one pair:
/// -(2 m |r|^4 / c0) * alpha * ((r - d) + beta * v).
Vec3 desired_force_shape(const Vec3& r, const Vec3& v, const Vec3& d,
                         double alpha, double beta, double sat_mass);

} // namespace emff
