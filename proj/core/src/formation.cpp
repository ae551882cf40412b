#include "emff/formation.hpp"

#include <cmath>
#include <stdexcept>

#include "emff/em_model.hpp"

namespace emff {

double FormationGraph::alpha_of(int i, int j) const {
    auto it = alpha.find(unordered_key(i, j));
    return it == alpha.end() ? 0.0 : it->second;
}

double FormationGraph::rho_of(int i, int j) const {
    auto it = rho.find(unordered_key(i, j));
    return it == rho.end() ? 0.0 : it->second;
}

double FormationGraph::gamma_of(int i, int j) const {
    auto it = gamma.find(PairKey{i, j});
    return it == gamma.end() ? 1.0 : it->second;
}

Vec3 FormationGraph::desired_of(int i, int j) const {
    auto it = desired.find(PairKey{i, j});
    if (it != desired.end()) return it->second;
    it = desired.find(PairKey{j, i});
    if (it != desired.end()) return -it->second;
    return Vec3{};
}

std::vector<int> FormationGraph::neighbors(int i) const {
    if (i < 1 || i > n) {
        throw std::invalid_argument("FormationGraph: unknown vertex");
    }
    std::vector<int> out;
    for (int j = 1; j <= n; ++j) {
        if (j != i && has_edge(i, j)) out.push_back(j);
    }
    return out;
}

void FormationGraph::validate() const {
    if (n < 2) {
        throw std::invalid_argument("FormationGraph: need at least 2 satellites");
    }
    for (const auto& [e, _] : alpha) {
        if (!edges.count(e)) {
            throw std::invalid_argument("FormationGraph: alpha given for a non-edge");
        }
    }
    for (const auto& e : edges) {
        if (e.first < 1 || e.second > n || e.first >= e.second) {
            throw std::invalid_argument("FormationGraph: edge endpoints out of range");
        }
        if (alpha_of(e.first, e.second) <= 0.0) {
            throw std::invalid_argument("FormationGraph: alpha must be positive on edges");
        }
        if (rho_of(e.first, e.second) < 0.0) {
            throw std::invalid_argument("FormationGraph: rho must be nonnegative");
        }
        const double gij = gamma_of(e.first, e.second);
        const double gji = gamma_of(e.second, e.first);
        if (gij <= 0.0 || std::fabs(gij * gji - 1.0) > 1e-9) {
            throw std::invalid_argument("FormationGraph: gamma_ji must equal 1/gamma_ij");
        }
    }
    if (beta <= 0.0) {
        throw std::invalid_argument("FormationGraph: beta must be positive");
    }
    // connectivity via flood fill from vertex 1
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> stack{1};
    seen[1] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int j = 1; j <= n; ++j) {
            if (!seen[j] && has_edge(v, j)) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    for (int v = 1; v <= n; ++v) {
        if (!seen[v]) {
            throw std::invalid_argument("FormationGraph: graph is not connected");
        }
    }
}

Vec3 desired_force_shape(const Vec3& r, const Vec3& v, const Vec3& d,
                         double alpha, double beta, double sat_mass) {
    const double rn = magnitude(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("desired_force_shape: singular separation");
    }
    const double r4 = rn * rn * rn * rn;
    return (-2.0 * sat_mass * r4 / consts::c0) * alpha * ((r - d) + beta * v);
}

} // namespace emff
