#include "emff/em_model.hpp"

#include <stdexcept>

namespace emff {

Vec3 force_shape(const Vec3& r, const Vec3& ui, const Vec3& uj) {
    const double rn = magnitude(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("force_shape: singular separation (|r| < 1e-6 m)");
    }
    const Vec3 rhat = r / rn;
    const double ui_r = dot(ui, rhat);
    const double uj_r = dot(uj, rhat);
    return uj_r * ui + ui_r * uj + (dot(ui, uj) - 5.0 * ui_r * uj_r) * rhat;
}

Vec3 intersat_force(const Vec3& r, const Vec3& ui, const Vec3& uj) {
    const double rn = magnitude(r);
    if (rn < kMinSeparation) {
        throw std::domain_error("intersat_force: singular separation (|r| < 1e-6 m)");
    }
    const double r2 = rn * rn;
    return (consts::c0 / (r2 * r2)) * force_shape(r, ui, uj);
}

Vec3 acceleration(std::size_t i, std::span<const SatelliteBody> bodies,
                  std::span<const Vec3> moments) {
    const SatelliteBody& body = bodies[i];
    Vec3 sum;
    for (std::size_t j = 0; j < bodies.size(); ++j) {
        if (j == i) continue;
        const Vec3 rij = body.position - bodies[j].position;
        sum += intersat_force(rij, moments[i], moments[j]);
    }
    return sum / body.mass - (body.damping / body.mass) * body.velocity;
}

} // namespace emff
