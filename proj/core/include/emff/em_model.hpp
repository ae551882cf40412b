#pragma once

#include <span>
#include <vector>

#include "emff/vec3.hpp"

namespace emff {

namespace consts {
/// Vacuum permeability, N/A^2.
inline constexpr double mu0 = 4.0e-7 * 3.14159265358979323846;
/// 3*mu0/(4*pi), the dipole force scale. Exactly 3e-7 N/A^2.
inline constexpr double c0 = 3.0e-7;
} // namespace consts

/// Separations below this are rejected as singular; the dipole model diverges
/// and the testbed never operates below ~0.3 m.
inline constexpr double kMinSeparation = 1e-6;

struct SatelliteBody {
    double mass = 1.0;       // kg, > 0
    Vec3 position;           // m
    Vec3 velocity;           // m/s
    double damping = 0.0;    // N*s/m, >= 0
};

/// Geometry-dependent part of the dipole-dipole force between moments ui and
/// uj at separation r (force on the satellite carrying ui). Excludes the
/// c0/|r|^4 scale; depends on r only through its direction.
/// Throws std::domain_error when |r| < kMinSeparation.
Vec3 force_shape(const Vec3& r, const Vec3& ui, const Vec3& uj);

/// Full intersatellite dipole force in newtons: (c0/|r|^4) * force_shape.
Vec3 intersat_force(const Vec3& r, const Vec3& ui, const Vec3& uj);

/// Acceleration of body i from all pairwise dipole forces plus linear damping.
/// Throws std::domain_error on coincident satellites.
Vec3 acceleration(std::size_t i, std::span<const SatelliteBody> bodies,
                  std::span<const Vec3> moments);

} // namespace emff
