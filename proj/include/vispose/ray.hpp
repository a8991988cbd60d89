#pragma once

#include <optional>

#include "vispose/mesh.hpp"

namespace vispose {

struct RayHit {
  double t = 0.0;      // distance along the (unit-scaled) direction
  int face_index = -1;
};

// Minimum accepted hit distance; hits at or below this are treated as
// self-intersections and skipped.
inline constexpr double kRayEpsilon = 1e-9;

/// Nearest intersection of the ray origin + t * direction with the mesh,
/// t in (kRayEpsilon, t_max). Watertight ray/triangle test (Woop et al.),
/// so shared edges and vertices cannot leak. Direction need not be unit
/// length; t is measured in units of |direction|.
std::optional<RayHit> ray_mesh_first_hit(
    const Mesh& mesh, const Vec3& origin, const Vec3& direction,
    double t_max = std::numeric_limits<double>::infinity());

/// True if any triangle is hit with t in (kRayEpsilon, t_max).
bool ray_mesh_any_hit(const Mesh& mesh, const Vec3& origin, const Vec3& direction,
                      double t_max);

}  // namespace vispose
