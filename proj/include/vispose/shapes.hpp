#pragma once

#include "vispose/mesh.hpp"

namespace vispose {

/// Unit directions of a subdivided icosahedron: 10 * 4^level + 2 of them.
std::vector<Vec3> icosphere_directions(int level);

/// Icosphere mesh of the given subdivision level and radius, centered at the
/// origin, with exact radial normals.
Mesh icosphere_mesh(int level, double radius);

/// Axis-aligned box centered at the origin. Faces are triangulated along
/// alternating diagonals so that area-weighted vertex normals come out
/// symmetric at every corner.
Mesh box_mesh(double size_x, double size_y, double size_z);

/// Torus around the z axis: ring radius, tube radius, grid resolution.
/// Normals are the exact parametric surface normals.
Mesh torus_mesh(double ring_radius, double tube_radius, int ring_segments,
                int tube_segments);

/// Two triangles spanning [-sx/2, sx/2] x [-sy/2, sy/2] at z = 0, facing +z.
Mesh quad_mesh(double size_x, double size_y);

/// Icosphere with a smooth radial dent around +x: vertices within cap_angle
/// of the dent axis move inward by up to depth_fraction * radius. Mildly
/// non-convex; normals are recomputed from the displaced geometry.
Mesh dented_sphere_mesh(int level, double radius, double depth_fraction,
                        double cap_angle);

/// Closed cylinder around the z axis.
Mesh cylinder_mesh(double radius, double height, int segments);

}  // namespace vispose
