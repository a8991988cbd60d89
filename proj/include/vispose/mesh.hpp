#pragma once

#include <array>
#include <optional>

#include "vispose/types.hpp"

namespace vispose {

// Triangle mesh in the object frame, units are meters. Vertex normals are
// optional until computed or loaded; ops that need them say so.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> vertex_normals;  // empty or one unit vector per vertex

  bool has_normals() const { return vertex_normals.size() == vertices.size() && !vertices.empty(); }
};

// Sampled surface points with unit normals; source_indices refer back to the
// vertex (or face, for derived sets) each point originated from.
struct KeypointSet {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<int> source_indices;

  int size() const { return static_cast<int>(points.size()); }
};

struct RotationSet {
  std::vector<Mat3> rotations;

  int size() const { return static_cast<int>(rotations.size()); }
};

/// Checks the structural mesh invariants (index bounds, at least one face,
/// non-degenerate faces, unit normals when present). Throws DataError.
void validate_mesh(const Mesh& mesh);

void validate_keypoints(const KeypointSet& kps);

/// Area-weighted vertex normals from face geometry. Replaces any existing
/// normals. A vertex with no incident face is an error ("isolated vertex").
Mesh compute_vertex_normals(Mesh mesh);

/// Greedy farthest point sampling over arbitrary points. First pick is
/// seed_index; every next pick maximizes the min distance to the picks so
/// far, ties broken by lowest index. Returns indices in pick order.
std::vector<int> farthest_point_indices(const std::vector<Vec3>& points, int count,
                                        int seed_index);

/// FPS over mesh vertices; requires vertex normals (keypoints carry them).
KeypointSet farthest_point_sampling(const Mesh& mesh, int count, int seed_index = 0);

/// Maximum pairwise vertex distance.
double object_diameter(const Mesh& mesh);

/// Keypoints at face centroids carrying exact face normals. These sample the
/// true local surface orientation, unlike averaged vertex normals.
KeypointSet face_centroid_keypoints(const Mesh& mesh);

}  // namespace vispose
