#include "vispose/mesh.hpp"

#include <algorithm>
#include <limits>

namespace vispose {

void validate_mesh(const Mesh& mesh) {
  if (mesh.faces.empty()) {
    throw DataError("mesh has no faces");
  }
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= n) {
        throw DataError("face index out of range");
      }
    }
    const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    if (0.5 * e1.cross(e2).norm() <= 1e-12) {
      throw DataError("degenerate face (area <= 1e-12 m^2)");
    }
  }
  if (!mesh.vertex_normals.empty()) {
    if (mesh.vertex_normals.size() != mesh.vertices.size()) {
      throw DataError("vertex normal count mismatch");
    }
    for (const auto& nrm : mesh.vertex_normals) {
      if (std::abs(nrm.norm() - 1.0) > 1e-6) {
        throw DataError("vertex normal is not unit length");
      }
    }
  }
}

void validate_keypoints(const KeypointSet& kps) {
  if (kps.points.size() != kps.normals.size() ||
      kps.points.size() != kps.source_indices.size()) {
    throw DataError("keypoint field lengths differ");
  }
  for (const auto& nrm : kps.normals) {
    if (std::abs(nrm.norm() - 1.0) > 1e-6) {
      throw DataError("keypoint normal is not unit length");
    }
  }
}

Mesh compute_vertex_normals(Mesh mesh) {
  std::vector<Vec3> acc(mesh.vertices.size(), Vec3::Zero());
  std::vector<char> touched(mesh.vertices.size(), 0);
  for (const auto& f : mesh.faces) {
    const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    const Vec3 weighted = e1.cross(e2);  // |cross| = 2 * area, so this is area weighting
    for (int idx : f) {
      acc[idx] += weighted;
      touched[idx] = 1;
    }
  }
  mesh.vertex_normals.resize(mesh.vertices.size());
  for (size_t i = 0; i < acc.size(); ++i) {
    if (!touched[i]) {
      throw DataError("isolated vertex");
    }
    const double len = acc[i].norm();
    if (len <= 0.0) {
      throw NumericError("vertex normal vanished (opposing incident faces)");
    }
    mesh.vertex_normals[i] = acc[i] / len;
  }
  return mesh;
}

std::vector<int> farthest_point_indices(const std::vector<Vec3>& points, int count,
                                        int seed_index) {
  const int n = static_cast<int>(points.size());
  if (count < 1 || count > n) {
    throw std::invalid_argument("farthest_point_indices: count out of range");
  }
  if (seed_index < 0 || seed_index >= n) {
    throw std::invalid_argument("farthest_point_indices: bad seed index");
  }
  std::vector<int> picked;
  picked.reserve(count);
  picked.push_back(seed_index);

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  for (int step = 1; step < count; ++step) {
    const Vec3& last = points[picked.back()];
    int best = -1;
    double best_d2 = -1.0;
    for (int i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], (points[i] - last).squaredNorm());
      // strict > keeps the lowest index on ties
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    picked.push_back(best);
  }
  return picked;
}

KeypointSet farthest_point_sampling(const Mesh& mesh, int count, int seed_index) {
  if (!mesh.has_normals()) {
    throw DataError("farthest_point_sampling: mesh lacks vertex normals");
  }
  if (count > static_cast<int>(mesh.vertices.size())) {
    throw std::invalid_argument("farthest_point_sampling: count exceeds vertex count");
  }
  const std::vector<int> idx = farthest_point_indices(mesh.vertices, count, seed_index);
  KeypointSet kps;
  kps.points.reserve(idx.size());
  kps.normals.reserve(idx.size());
  kps.source_indices = idx;
  for (int i : idx) {
    kps.points.push_back(mesh.vertices[i]);
    kps.normals.push_back(mesh.vertex_normals[i]);
  }
  return kps;
}

double object_diameter(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  if (n < 2) {
    throw std::invalid_argument("object_diameter: need at least 2 vertices");
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, (mesh.vertices[i] - mesh.vertices[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

KeypointSet face_centroid_keypoints(const Mesh& mesh) {
  KeypointSet kps;
  kps.points.reserve(mesh.faces.size());
  kps.normals.reserve(mesh.faces.size());
  kps.source_indices.reserve(mesh.faces.size());
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const Vec3 nrm = (b - a).cross(c - a);
    const double len = nrm.norm();
    if (len <= 0.0) {
      throw DataError("degenerate face in face_centroid_keypoints");
    }
    kps.points.push_back((a + b + c) / 3.0);
    kps.normals.push_back(nrm / len);
    kps.source_indices.push_back(static_cast<int>(fi));
  }
  return kps;
}

}  // namespace vispose
