#include "vispose/selection.hpp"

#include <algorithm>
#include <numeric>

#include "vispose/visibility.hpp"

namespace vispose {

Selection select_top(const Eigen::VectorXd& importance, const SelectionConfig& config) {
  const int n = static_cast<int>(importance.size());
  if (config.n_select < 1 || config.n_select > n) {
    throw std::invalid_argument("select_top: n_select out of range");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + config.n_select, order.end(),
                    [&](int a, int b) {
                      if (importance[a] != importance[b]) {
                        return importance[a] > importance[b];
                      }
                      return a < b;
                    });
  Selection sel;
  sel.indices.assign(order.begin(), order.begin() + config.n_select);
  std::sort(sel.indices.begin(), sel.indices.end());
  sel.used_fallback = false;
  return sel;
}

Selection select_with_fallback(const std::vector<std::uint8_t>& visibility,
                               const std::optional<Eigen::VectorXd>& importance,
                               const KeypointSet& keypoints,
                               const SelectionConfig& config) {
  const int n = keypoints.size();
  if (static_cast<int>(visibility.size()) != n) {
    throw std::invalid_argument("select_with_fallback: length mismatch");
  }
  int visible = 0;
  for (auto f : visibility) visible += (f != 0);
  const double ratio = static_cast<double>(visible) / n;

  if (!importance.has_value() || visible == 0 ||
      ratio < config.fallback_ratio_threshold) {
    Selection sel;
    sel.indices = farthest_point_indices(keypoints.points, config.n_select, 0);
    std::sort(sel.indices.begin(), sel.indices.end());
    sel.used_fallback = true;
    return sel;
  }
  return select_top(*importance, config);
}

MergedKeypoints merge_multiview_keypoints(const std::vector<Mesh>& meshes,
                                          const std::vector<Pose>& view_poses,
                                          int total) {
  const int m = static_cast<int>(meshes.size());
  if (m == 0 || view_poses.size() != meshes.size()) {
    throw std::invalid_argument("merge_multiview_keypoints: mesh/pose mismatch");
  }
  if (total <= 0 || total % m != 0) {
    throw std::invalid_argument("merge_multiview_keypoints: total must divide by view count");
  }
  const int per_mesh = total / m;

  MergedKeypoints out;
  for (int mi = 0; mi < m; ++mi) {
    const Mesh& mesh = meshes[mi];
    if (!mesh.has_normals()) {
      throw DataError("merge_multiview_keypoints: mesh lacks normals");
    }
    KeypointSet all_vertices;
    all_vertices.points = mesh.vertices;
    all_vertices.normals = mesh.vertex_normals;
    all_vertices.source_indices.resize(mesh.vertices.size());
    std::iota(all_vertices.source_indices.begin(), all_vertices.source_indices.end(), 0);

    const auto flags = internal_visibility(all_vertices, view_poses[mi]);
    std::vector<Vec3> visible_points;
    std::vector<int> visible_vertex;
    for (size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) {
        visible_points.push_back(mesh.vertices[i]);
        visible_vertex.push_back(static_cast<int>(i));
      }
    }
    if (static_cast<int>(visible_points.size()) < per_mesh) {
      throw NumericError("merge_multiview_keypoints: mesh " + std::to_string(mi) +
                         " has fewer visible vertices than its quota");
    }
    const auto picked = farthest_point_indices(visible_points, per_mesh, 0);
    for (int pi : picked) {
      const int v = visible_vertex[pi];
      out.keypoints.points.push_back(mesh.vertices[v]);
      out.keypoints.normals.push_back(mesh.vertex_normals[v]);
      out.keypoints.source_indices.push_back(v);
      out.source_mesh.push_back(mi);
    }
  }
  return out;
}

}  // namespace vispose
