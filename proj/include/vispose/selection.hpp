#pragma once

#include <optional>

#include "vispose/types.hpp"
#include "vispose/mesh.hpp"

namespace vispose {

struct SelectionConfig {
  int n_select = 256;
  double fallback_ratio_threshold = 0.1;
};

// Chosen keypoint indices, sorted ascending. used_fallback marks selections
// that came from even sampling instead of importance ranking.
struct Selection {
  std::vector<int> indices;
  bool used_fallback = false;
};

/// Indices of the n_select largest importance entries, ties broken by lower
/// index.
Selection select_top(const Eigen::VectorXd& importance, const SelectionConfig& config);

/// Importance-based selection, falling back to farthest-point-sampled even
/// coverage when the visible ratio drops below the threshold or no
/// importance vector is available.
Selection select_with_fallback(const std::vector<std::uint8_t>& visibility,
                               const std::optional<Eigen::VectorXd>& importance,
                               const KeypointSet& keypoints,
                               const SelectionConfig& config);

// Multi-view keypoint merge for meshes reconstructed per view: from every
// mesh, FPS-sample total/m of its internally visible vertices under its own
// view pose.
struct MergedKeypoints {
  KeypointSet keypoints;
  std::vector<int> source_mesh;  // mesh-of-origin per keypoint
};

MergedKeypoints merge_multiview_keypoints(const std::vector<Mesh>& meshes,
                                          const std::vector<Pose>& view_poses,
                                          int total);

}  // namespace vispose
