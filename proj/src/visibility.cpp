#include "vispose/visibility.hpp"

#include <cmath>

#include "vispose/ray.hpp"

namespace vispose {

std::vector<std::uint8_t> external_visibility(const KeypointSet& keypoints,
                                              const Pose& pose, const Camera& camera,
                                              const MaskImage& mask) {
  if (mask.width != camera.width || mask.height != camera.height) {
    throw DataError("mask dimensions do not match camera");
  }
  std::vector<std::uint8_t> flags(keypoints.points.size(), 0);
  for (size_t i = 0; i < keypoints.points.size(); ++i) {
    Vec2 px;
    if (!try_project(camera, pose, keypoints.points[i], px)) {
      continue;  // behind camera -> invisible
    }
    const long col = std::lround(px.x());
    const long row = std::lround(px.y());
    if (col < 0 || col >= camera.width || row < 0 || row >= camera.height) {
      continue;
    }
    flags[i] = mask.at(static_cast<int>(col), static_cast<int>(row)) ? 1 : 0;
  }
  return flags;
}

std::vector<std::uint8_t> internal_visibility(const KeypointSet& keypoints,
                                              const Pose& pose) {
  std::vector<std::uint8_t> flags(keypoints.points.size(), 0);
  for (size_t i = 0; i < keypoints.points.size(); ++i) {
    const Vec3 towards_camera = -pose.apply(keypoints.points[i]);
    const Vec3 normal_cam = pose.R * keypoints.normals[i];
    flags[i] = towards_camera.dot(normal_cam) > 0.0 ? 1 : 0;
  }
  return flags;
}

std::vector<std::uint8_t> overall_visibility(const std::vector<std::uint8_t>& v_ex,
                                             const std::vector<std::uint8_t>& v_in) {
  if (v_ex.size() != v_in.size()) {
    throw std::invalid_argument("overall_visibility: length mismatch");
  }
  std::vector<std::uint8_t> v(v_ex.size());
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = (v_ex[i] && v_in[i]) ? 1 : 0;
  }
  return v;
}

VisibilityLabels compute_labels(const KeypointSet& keypoints, const Pose& pose,
                                const Camera& camera, const MaskImage& mask) {
  VisibilityLabels labels;
  labels.v_ex = external_visibility(keypoints, pose, camera, mask);
  labels.v_in = internal_visibility(keypoints, pose);
  labels.v = overall_visibility(labels.v_ex, labels.v_in);
  return labels;
}

std::vector<std::uint8_t> oracle_visibility(const KeypointSet& keypoints,
                                            const Pose& keypoint_pose,
                                            const Scene& scene) {
  validate_scene(scene);
  std::vector<std::uint8_t> flags(keypoints.points.size(), 0);
  for (size_t i = 0; i < keypoints.points.size(); ++i) {
    const Vec3 start = keypoint_pose.apply(keypoints.points[i]) +
                       kOracleOffset * (keypoint_pose.R * keypoints.normals[i]);
    // unit direction toward the camera at the origin, so t is in meters
    const double dist = start.norm();
    if (dist <= kRayEpsilon) {
      continue;  // keypoint at the camera center: not visible
    }
    const Vec3 dir_cam = -start / dist;
    bool occluded = false;
    for (const auto& entry : scene.entries) {
      // express the segment in the entry's object frame
      const Vec3 o = entry.pose.R.transpose() * (start - entry.pose.t);
      const Vec3 d = entry.pose.R.transpose() * dir_cam;
      if (ray_mesh_any_hit(*entry.mesh, o, d, dist)) {
        occluded = true;
        break;
      }
    }
    flags[i] = occluded ? 0 : 1;
  }
  return flags;
}

double labeling_accuracy(const std::vector<std::uint8_t>& predicted,
                         const std::vector<std::uint8_t>& oracle) {
  if (predicted.size() != oracle.size()) {
    throw std::invalid_argument("labeling_accuracy: length mismatch");
  }
  if (predicted.empty()) {
    throw std::invalid_argument("labeling_accuracy: empty input");
  }
  size_t agree = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    agree += ((predicted[i] != 0) == (oracle[i] != 0));
  }
  return static_cast<double>(agree) / static_cast<double>(predicted.size());
}

}  // namespace vispose
