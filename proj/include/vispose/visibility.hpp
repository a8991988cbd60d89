#pragma once

#include "vispose/render.hpp"

namespace vispose {

// Per-keypoint binary labels; v[i] = v_ex[i] AND v_in[i].
struct VisibilityLabels {
  std::vector<std::uint8_t> v_ex;
  std::vector<std::uint8_t> v_in;
  std::vector<std::uint8_t> v;
};

/// Flag per keypoint: projected point, rounded to the nearest pixel, lies
/// inside the image and on the mask. Behind-camera and out-of-bounds
/// keypoints are externally invisible, not errors.
std::vector<std::uint8_t> external_visibility(const KeypointSet& keypoints,
                                              const Pose& pose, const Camera& camera,
                                              const MaskImage& mask);

/// Back-face culling test per keypoint: 1 iff (-(R p + t)) . (R n) > 0,
/// strictly. Exact for convex surfaces, approximate otherwise.
std::vector<std::uint8_t> internal_visibility(const KeypointSet& keypoints,
                                              const Pose& pose);

/// Elementwise AND of the two flag vectors.
std::vector<std::uint8_t> overall_visibility(const std::vector<std::uint8_t>& v_ex,
                                             const std::vector<std::uint8_t>& v_in);

VisibilityLabels compute_labels(const KeypointSet& keypoints, const Pose& pose,
                                const Camera& camera, const MaskImage& mask);

// Offset applied along the keypoint normal before casting the occlusion ray.
inline constexpr double kOracleOffset = 1e-9;

/// Ground-truth visibility by ray casting: 1 iff the segment from the
/// keypoint (offset along its normal) to the camera origin hits no triangle
/// of any scene mesh. keypoint_pose places the keypoints in the camera
/// frame; it is usually scene.entries[target].pose.
std::vector<std::uint8_t> oracle_visibility(const KeypointSet& keypoints,
                                            const Pose& keypoint_pose,
                                            const Scene& scene);

/// Mean agreement between two flag vectors, in [0, 1]. Empty input is an
/// error.
double labeling_accuracy(const std::vector<std::uint8_t>& predicted,
                         const std::vector<std::uint8_t>& oracle);

}  // namespace vispose
