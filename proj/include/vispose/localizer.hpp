#pragma once

#include "vispose/camera.hpp"
#include "vispose/mesh.hpp"

namespace vispose {

// Stand-in for a learned keypoint localizer: visible keypoints localize with
// small Gaussian error, invisible ones with large error plus a uniform
// outlier mixture.
struct NoiseModel {
  double sigma_visible = 1.0;          // pixels
  double sigma_invisible = 8.0;        // pixels
  double outlier_rate_invisible = 0.2;
  double outlier_radius = 32.0;        // pixels
};

void validate_noise_model(const NoiseModel& model);

/// Per-keypoint estimated pixel locations. Each true projection is perturbed
/// by Gaussian noise whose sigma follows the keypoint's oracle visibility;
/// invisible keypoints are additionally replaced, with probability
/// outlier_rate_invisible, by a uniform draw within outlier_radius of the
/// true projection. Behind-camera keypoints land on the image border.
/// Deterministic given the seed.
std::vector<Vec2> simulate_localization(const KeypointSet& keypoints, const Pose& pose,
                                        const Camera& camera,
                                        const std::vector<std::uint8_t>& oracle_visibility,
                                        const NoiseModel& noise, std::uint64_t seed);

}  // namespace vispose
