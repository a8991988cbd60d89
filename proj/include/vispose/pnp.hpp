#pragma once

#include "vispose/camera.hpp"

namespace vispose {

struct CorrespondenceSet {
  std::vector<Vec3> points3d;  // object frame
  std::vector<Vec2> pixels2d;

  int size() const { return static_cast<int>(points3d.size()); }
};

void validate_correspondences(const CorrespondenceSet& c);

struct PoseEstimate {
  Pose pose;
  std::vector<std::uint8_t> inliers;
  double mean_reprojection_error = 0.0;  // pixels, over inliers
  int inlier_count = 0;
};

/// Reprojection error in pixels for one correspondence; returns +inf when
/// the point lands behind the camera.
double reprojection_error(const Camera& camera, const Pose& pose, const Vec3& point,
                          const Vec2& pixel);

/// EPnP: control points from centroid + principal directions, barycentric
/// coordinates, nullspace beta cases with Gauss-Newton refinement, pose via
/// orthogonal Procrustes. Near-coplanar point sets switch to a 3-control-
/// point branch. Needs >= 4 correspondences; collinear points are an error.
Pose epnp(const CorrespondenceSet& correspondences, const Camera& camera);

struct RansacConfig {
  int iterations = 400;
  double reprojection_threshold = 2.0;  // pixels
  std::uint64_t seed = 0;
};

/// RANSAC over minimal 4-point EPnP hypotheses, refined by EPnP on the best
/// inlier set. Deterministic given the seed. Throws NumericError("pose not
/// found") when no hypothesis reaches 4 inliers.
PoseEstimate ransac_pnp(const CorrespondenceSet& correspondences, const Camera& camera,
                        const RansacConfig& config);

}  // namespace vispose
