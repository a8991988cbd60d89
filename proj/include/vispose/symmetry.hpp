#pragma once

#include "vispose/mesh.hpp"

namespace vispose {

// The object's proper symmetry transformations: a finite list of rotations
// (identity always included) plus 0, 1 or 2 continuous rotation axes.
struct SymmetrySpec {
  std::vector<Mat3> discrete = {Mat3::Identity()};
  std::vector<Vec3> continuous_axes;

  bool has_continuous() const { return !continuous_axes.empty(); }
  bool has_discrete() const { return discrete.size() > 1; }
  bool is_trivial() const { return !has_continuous() && !has_discrete(); }
};

void validate_symmetry_spec(const SymmetrySpec& spec);

// Fixed keypoint subset whose internal visibility the canonical pose
// maximizes.
struct SymSubset {
  std::vector<int> indices;
};

/// Angle minimizing f(theta) = a*cos(theta) + b*sin(theta) where (a, b) are
/// the first two entries of R^T t; the object frame must already have the
/// symmetry axis on z. Returns a value in [0, 2*pi); (a, b) = (0, 0)
/// degenerates to 0.
double canonical_angle(const Pose& pose);

/// Same minimization for a second symmetry axis on y, reading (a, b) from
/// the third and first entries of R^T t.
double canonical_angle_second_axis(const Pose& pose);

/// Result of rotating the object frame so the first continuous axis lies on
/// +z (and the second, if present, on +y).
struct AxisAlignment {
  Mat3 rotation = Mat3::Identity();  // Q: aligned = Q * original
  Mesh mesh;
  KeypointSet keypoints;
  SymmetrySpec spec;
};

AxisAlignment axis_align(const SymmetrySpec& spec, const Mesh& mesh,
                         const KeypointSet& keypoints);

/// R_tilde = R * R_z(canonical_angle), t unchanged. Requires the axis-aligned
/// frame.
Pose canonicalize_continuous(const Pose& pose);

/// Additional R_y(phi) for a second continuous axis; apply after
/// canonicalize_continuous.
Pose canonicalize_second_axis(const Pose& pose);

/// Largest internally visible keypoint subset over the sampled rotations, at
/// the given fixed translation. Ties pick the lowest rotation index.
SymSubset build_sym_subset(const KeypointSet& keypoints, const RotationSet& rotations,
                           const Vec3& fixed_translation);

/// Among pose * S for the finite transforms S, the one maximizing internally
/// visible keypoints restricted to the subset; ties pick the lowest
/// transform index.
Pose canonicalize_discrete(const Pose& pose, const SymmetrySpec& spec,
                           const SymSubset& subset, const KeypointSet& keypoints);

/// Full pipeline: continuous z axis (if any), second axis (if present),
/// then discrete enumeration (if non-trivial). A trivial spec returns the
/// pose unchanged. Requires the axis-aligned frame.
Pose canonicalize(const Pose& pose, const SymmetrySpec& spec, const SymSubset& subset,
                  const KeypointSet& keypoints);

}  // namespace vispose
