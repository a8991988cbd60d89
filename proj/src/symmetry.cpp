#include "vispose/symmetry.hpp"

#include <cmath>

#include "vispose/visibility.hpp"

namespace vispose {

namespace {

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * M_PI);
  if (theta < 0.0) theta += 2.0 * M_PI;
  return theta;
}

// Minimizer of a*cos(theta) + b*sin(theta); (0, 0) degenerates to 0.
double minimizing_angle(double a, double b) {
  if (a == 0.0 && b == 0.0) {
    return 0.0;
  }
  if (a == 0.0) {
    return wrap_angle(M_PI / 2.0 + (b > 0.0 ? M_PI : 0.0));
  }
  return wrap_angle(std::atan(b / a) + (a > 0.0 ? M_PI : 0.0));
}

int visible_count_in_subset(const KeypointSet& keypoints, const Pose& pose,
                            const std::vector<int>& subset) {
  int count = 0;
  for (int idx : subset) {
    const Vec3 towards_camera = -pose.apply(keypoints.points[idx]);
    const Vec3 normal_cam = pose.R * keypoints.normals[idx];
    count += towards_camera.dot(normal_cam) > 0.0 ? 1 : 0;
  }
  return count;
}

}  // namespace

void validate_symmetry_spec(const SymmetrySpec& spec) {
  if (spec.discrete.empty()) {
    throw DataError("symmetry spec has no discrete transforms (identity required)");
  }
  bool has_identity = false;
  for (const auto& S : spec.discrete) {
    if (!is_rotation(S, 1e-6)) {
      throw DataError("discrete symmetry transform is not a rotation");
    }
    if ((S - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9) has_identity = true;
  }
  if (!has_identity) {
    throw DataError("symmetry spec must include the identity");
  }
  if (spec.continuous_axes.size() > 2) {
    throw DataError("at most two continuous symmetry axes are supported");
  }
  for (const auto& axis : spec.continuous_axes) {
    if (std::abs(axis.norm() - 1.0) > 1e-6) {
      throw DataError("continuous symmetry axis must be unit length");
    }
  }
  if (spec.continuous_axes.size() == 2 &&
      std::abs(spec.continuous_axes[0].dot(spec.continuous_axes[1])) > 1e-9) {
    throw DataError("continuous symmetry axes must be orthogonal");
  }
}

double canonical_angle(const Pose& pose) {
  const Vec3 rt = pose.R.transpose() * pose.t;
  return minimizing_angle(rt.x(), rt.y());
}

double canonical_angle_second_axis(const Pose& pose) {
  const Vec3 rt = pose.R.transpose() * pose.t;
  return minimizing_angle(rt.z(), rt.x());
}

AxisAlignment axis_align(const SymmetrySpec& spec, const Mesh& mesh,
                         const KeypointSet& keypoints) {
  if (spec.continuous_axes.empty()) {
    throw std::invalid_argument("axis_align: spec has no continuous axis");
  }
  const Vec3 a1 = spec.continuous_axes[0].normalized();

  Mat3 Q;
  if (spec.continuous_axes.size() >= 2) {
    const Vec3 a2 = spec.continuous_axes[1].normalized();
    // rows (a2 x a1, a2, a1) map a1 -> z and a2 -> y with det +1
    Q.row(0) = a2.cross(a1);
    Q.row(1) = a2;
    Q.row(2) = a1;
  } else if (a1.dot(Vec3::UnitZ()) > 1.0 - 1e-12) {
    Q = Mat3::Identity();
  } else if (a1.dot(Vec3::UnitZ()) < -1.0 + 1e-12) {
    Q = Eigen::AngleAxisd(M_PI, Vec3::UnitX()).toRotationMatrix();
  } else {
    const Vec3 u2 = Vec3::UnitZ().cross(a1).normalized();
    Q.row(0) = u2.cross(a1);
    Q.row(1) = u2;
    Q.row(2) = a1;
  }

  AxisAlignment out;
  out.rotation = Q;
  out.mesh = mesh;
  for (auto& v : out.mesh.vertices) v = Q * v;
  for (auto& n : out.mesh.vertex_normals) n = Q * n;
  out.keypoints = keypoints;
  for (auto& p : out.keypoints.points) p = Q * p;
  for (auto& n : out.keypoints.normals) n = Q * n;
  out.spec = spec;
  for (auto& axis : out.spec.continuous_axes) axis = Q * axis;
  for (auto& S : out.spec.discrete) S = Q * S * Q.transpose();
  return out;
}

Pose canonicalize_continuous(const Pose& pose) {
  const double theta = canonical_angle(pose);
  return Pose{pose.R * rot_z(theta), pose.t};
}

Pose canonicalize_second_axis(const Pose& pose) {
  const double phi = canonical_angle_second_axis(pose);
  return Pose{pose.R * rot_y(phi), pose.t};
}

SymSubset build_sym_subset(const KeypointSet& keypoints, const RotationSet& rotations,
                           const Vec3& fixed_translation) {
  if (rotations.rotations.empty()) {
    throw std::invalid_argument("build_sym_subset: empty rotation set");
  }
  if (fixed_translation.z() <= 0.0) {
    throw std::invalid_argument("build_sym_subset: translation must have positive depth");
  }
  int best_rotation = -1;
  int best_count = -1;
  for (size_t ri = 0; ri < rotations.rotations.size(); ++ri) {
    const Pose pose{rotations.rotations[ri], fixed_translation};
    const auto flags = internal_visibility(keypoints, pose);
    int count = 0;
    for (auto f : flags) count += f;
    if (count > best_count) {
      best_count = count;
      best_rotation = static_cast<int>(ri);
    }
  }
  if (best_count <= 0) {
    throw NumericError("build_sym_subset: no rotation sees any keypoint");
  }
  const Pose best_pose{rotations.rotations[best_rotation], fixed_translation};
  const auto flags = internal_visibility(keypoints, best_pose);
  SymSubset subset;
  for (size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) subset.indices.push_back(static_cast<int>(i));
  }
  return subset;
}

Pose canonicalize_discrete(const Pose& pose, const SymmetrySpec& spec,
                           const SymSubset& subset, const KeypointSet& keypoints) {
  int best = 0;
  int best_count = -1;
  for (size_t si = 0; si < spec.discrete.size(); ++si) {
    const Pose candidate{pose.R * spec.discrete[si], pose.t};
    const int count = visible_count_in_subset(keypoints, candidate, subset.indices);
    if (count > best_count) {
      best_count = count;
      best = static_cast<int>(si);
    }
  }
  return Pose{pose.R * spec.discrete[best], pose.t};
}

Pose canonicalize(const Pose& pose, const SymmetrySpec& spec, const SymSubset& subset,
                  const KeypointSet& keypoints) {
  Pose out = pose;
  if (!spec.continuous_axes.empty()) {
    out = canonicalize_continuous(out);
    if (spec.continuous_axes.size() >= 2) {
      out = canonicalize_second_axis(out);
    }
  }
  if (spec.has_discrete()) {
    out = canonicalize_discrete(out, spec, subset, keypoints);
  }
  return out;
}

}  // namespace vispose
