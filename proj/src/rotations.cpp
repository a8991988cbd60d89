#include "vispose/rotations.hpp"

#include "vispose/shapes.hpp"

namespace vispose {

Mat3 view_rotation(const Vec3& direction) {
  const Vec3 d = direction.normalized();
  Vec3 up = Vec3::UnitY();
  if (std::abs(d.dot(up)) > 1.0 - 1e-9) {
    up = Vec3::UnitX();
  }
  const Vec3 a = up.cross(d).normalized();
  const Vec3 b = d.cross(a);
  Mat3 R;
  R.row(0) = a;
  R.row(1) = b;
  R.row(2) = d;
  return R;
}

RotationSet icosphere_rotation_sample(int subdivision_level) {
  RotationSet set;
  for (const Vec3& d : icosphere_directions(subdivision_level)) {
    set.rotations.push_back(view_rotation(d));
  }
  return set;
}

Mat3 uniform_random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace vispose
