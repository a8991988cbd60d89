#include <doctest.h>

#include <chrono>
#include <random>

#include "helpers.hpp"
#include "vispose/render.hpp"
#include "vispose/symmetry.hpp"
#include "vispose/visibility.hpp"

using namespace vispose;
using vispose::test::sweep_min_angle;
using vispose::test::sweep_min_value;
using vispose::test::vertex_keypoints;

namespace {

Pose pose_with_rt(const Vec3& rt, std::mt19937_64& rng) {
  // build a pose whose R^T t equals rt
  const Mat3 R = uniform_random_rotation(rng);
  return Pose{R, R * rt};
}

int visible_count(const KeypointSet& kps, const Pose& pose, const std::vector<int>& subset) {
  const auto flags = internal_visibility(kps, pose);
  int count = 0;
  for (int idx : subset) count += flags[idx];
  return count;
}

}  // namespace

TEST_SUITE_BEGIN("symmetry");

TEST_CASE("canonical angle closed form") {
  std::mt19937_64 rng(1);
  SUBCASE("a = 0, b = -1 gives pi/2") {
    const Pose pose = pose_with_rt({0, -1, 3}, rng);
    CHECK(canonical_angle(pose) == doctest::Approx(M_PI / 2).epsilon(1e-12));
  }
  SUBCASE("a = 0, b = +1 gives 3*pi/2") {
    const Pose pose = pose_with_rt({0, 1, 3}, rng);
    CHECK(canonical_angle(pose) == doctest::Approx(3 * M_PI / 2).epsilon(1e-12));
  }
  SUBCASE("a = 1, b = 0 gives pi, the sweep minimum") {
    const Pose pose = pose_with_rt({1, 0, 3}, rng);
    const double theta = canonical_angle(pose);
    CHECK(theta == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(std::cos(theta) == doctest::Approx(-1.0));  // f(theta) = a cos + b sin = -1
    CHECK(std::abs(std::cos(theta) - sweep_min_value(1, 0)) < 1e-9);
  }
}

TEST_CASE("canonical angle attains the dense-sweep minimum on random inputs") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = coord(rng), b = coord(rng);
    const Pose pose = pose_with_rt({a, b, 3}, rng);
    const double theta = canonical_angle(pose);
    const double f = a * std::cos(theta) + b * std::sin(theta);
    CHECK(f <= sweep_min_value(a, b, 10000) + 1e-9);
  }
}

TEST_CASE("continuous canonicalization zeroes the second entry of R^T t") {
  std::mt19937_64 rng(3);
  SUBCASE("camera on the symmetry axis is degenerate and unchanged") {
    // exact zeros in R^T t require an exact-entry rotation
    Mat3 R;
    R << 0, -1, 0, 1, 0, 0, 0, 0, 1;  // quarter turn about z
    const Pose pose{R, R * Vec3(0, 0, 2)};
    const Pose canon = canonicalize_continuous(pose);
    CHECK((canon.R - pose.R).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("R^T t = (1, 0, 5) maps to the sweep minimum") {
    const Pose pose = pose_with_rt({1, 0, 5}, rng);
    const Pose canon = canonicalize_continuous(pose);
    const Vec3 rt = canon.R.transpose() * canon.t;
    CHECK(rt.x() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(rt.x() - sweep_min_value(1, 0)) < 1e-9);
    CHECK(std::abs(rt.y()) < 1e-9);
  }
  SUBCASE("idempotence") {
    for (int trial = 0; trial < 100; ++trial) {
      const Pose pose = test::random_pose(rng);
      const Pose once = canonicalize_continuous(pose);
      const Pose twice = canonicalize_continuous(once);
      CHECK((once.R - twice.R).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("second-axis canonicalization") {
  std::mt19937_64 rng(4);
  SUBCASE("R^T t parallel to y is degenerate") {
    Mat3 R;
    R << 0, 0, 1, 0, 1, 0, -1, 0, 0;  // exact quarter turn about y
    const Pose pose{R, R * Vec3(0, 2, 0)};
    const Pose canon = canonicalize_second_axis(pose);
    CHECK((canon.R - pose.R).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("random poses attain the sweep minimum") {
    for (int trial = 0; trial < 200; ++trial) {
      const Pose pose = test::random_pose(rng);
      const Vec3 rt = pose.R.transpose() * pose.t;
      const Pose canon = canonicalize_second_axis(pose);
      const Vec3 rt_canon = canon.R.transpose() * canon.t;
      // the minimized product is the third entry (reference normal +z)
      CHECK(rt_canon.z() <= sweep_min_value(rt.z(), rt.x(), 10000) + 1e-9);
    }
  }
  SUBCASE("idempotence") {
    for (int trial = 0; trial < 100; ++trial) {
      const Pose once = canonicalize_second_axis(test::random_pose(rng));
      const Pose twice = canonicalize_second_axis(once);
      CHECK((once.R - twice.R).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("axis alignment") {
  const Mesh cyl = cylinder_mesh(0.05, 0.2, 32);
  const KeypointSet kps = vertex_keypoints(cyl);
  SUBCASE("axis already +z keeps the identity") {
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(0, 0, 1)};
    const AxisAlignment aligned = axis_align(spec, cyl, kps);
    CHECK((aligned.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("axis +x maps onto +z") {
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(1, 0, 0)};
    const AxisAlignment aligned = axis_align(spec, cyl, kps);
    CHECK((aligned.rotation * Vec3(1, 0, 0) - Vec3(0, 0, 1)).norm() < 1e-12);
    CHECK(is_rotation(aligned.rotation, 1e-12));
    CHECK((aligned.spec.continuous_axes[0] - Vec3(0, 0, 1)).norm() < 1e-12);
  }
  SUBCASE("two orthogonal axes stay orthogonal and land on z and y") {
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(1, 0, 0), Vec3(0, 0, 1)};
    const AxisAlignment aligned = axis_align(spec, cyl, kps);
    CHECK((aligned.rotation * Vec3(1, 0, 0) - Vec3(0, 0, 1)).norm() < 1e-12);
    CHECK((aligned.rotation * Vec3(0, 0, 1) - Vec3(0, 1, 0)).norm() < 1e-12);
    CHECK(std::abs(aligned.spec.continuous_axes[0].dot(aligned.spec.continuous_axes[1])) < 1e-9);
  }
}

TEST_CASE("sym subset of a sphere approximates a visible hemisphere") {
  const Mesh sphere = icosphere_mesh(3, 0.1);
  const KeypointSet kps = farthest_point_sampling(sphere, 256, 0);
  const RotationSet rotations = icosphere_rotation_sample(1);
  // far camera makes the visible cap approach a hemisphere
  const double dist = 10.0 * object_diameter(sphere);
  const SymSubset subset = build_sym_subset(kps, rotations, {0, 0, dist});
  CHECK(subset.indices.size() >= 0.4 * kps.size());
  CHECK(subset.indices.size() <= 0.6 * kps.size());

  const SymSubset again = build_sym_subset(kps, rotations, {0, 0, dist});
  CHECK(subset.indices == again.indices);
}

TEST_CASE("the 2562-rotation subset scan finishes in time for N = 512") {
  const Mesh sphere = icosphere_mesh(3, 0.1);
  const KeypointSet kps = farthest_point_sampling(sphere, 512, 0);
  const RotationSet rotations = icosphere_rotation_sample(4);
  REQUIRE(rotations.size() == 2562);
  const auto start = std::chrono::steady_clock::now();
  const SymSubset subset = build_sym_subset(kps, rotations, {0, 0, 0.5});
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  CHECK(!subset.indices.empty());
  CHECK(elapsed.count() < 10.0);
}

TEST_CASE("discrete canonicalization") {
  const Mesh box = box_mesh(0.1, 0.06, 0.04);
  const KeypointSet kps = vertex_keypoints(box);

  SUBCASE("identity-only specs leave the pose unchanged") {
    SymmetrySpec spec;
    std::mt19937_64 rng(6);
    const Pose pose = test::random_pose(rng);
    SymSubset subset;
    subset.indices = {0, 1, 2};
    const Pose canon = canonicalize_discrete(pose, spec, subset, kps);
    CHECK((canon.R - pose.R).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("ties resolve to the lowest transform index") {
    SymmetrySpec spec;
    spec.discrete = {Mat3::Identity(), rot_z(M_PI)};
    // a subset symmetric under the flip produces equal counts
    SymSubset subset;
    for (int i = 0; i < kps.size(); ++i) subset.indices.push_back(i);
    const Pose pose{Mat3::Identity(), {0, 0, 0.5}};
    const Pose canon = canonicalize_discrete(pose, spec, subset, kps);
    CHECK((canon.R - pose.R).cwiseAbs().maxCoeff() == 0.0);  // identity chosen
  }

  SUBCASE("a pose showing the opposite face gets flipped") {
    SymmetrySpec spec;
    spec.discrete = {Mat3::Identity(), rot_z(M_PI)};
    // P_sym on the +x face: keypoints whose normals lean +x
    SymSubset subset;
    for (int i = 0; i < kps.size(); ++i) {
      if (kps.normals[i].x() > 0.1) subset.indices.push_back(i);
    }
    REQUIRE(!subset.indices.empty());
    // view the -x face: object rotated so +x points away from the camera
    const Pose pose{rot_y(-M_PI / 2), {0, 0, 0.5}};
    const int before = visible_count(kps, pose, subset.indices);
    const Pose canon = canonicalize_discrete(pose, spec, subset, kps);
    const int after = visible_count(kps, canon, subset.indices);
    CHECK(after > before);
    CHECK((canon.R - pose.R * rot_z(M_PI)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("full canonicalization pipeline") {
  std::mt19937_64 rng(7);

  SUBCASE("asymmetric specs return the pose unchanged") {
    const Mesh box = box_mesh(0.1, 0.06, 0.04);
    const KeypointSet kps = vertex_keypoints(box);
    SymmetrySpec spec;  // identity only, no axes
    const Pose pose = test::random_pose(rng);
    const Pose canon = canonicalize(pose, spec, SymSubset{}, kps);
    CHECK((canon.R - pose.R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((canon.t - pose.t).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("variation I: cylinder with a flip is invariant over the whole group") {
    const Mesh cyl = cylinder_mesh(0.04, 0.15, 48);
    const KeypointSet kps = vertex_keypoints(cyl);
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(0, 0, 1)};
    spec.discrete = {Mat3::Identity(), rot_x(M_PI)};  // end-over-end flip
    const SymSubset subset =
        build_sym_subset(kps, icosphere_rotation_sample(1), {0, 0, 0.5});

    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    for (int trial = 0; trial < 40; ++trial) {
      const Pose pose = test::random_pose(rng);
      const Pose reference = canonicalize(pose, spec, subset, kps);
      // pre-multiply the pose by a random group element
      Mat3 g = rot_z(angle(rng));
      if (trial % 2 == 1) g = g * rot_x(M_PI);
      const Pose equivalent{pose.R * g, pose.t};
      const Pose canon = canonicalize(equivalent, spec, subset, kps);
      CHECK((canon.R - reference.R).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  SUBCASE("variation II: both axis products reach their sweep minima") {
    const Mesh sphere = icosphere_mesh(2, 0.05);
    const KeypointSet kps = vertex_keypoints(sphere);
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(0, 0, 1), Vec3(0, 1, 0)};
    for (int trial = 0; trial < 50; ++trial) {
      const Pose pose = test::random_pose(rng);
      const Pose canon = canonicalize(pose, spec, SymSubset{}, kps);
      const Vec3 rt = canon.R.transpose() * canon.t;
      // z-axis product minimized over theta: (a, b) = (rt.x, rt.y)
      CHECK(rt.x() <= sweep_min_value(rt.x(), rt.y(), 10000) + 1e-9);
      // y-axis product minimized over phi: (a, b) = (rt.z, rt.x)
      CHECK(rt.z() <= sweep_min_value(rt.z(), rt.x(), 10000) + 1e-9);
    }
  }

  SUBCASE("idempotence of the full pipeline") {
    const Mesh cyl = cylinder_mesh(0.04, 0.15, 48);
    const KeypointSet kps = vertex_keypoints(cyl);
    SymmetrySpec spec;
    spec.continuous_axes = {Vec3(0, 0, 1)};
    spec.discrete = {Mat3::Identity(), rot_x(M_PI)};
    const SymSubset subset =
        build_sym_subset(kps, icosphere_rotation_sample(1), {0, 0, 0.5});
    for (int trial = 0; trial < 50; ++trial) {
      const Pose once = canonicalize(test::random_pose(rng), spec, subset, kps);
      const Pose twice = canonicalize(once, spec, subset, kps);
      CHECK((once.R - twice.R).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("canonicalization is consistent across the continuous orbit") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  for (int trial = 0; trial < 300; ++trial) {
    const Pose pose = test::random_pose(rng);
    const Vec3 rt = pose.R.transpose() * pose.t;
    if (rt.head<2>().norm() < 1e-6) continue;  // degenerate orbit
    const Pose canon_a = canonicalize_continuous(pose);
    const Pose canon_b = canonicalize_continuous(Pose{pose.R * rot_z(angle(rng)), pose.t});
    CHECK((canon_a.R - canon_b.R).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("the invariant term p.n is untouched by canonicalization") {
  const Mesh cyl = cylinder_mesh(0.04, 0.15, 32);
  const KeypointSet kps = vertex_keypoints(cyl);
  std::vector<double> before(kps.size());
  for (int i = 0; i < kps.size(); ++i) before[i] = kps.points[i].dot(kps.normals[i]);
  // canonicalization only changes R; keypoints and normals are shared inputs
  std::mt19937_64 rng(9);
  const Pose pose = test::random_pose(rng);
  (void)canonicalize_continuous(pose);
  for (int i = 0; i < kps.size(); ++i) {
    CHECK(kps.points[i].dot(kps.normals[i]) == before[i]);  // bit-exact
  }
}

TEST_CASE("canonical poses render the same silhouette") {
  const Camera cam = test::test_camera(256);
  const Mesh cyl = cylinder_mesh(0.05, 0.16, 96);
  const KeypointSet kps = vertex_keypoints(cyl);
  SymmetrySpec spec;
  spec.continuous_axes = {Vec3(0, 0, 1)};
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const Pose pose = test::random_pose(rng, 0.5, 0.8);
    const Pose canon = canonicalize(pose, spec, SymSubset{}, kps);
    Scene a, b;
    a.entries.push_back({std::make_shared<const Mesh>(cyl), pose});
    b.entries.push_back({std::make_shared<const Mesh>(cyl), canon});
    a.target_index = b.target_index = 0;
    const MaskImage ma = render_visible_mask(a, cam);
    const MaskImage mb = render_visible_mask(b, cam);
    size_t inter = 0, uni = 0;
    for (size_t i = 0; i < ma.bits.size(); ++i) {
      inter += (ma.bits[i] & mb.bits[i]);
      uni += (ma.bits[i] | mb.bits[i]);
    }
    REQUIRE(uni > 0);
    // identical up to the rasterization of a 96-gon rotated off its own grid
    CHECK(static_cast<double>(inter) / uni > 0.97);
  }
}

TEST_SUITE_END();
