#include <doctest.h>

#include <queue>

#include "helpers.hpp"
#include "vispose/scene_gen.hpp"

using namespace vispose;
using vispose::test::test_camera;

namespace {

std::shared_ptr<const Mesh> shared(Mesh mesh) {
  return std::make_shared<const Mesh>(std::move(mesh));
}

// 8-connected component count of the set pixels
int connected_components(const MaskImage& mask) {
  std::vector<char> seen(mask.bits.size(), 0);
  int components = 0;
  for (int row = 0; row < mask.height; ++row) {
    for (int col = 0; col < mask.width; ++col) {
      const size_t idx = static_cast<size_t>(row) * mask.width + col;
      if (!mask.bits[idx] || seen[idx]) continue;
      ++components;
      std::queue<std::pair<int, int>> frontier;
      frontier.emplace(col, row);
      seen[idx] = 1;
      while (!frontier.empty()) {
        const auto [c, r] = frontier.front();
        frontier.pop();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nc = c + dc, nr = r + dr;
            if (nc < 0 || nc >= mask.width || nr < 0 || nr >= mask.height) continue;
            const size_t nidx = static_cast<size_t>(nr) * mask.width + nc;
            if (mask.bits[nidx] && !seen[nidx]) {
              seen[nidx] = 1;
              frontier.emplace(nc, nr);
            }
          }
        }
      }
    }
  }
  return components;
}

}  // namespace

TEST_SUITE_BEGIN("render");

TEST_CASE("triangle over the principal point rasterizes its exact depth") {
  Camera cam = test_camera(128, 100.0);
  Mesh tri;
  tri.vertices = {{-1, -1, 0}, {1, -1, 0}, {0, 1.5, 0}};
  tri.faces = {{0, 1, 2}};
  const DepthImage depth = rasterize_depth(tri, Pose{Mat3::Identity(), {0, 0, 1}}, cam);
  CHECK(std::abs(depth.at(64, 64) - 1.0) < 1e-6);
  CHECK(depth.at(0, 127) == 0.0f);  // pixels outside the triangle stay zero
  CHECK(depth.at(127, 127) == 0.0f);
}

TEST_CASE("icosphere center depth matches the analytic sphere depth") {
  const Camera cam = test_camera(256);
  const Mesh sphere = icosphere_mesh(3, 0.1);
  const DepthImage depth = rasterize_depth(sphere, Pose{Mat3::Identity(), {0, 0, 0.5}}, cam);
  CHECK(std::abs(depth.at(128, 128) - 0.4) < 1e-3);
}

TEST_CASE("mesh behind the camera is an error") {
  const Camera cam = test_camera(64);
  const Mesh cube = box_mesh(1, 1, 1);
  CHECK_THROWS_AS(rasterize_depth(cube, Pose{Mat3::Identity(), {0, 0, 0.2}}, cam),
                  NumericError);
}

TEST_CASE("target-only scene mask equals the full silhouette") {
  const Camera cam = test_camera(256);
  Scene scene;
  scene.entries.push_back({shared(icosphere_mesh(2, 0.1)), Pose{Mat3::Identity(), {0, 0, 0.6}}});
  scene.target_index = 0;
  const MaskImage mask = render_visible_mask(scene, cam);
  const DepthImage depth = rasterize_depth(*scene.entries[0].mesh, scene.entries[0].pose, cam);
  for (size_t i = 0; i < mask.bits.size(); ++i) {
    CHECK(mask.bits[i] == (depth.depths[i] > 0 ? 1 : 0));
  }
  CHECK(mask.count() > 0);
}

TEST_CASE("a nearer occluder covering everything empties the mask") {
  const Camera cam = test_camera(128);
  Scene scene;
  scene.entries.push_back({shared(icosphere_mesh(2, 0.1)), Pose{Mat3::Identity(), {0, 0, 0.6}}});
  scene.entries.push_back({shared(quad_mesh(2.0, 2.0)), Pose{Mat3::Identity(), {0, 0, 0.3}}});
  scene.target_index = 0;
  CHECK(render_visible_mask(scene, cam).count() == 0);
}

TEST_CASE("half-covering occluder halves the sphere mask") {
  const Camera cam = test_camera(256);
  Scene scene;
  scene.entries.push_back({shared(icosphere_mesh(3, 0.1)), Pose{Mat3::Identity(), {0, 0, 0.6}}});
  scene.target_index = 0;
  const double full = static_cast<double>(render_visible_mask(scene, cam).count());
  // plane covering the left half of the image, in front of the sphere
  Pose half_pose{Mat3::Identity(), {-0.15, 0, 0.3}};
  scene.entries.push_back({shared(quad_mesh(0.3, 2.0)), half_pose});
  const double covered = static_cast<double>(render_visible_mask(scene, cam).count());
  CHECK(covered / full == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("adding an occluder never turns mask pixels on") {
  const Camera cam = test_camera(128);
  Scene scene;
  scene.entries.push_back({shared(torus_mesh(0.08, 0.03, 24, 12)),
                           Pose{icosphere_rotation_sample(0).rotations[3], {0, 0, 0.5}}});
  scene.target_index = 0;
  const MaskImage before = render_visible_mask(scene, cam);
  scene.entries.push_back({shared(box_mesh(0.08, 0.08, 0.02)), Pose{Mat3::Identity(), {0.01, 0, 0.3}}});
  const MaskImage after = render_visible_mask(scene, cam);
  for (size_t i = 0; i < before.bits.size(); ++i) {
    CHECK(after.bits[i] <= before.bits[i]);  // mask subset of silhouette too
  }
}

TEST_CASE("convex silhouettes are a single 8-connected component") {
  const Camera cam = test_camera(128);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Scene scene;
    scene.entries.push_back(
        {shared(icosphere_mesh(2, 0.08)), test::random_pose(rng, 0.5, 0.9)});
    scene.target_index = 0;
    const MaskImage mask = render_visible_mask(scene, cam);
    REQUIRE(mask.count() > 0);
    CHECK(connected_components(mask) == 1);
  }
}

TEST_CASE("generate_scene without occluders shows the full silhouette") {
  const Camera cam = test_camera(256);
  SceneGenConfig config;
  const Scene scene = generate_scene(shared(icosphere_mesh(2, 0.1)), {}, config, cam, 42);
  CHECK(measure_coverage(scene, cam) == 0.0);
}

TEST_CASE("generate_scene is deterministic per seed") {
  const Camera cam = test_camera(256);
  SceneGenConfig config;
  config.coverage_min = 0.3;
  config.coverage_max = 0.7;
  const auto target = shared(icosphere_mesh(2, 0.1));
  const std::vector<std::shared_ptr<const Mesh>> occluders = {shared(box_mesh(0.12, 0.12, 0.03))};
  const Scene a = generate_scene(target, occluders, config, cam, 7);
  const Scene b = generate_scene(target, occluders, config, cam, 7);
  REQUIRE(a.entries.size() == b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK((a.entries[i].pose.R - b.entries[i].pose.R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.entries[i].pose.t - b.entries[i].pose.t).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("generate_scene coverage lands in the requested band") {
  const Camera cam = test_camera(256);
  SceneGenConfig config;
  config.coverage_min = 0.4;
  config.coverage_max = 0.6;
  const auto target = shared(icosphere_mesh(2, 0.1));
  const std::vector<std::shared_ptr<const Mesh>> occluders = {shared(box_mesh(0.12, 0.12, 0.03))};
  int in_band = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    try {
      const Scene scene = generate_scene(target, occluders, config, cam, seed);
      const double coverage = measure_coverage(scene, cam);
      if (coverage >= 0.3 && coverage <= 0.7) ++in_band;
    } catch (const NumericError&) {
      // counted as out of band
    }
  }
  CHECK(in_band >= 95);
}

TEST_SUITE_END();
