#include "vispose/scene_gen.hpp"

#include <random>

namespace vispose {

double measure_coverage(const Scene& scene, const Camera& camera) {
  Scene target_only;
  target_only.entries = {scene.entries[scene.target_index]};
  target_only.target_index = 0;
  const double full = static_cast<double>(render_visible_mask(target_only, camera).count());
  if (full <= 0.0) {
    return 1.0;
  }
  const double visible = static_cast<double>(render_visible_mask(scene, camera).count());
  return 1.0 - visible / full;
}

Scene generate_scene(const std::shared_ptr<const Mesh>& target,
                     const std::vector<std::shared_ptr<const Mesh>>& occluders,
                     const SceneGenConfig& config, const Camera& camera,
                     std::uint64_t seed) {
  if (!target) {
    throw std::invalid_argument("generate_scene: no target mesh");
  }
  if (config.coverage_min > 0.0 && occluders.empty()) {
    throw std::invalid_argument("generate_scene: coverage requested but no occluders");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double diameter = object_diameter(*target);
  const RotationSet views = icosphere_rotation_sample(config.view_subdivision_level);
  std::uniform_int_distribution<int> pick_view(0, views.size() - 1);

  // target pose
  const double dist =
      diameter * (config.distance_min + unit(rng) * (config.distance_max - config.distance_min));
  const double jitter = config.lateral_jitter * diameter;
  Pose target_pose;
  target_pose.R = views.rotations[pick_view(rng)];
  target_pose.t = Vec3((unit(rng) * 2.0 - 1.0) * jitter, (unit(rng) * 2.0 - 1.0) * jitter, dist);

  Scene scene;
  scene.entries.push_back({target, target_pose});
  scene.target_index = 0;
  if (occluders.empty()) {
    return scene;
  }

  // aim occluders at the target's projected position
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    Scene candidate = scene;
    for (const auto& occ : occluders) {
      const double occ_depth = dist * (0.45 + 0.25 * unit(rng));
      // lateral offset around the line of sight to the target, scaled down
      // with depth so the occluder stays in front of the silhouette
      const double spread = 0.35 * diameter * (occ_depth / dist);
      Pose occ_pose;
      occ_pose.R = views.rotations[pick_view(rng)];
      occ_pose.t = target_pose.t * (occ_depth / dist) +
                   Vec3((unit(rng) * 2.0 - 1.0) * spread, (unit(rng) * 2.0 - 1.0) * spread, 0.0);
      candidate.entries.push_back({occ, occ_pose});
    }
    const double coverage = measure_coverage(candidate, camera);
    if (coverage >= config.coverage_min && coverage <= config.coverage_max) {
      return candidate;
    }
  }
  throw NumericError("generate_scene: coverage unsatisfiable after " +
                     std::to_string(config.max_attempts) + " attempts");
}

}  // namespace vispose
