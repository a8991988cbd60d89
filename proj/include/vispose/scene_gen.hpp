#pragma once

#include "vispose/render.hpp"
#include "vispose/rotations.hpp"

namespace vispose {

struct SceneGenConfig {
  // target distance range, in multiples of the object diameter
  double distance_min = 2.2;
  double distance_max = 3.0;
  // desired fraction of the target silhouette hidden by occluders
  double coverage_min = 0.0;
  double coverage_max = 0.0;
  // lateral jitter of the target, in multiples of the diameter
  double lateral_jitter = 0.15;
  int view_subdivision_level = 2;  // icosphere level used for view sampling
  int max_attempts = 1000;
};

/// Deterministic synthetic scene: target pose drawn from icosphere viewing
/// directions x distance range, occluders placed between camera and target
/// until the rendered coverage lands within [coverage_min, coverage_max].
/// Zero occluder meshes with coverage_min == 0 yields an unoccluded scene.
/// Throws NumericError after max_attempts failed placements.
Scene generate_scene(const std::shared_ptr<const Mesh>& target,
                     const std::vector<std::shared_ptr<const Mesh>>& occluders,
                     const SceneGenConfig& config, const Camera& camera,
                     std::uint64_t seed);

/// Measured occlusion: 1 - |visible mask| / |target-only mask|.
double measure_coverage(const Scene& scene, const Camera& camera);

}  // namespace vispose
