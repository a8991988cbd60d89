#pragma once

#include <memory>

#include "vispose/image.hpp"
#include "vispose/mesh.hpp"

namespace vispose {

struct SceneEntry {
  std::shared_ptr<const Mesh> mesh;
  Pose pose;
};

struct Scene {
  std::vector<SceneEntry> entries;
  int target_index = 0;
};

void validate_scene(const Scene& scene);

/// Z-buffered perspective rasterization, pixel-center sampling, no
/// antialiasing. Pixel value = camera-frame z of the nearest surface; 0
/// where nothing covers the pixel. Both-facing triangles are rasterized.
/// Throws if any vertex has camera-frame z <= 0.
DepthImage rasterize_depth(const Mesh& mesh, const Pose& pose, const Camera& camera);

/// Depth over all entries plus the entry index owning each pixel (-1 =
/// empty). Depth ties within 1e-9 resolve to the lower entry index.
struct SceneRaster {
  DepthImage depth;
  std::vector<int> owner;
};
SceneRaster rasterize_scene(const Scene& scene, const Camera& camera);

/// Pixels where the target entry is the strictly nearest surface.
MaskImage render_visible_mask(const Scene& scene, const Camera& camera);

}  // namespace vispose
