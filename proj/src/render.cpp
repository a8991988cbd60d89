#include "vispose/render.hpp"

#include <cmath>

namespace vispose {

namespace {

constexpr double kDepthTie = 1e-9;
constexpr double kRasterMinZ = 1e-9;

struct ScreenVertex {
  double u, v, z;
};

// Rasterizes one triangle into depth/owner, keeping the nearest surface.
// owner == nullptr means single-mesh depth-only rendering.
void raster_triangle(const ScreenVertex& a, const ScreenVertex& b, const ScreenVertex& c,
                     int entry_index, const Camera& cam, DepthImage& depth,
                     std::vector<int>* owner) {
  const double area2 = (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
  if (area2 == 0.0) return;
  const double inv_area = 1.0 / area2;

  const int col0 = std::max(0, static_cast<int>(std::ceil(std::min({a.u, b.u, c.u}))));
  const int col1 = std::min(cam.width - 1, static_cast<int>(std::floor(std::max({a.u, b.u, c.u}))));
  const int row0 = std::max(0, static_cast<int>(std::ceil(std::min({a.v, b.v, c.v}))));
  const int row1 = std::min(cam.height - 1, static_cast<int>(std::floor(std::max({a.v, b.v, c.v}))));

  for (int row = row0; row <= row1; ++row) {
    for (int col = col0; col <= col1; ++col) {
      const double px = col, py = row;  // pixel centers at integer coordinates
      double w0 = ((b.u - px) * (c.v - py) - (b.v - py) * (c.u - px)) * inv_area;
      double w1 = ((c.u - px) * (a.v - py) - (c.v - py) * (a.u - px)) * inv_area;
      double w2 = 1.0 - w0 - w1;
      if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
      // 1/z interpolates linearly in screen space
      const double inv_z = w0 / a.z + w1 / b.z + w2 / c.z;
      const double z = 1.0 / inv_z;
      const size_t idx = static_cast<size_t>(row) * cam.width + col;
      const float prev = depth.depths[idx];
      if (prev == 0.0f) {
        depth.depths[idx] = static_cast<float>(z);
        if (owner) (*owner)[idx] = entry_index;
      } else if (z < static_cast<double>(prev) - kDepthTie) {
        depth.depths[idx] = static_cast<float>(z);
        if (owner) (*owner)[idx] = entry_index;
      }
      // ties and farther surfaces keep the earlier (lower-index) owner
    }
  }
}

void raster_mesh(const Mesh& mesh, const Pose& pose, const Camera& cam, int entry_index,
                 DepthImage& depth, std::vector<int>* owner) {
  std::vector<ScreenVertex> sv(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3 pc = pose.apply(mesh.vertices[i]);
    if (pc.z() <= kRasterMinZ) {
      throw NumericError("mesh behind camera");
    }
    sv[i] = {cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy, pc.z()};
  }
  for (const auto& f : mesh.faces) {
    raster_triangle(sv[f[0]], sv[f[1]], sv[f[2]], entry_index, cam, depth, owner);
  }
}

}  // namespace

void validate_scene(const Scene& scene) {
  if (scene.entries.empty()) throw DataError("empty scene");
  if (scene.target_index < 0 ||
      scene.target_index >= static_cast<int>(scene.entries.size())) {
    throw DataError("scene target index out of range");
  }
  for (const auto& e : scene.entries) {
    if (!e.mesh) throw DataError("scene entry has no mesh");
  }
}

DepthImage rasterize_depth(const Mesh& mesh, const Pose& pose, const Camera& camera) {
  validate_camera(camera);
  DepthImage depth = make_depth(camera.width, camera.height);
  raster_mesh(mesh, pose, camera, 0, depth, nullptr);
  return depth;
}

SceneRaster rasterize_scene(const Scene& scene, const Camera& camera) {
  validate_scene(scene);
  validate_camera(camera);
  SceneRaster out;
  out.depth = make_depth(camera.width, camera.height);
  out.owner.assign(out.depth.depths.size(), -1);
  for (size_t i = 0; i < scene.entries.size(); ++i) {
    raster_mesh(*scene.entries[i].mesh, scene.entries[i].pose, camera,
                static_cast<int>(i), out.depth, &out.owner);
  }
  return out;
}

MaskImage render_visible_mask(const Scene& scene, const Camera& camera) {
  const SceneRaster raster = rasterize_scene(scene, camera);
  MaskImage mask = make_mask(camera.width, camera.height);
  for (size_t i = 0; i < raster.owner.size(); ++i) {
    mask.bits[i] = raster.owner[i] == scene.target_index ? 1 : 0;
  }
  return mask;
}

}  // namespace vispose
