#pragma once

#include "vispose/types.hpp"

namespace vispose {

// Pinhole intrinsics. Continuous pixel coordinates put integer positions at
// pixel centers: pixel (col, row) covers [col - 0.5, col + 0.5) x [...].
struct Camera {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
};

inline void validate_camera(const Camera& cam) {
  if (cam.fx <= 0 || cam.fy <= 0 || cam.width < 1 || cam.height < 1) {
    throw DataError("invalid camera intrinsics");
  }
}

inline constexpr double kMinDepth = 1e-6;

/// Perspective projection of an object-frame point: u = fx*x/z + cx,
/// v = fy*y/z + cy with (x, y, z) = R*p + t. Throws for z <= 1e-6.
inline Vec2 project(const Camera& cam, const Pose& pose, const Vec3& point) {
  const Vec3 pc = pose.apply(point);
  if (pc.z() <= kMinDepth) {
    throw NumericError("behind camera");
  }
  return {cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy};
}

/// Non-throwing variant: false when the point is behind the camera.
inline bool try_project(const Camera& cam, const Pose& pose, const Vec3& point,
                        Vec2& pixel) {
  const Vec3 pc = pose.apply(point);
  if (pc.z() <= kMinDepth) return false;
  pixel = {cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy};
  return true;
}

/// Camera-frame point at the given pixel and depth (z in meters).
inline Vec3 unproject(const Camera& cam, const Vec2& pixel, double depth) {
  return {(pixel.x() - cam.cx) / cam.fx * depth, (pixel.y() - cam.cy) / cam.fy * depth,
          depth};
}

}  // namespace vispose
