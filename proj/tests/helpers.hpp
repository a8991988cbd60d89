#pragma once

#include <random>

#include "vispose/camera.hpp"
#include "vispose/mesh.hpp"
#include "vispose/rotations.hpp"
#include "vispose/shapes.hpp"

namespace vispose::test {

inline Camera test_camera(int size = 256, double focal = 280.0) {
  Camera cam;
  cam.fx = cam.fy = focal;
  cam.cx = cam.cy = size / 2;
  cam.width = cam.height = size;
  return cam;
}

/// Random pose with the object safely in front of the camera.
inline Pose random_pose(std::mt19937_64& rng, double depth_min = 0.4,
                        double depth_max = 1.2, double lateral = 0.05) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Pose pose;
  pose.R = uniform_random_rotation(rng);
  pose.t = Vec3((unit(rng) * 2 - 1) * lateral, (unit(rng) * 2 - 1) * lateral,
                depth_min + unit(rng) * (depth_max - depth_min));
  return pose;
}

/// Dense-sweep oracle: minimizer of a*cos(theta) + b*sin(theta) over a grid.
inline double sweep_min_angle(double a, double b, int steps = 100000) {
  double best_theta = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double theta = 2.0 * M_PI * i / steps;
    const double value = a * std::cos(theta) + b * std::sin(theta);
    if (value < best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  return best_theta;
}

inline double sweep_min_value(double a, double b, int steps = 100000) {
  const double theta = sweep_min_angle(a, b, steps);
  return a * std::cos(theta) + b * std::sin(theta);
}

inline KeypointSet vertex_keypoints(const Mesh& mesh) {
  KeypointSet kps;
  kps.points = mesh.vertices;
  kps.normals = mesh.vertex_normals;
  kps.source_indices.resize(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    kps.source_indices[i] = static_cast<int>(i);
  }
  return kps;
}

}  // namespace vispose::test
