#include "vispose/localizer.hpp"

#include <cmath>
#include <random>

namespace vispose {

void validate_noise_model(const NoiseModel& model) {
  if (model.sigma_visible < 0 || model.sigma_invisible < 0 || model.outlier_radius < 0 ||
      model.outlier_rate_invisible < 0 || model.outlier_rate_invisible > 1) {
    throw DataError("invalid noise model");
  }
}

std::vector<Vec2> simulate_localization(const KeypointSet& keypoints, const Pose& pose,
                                        const Camera& camera,
                                        const std::vector<std::uint8_t>& oracle_visibility,
                                        const NoiseModel& noise, std::uint64_t seed) {
  validate_camera(camera);
  validate_noise_model(noise);
  if (oracle_visibility.size() != keypoints.points.size()) {
    throw std::invalid_argument("simulate_localization: flag length mismatch");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vec2> pixels(keypoints.points.size());
  for (size_t i = 0; i < keypoints.points.size(); ++i) {
    Vec2 truth;
    if (!try_project(camera, pose, keypoints.points[i], truth)) {
      // behind the camera: emit a border point in the direction the point
      // lies, so downstream treats it as a gross outlier
      const Vec3 pc = pose.apply(keypoints.points[i]);
      Vec2 dir(pc.x(), pc.y());
      if (dir.norm() < 1e-12) dir = Vec2(1.0, 0.0);
      dir.normalize();
      const double span = static_cast<double>(std::max(camera.width, camera.height));
      Vec2 px = Vec2(camera.cx, camera.cy) + span * dir;
      px.x() = std::clamp(px.x(), 0.0, static_cast<double>(camera.width - 1));
      px.y() = std::clamp(px.y(), 0.0, static_cast<double>(camera.height - 1));
      pixels[i] = px;
      continue;
    }
    const bool visible = oracle_visibility[i] != 0;
    const double sigma = visible ? noise.sigma_visible : noise.sigma_invisible;
    Vec2 px = truth + sigma * Vec2(gauss(rng), gauss(rng));
    if (!visible && unit(rng) < noise.outlier_rate_invisible) {
      // uniform draw in the disk around the true projection
      const double radius = noise.outlier_radius * std::sqrt(unit(rng));
      const double angle = 2.0 * M_PI * unit(rng);
      px = truth + radius * Vec2(std::cos(angle), std::sin(angle));
    }
    pixels[i] = px;
  }
  return pixels;
}

}  // namespace vispose
