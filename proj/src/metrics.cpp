#include "vispose/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace vispose {

double add_metric(const std::vector<Vec3>& model_points, const Pose& gt, const Pose& est) {
  if (model_points.empty()) {
    throw std::invalid_argument("add_metric: empty model");
  }
  double sum = 0.0;
  for (const auto& x : model_points) {
    sum += (gt.apply(x) - est.apply(x)).norm();
  }
  return sum / static_cast<double>(model_points.size());
}

double adds_metric(const std::vector<Vec3>& model_points, const Pose& gt, const Pose& est) {
  if (model_points.empty()) {
    throw std::invalid_argument("adds_metric: empty model");
  }
  std::vector<Vec3> est_points(model_points.size());
  for (size_t i = 0; i < model_points.size(); ++i) {
    est_points[i] = est.apply(model_points[i]);
  }
  double sum = 0.0;
  for (const auto& x : model_points) {
    const Vec3 g = gt.apply(x);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : est_points) {
      best = std::min(best, (g - e).squaredNorm());
    }
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(model_points.size());
}

bool threshold_recall(double distance, double diameter, double fraction) {
  if (diameter <= 0.0) {
    throw std::invalid_argument("threshold_recall: diameter must be positive");
  }
  return distance < fraction * diameter;
}

double auc(const std::vector<double>& distances, double max_threshold,
           bool eleven_point_interpolation) {
  if (distances.empty()) {
    throw std::invalid_argument("auc: empty distances");
  }
  if (max_threshold <= 0.0) {
    throw std::invalid_argument("auc: max threshold must be positive");
  }
  const double n = static_cast<double>(distances.size());
  if (eleven_point_interpolation) {
    double acc_sum = 0.0;
    for (int j = 0; j <= 10; ++j) {
      const double tau = max_threshold * j / 10.0;
      double hits = 0.0;
      for (double d : distances) {
        if (d <= tau) hits += 1.0;
      }
      acc_sum += hits / n;
    }
    return acc_sum / 11.0;
  }
  // exact area of the sorted-distance step function
  double area = 0.0;
  for (double d : distances) {
    if (d < max_threshold) {
      area += (max_threshold - d) / max_threshold;
    }
  }
  return area / n;
}

}  // namespace vispose
