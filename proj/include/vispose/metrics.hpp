#pragma once

#include "vispose/types.hpp"

namespace vispose {

/// ADD: mean distance between correspondingly transformed model points,
/// mean_i |(R_gt x_i + t_gt) - (R_est x_i + t_est)|.
double add_metric(const std::vector<Vec3>& model_points, const Pose& gt, const Pose& est);

/// ADD-S: mean over gt-transformed points of the distance to the nearest
/// est-transformed point. Never exceeds ADD.
double adds_metric(const std::vector<Vec3>& model_points, const Pose& gt, const Pose& est);

/// 1 iff distance < fraction * diameter (strict).
bool threshold_recall(double distance, double diameter, double fraction);

/// Area under the accuracy-vs-threshold curve on [0, max_threshold],
/// normalized to [0, 1]. Without interpolation the step function is
/// integrated in closed form; with it, the mean of accuracies at the 11
/// thresholds {0, 0.1, ..., 1.0} * max_threshold. Failures may be encoded
/// as +infinity distances.
double auc(const std::vector<double>& distances, double max_threshold,
           bool eleven_point_interpolation);

}  // namespace vispose
