#pragma once

#include <filesystem>
#include <json.hpp>

#include "vispose/importance.hpp"
#include "vispose/selection.hpp"
#include "vispose/symmetry.hpp"
#include "vispose/visibility.hpp"

namespace vispose {

using Json = nlohmann::json;

Json labels_to_json(const VisibilityLabels& labels);
VisibilityLabels labels_from_json(const Json& j);

Json keypoints_to_json(const KeypointSet& kps);
KeypointSet keypoints_from_json(const Json& j);

Json symmetry_to_json(const SymmetrySpec& spec);
/// Accepts both the native schema ({"discrete": [[9 floats]...],
/// "continuous_axes": [[3 floats]...]}) and BOP models_info-style fields
/// (symmetries_discrete as 4x4 row-major, symmetries_continuous with an
/// axis). The identity transform is added when missing.
SymmetrySpec symmetry_from_json(const Json& j);

Json selection_to_json(const Selection& sel);
Selection selection_from_json(const Json& j);

Json importance_to_json(const Eigen::VectorXd& r);
Eigen::VectorXd importance_from_json(const Json& j);

Json pose_to_json(const Pose& pose);
Pose pose_from_json(const Json& j, double t_scale = 1.0);

Json load_json_file(const std::filesystem::path& path);
void save_json_file(const Json& j, const std::filesystem::path& path);

}  // namespace vispose
