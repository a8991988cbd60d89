#include "vispose/serialize.hpp"

#include <fstream>

namespace vispose {

namespace {

std::vector<int> flags_to_ints(const std::vector<std::uint8_t>& flags) {
  return std::vector<int>(flags.begin(), flags.end());
}

std::vector<std::uint8_t> ints_to_flags(const Json& j) {
  std::vector<std::uint8_t> flags;
  for (const auto& v : j) {
    const int b = v.get<int>();
    if (b != 0 && b != 1) throw DataError("visibility flag must be 0 or 1");
    flags.push_back(static_cast<std::uint8_t>(b));
  }
  return flags;
}

Json mat3_to_json(const Mat3& m) {
  Json a = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  }
  return a;
}

Mat3 mat3_from_json(const Json& a) {
  if (!a.is_array() || a.size() != 9) throw DataError("rotation must be 9 floats row-major");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = a[3 * r + c].get<double>();
  }
  return m;
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& a) {
  if (!a.is_array() || a.size() != 3) throw DataError("expected 3 floats");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

}  // namespace

Json labels_to_json(const VisibilityLabels& labels) {
  return Json{{"v_ex", flags_to_ints(labels.v_ex)},
              {"v_in", flags_to_ints(labels.v_in)},
              {"v", flags_to_ints(labels.v)}};
}

VisibilityLabels labels_from_json(const Json& j) {
  VisibilityLabels labels;
  labels.v_ex = ints_to_flags(j.at("v_ex"));
  labels.v_in = ints_to_flags(j.at("v_in"));
  labels.v = ints_to_flags(j.at("v"));
  if (labels.v.size() != labels.v_ex.size() || labels.v.size() != labels.v_in.size()) {
    throw DataError("label arrays must have equal length");
  }
  return labels;
}

Json keypoints_to_json(const KeypointSet& kps) {
  Json points = Json::array(), normals = Json::array();
  for (const auto& p : kps.points) points.push_back(vec3_to_json(p));
  for (const auto& n : kps.normals) normals.push_back(vec3_to_json(n));
  return Json{{"version", 1},
              {"points", points},
              {"normals", normals},
              {"source_indices", kps.source_indices}};
}

KeypointSet keypoints_from_json(const Json& j) {
  KeypointSet kps;
  for (const auto& p : j.at("points")) kps.points.push_back(vec3_from_json(p));
  for (const auto& n : j.at("normals")) kps.normals.push_back(vec3_from_json(n));
  kps.source_indices = j.at("source_indices").get<std::vector<int>>();
  validate_keypoints(kps);
  return kps;
}

Json symmetry_to_json(const SymmetrySpec& spec) {
  Json discrete = Json::array();
  for (const auto& S : spec.discrete) discrete.push_back(mat3_to_json(S));
  Json axes = Json::array();
  for (const auto& a : spec.continuous_axes) axes.push_back(vec3_to_json(a));
  return Json{{"discrete", discrete}, {"continuous_axes", axes}};
}

SymmetrySpec symmetry_from_json(const Json& j) {
  SymmetrySpec spec;
  spec.discrete.clear();
  if (j.contains("discrete") || j.contains("continuous_axes")) {
    if (j.contains("discrete")) {
      for (const auto& S : j.at("discrete")) spec.discrete.push_back(mat3_from_json(S));
    }
    if (j.contains("continuous_axes")) {
      for (const auto& a : j.at("continuous_axes")) {
        spec.continuous_axes.push_back(vec3_from_json(a).normalized());
      }
    }
  } else {
    // BOP models_info style
    if (j.contains("symmetries_discrete")) {
      for (const auto& S : j.at("symmetries_discrete")) {
        if (!S.is_array() || S.size() != 16) {
          throw DataError("symmetries_discrete entries must be 4x4 row-major");
        }
        Mat3 R;
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) R(r, c) = S[4 * r + c].get<double>();
        }
        spec.discrete.push_back(R);
      }
    }
    if (j.contains("symmetries_continuous")) {
      for (const auto& entry : j.at("symmetries_continuous")) {
        spec.continuous_axes.push_back(vec3_from_json(entry.at("axis")).normalized());
      }
    }
  }
  bool has_identity = false;
  for (const auto& S : spec.discrete) {
    if ((S - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9) has_identity = true;
  }
  if (!has_identity) {
    spec.discrete.insert(spec.discrete.begin(), Mat3::Identity());
  }
  validate_symmetry_spec(spec);
  return spec;
}

Json selection_to_json(const Selection& sel) {
  return Json{{"indices", sel.indices}, {"used_fallback", sel.used_fallback}};
}

Selection selection_from_json(const Json& j) {
  Selection sel;
  sel.indices = j.at("indices").get<std::vector<int>>();
  sel.used_fallback = j.value("used_fallback", false);
  return sel;
}

Json importance_to_json(const Eigen::VectorXd& r) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < r.size(); ++i) a.push_back(r[i]);
  return a;
}

Eigen::VectorXd importance_from_json(const Json& j) {
  Eigen::VectorXd r(j.size());
  Eigen::Index i = 0;
  for (const auto& v : j) r[i++] = v.get<double>();
  return r;
}

Json pose_to_json(const Pose& pose) {
  return Json{{"R", mat3_to_json(pose.R)}, {"t", vec3_to_json(pose.t)}};
}

Pose pose_from_json(const Json& j, double t_scale) {
  Pose pose;
  pose.R = mat3_from_json(j.at("R"));
  pose.t = vec3_from_json(j.at("t")) * t_scale;
  require_rotation(pose.R, "pose");
  return pose;
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw DataError("bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace vispose
