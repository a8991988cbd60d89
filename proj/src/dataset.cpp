#include "vispose/dataset.hpp"

#include <fstream>
#include <sstream>

namespace vispose {

AnnotationSet load_annotations(const std::filesystem::path& path, double t_scale) {
  const Json j = load_json_file(path);
  const auto root = path.parent_path();
  AnnotationSet set;
  try {
    const Json& cam = j.at("camera");
    set.camera.fx = cam.at("fx").get<double>();
    set.camera.fy = cam.at("fy").get<double>();
    set.camera.cx = cam.at("cx").get<double>();
    set.camera.cy = cam.at("cy").get<double>();
    set.camera.width = cam.at("width").get<int>();
    set.camera.height = cam.at("height").get<int>();
    validate_camera(set.camera);

    for (const auto& img : j.at("images")) {
      ImageAnnotation ann;
      ann.image_id = img.at("image_id").get<int>();
      for (const auto& obj : img.at("objects")) {
        ObjectAnnotation oa;
        oa.object_id = obj.at("object_id").get<int>();
        oa.pose = pose_from_json(obj, t_scale);
        oa.mask_path = obj.value("mask_path", std::string());
        if (!oa.mask_path.empty() && !std::filesystem::exists(root / oa.mask_path)) {
          throw DataError("referenced mask does not exist: " + oa.mask_path);
        }
        ann.objects.push_back(std::move(oa));
      }
      set.images.push_back(std::move(ann));
    }
  } catch (const Json::exception& e) {
    throw DataError("malformed annotations in " + path.string() + ": " + e.what());
  }
  return set;
}

void save_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
  Json images = Json::array();
  for (const auto& img : set.images) {
    Json objects = Json::array();
    for (const auto& obj : img.objects) {
      Json o = pose_to_json(obj.pose);
      o["object_id"] = obj.object_id;
      o["mask_path"] = obj.mask_path;
      objects.push_back(std::move(o));
    }
    images.push_back(Json{{"image_id", img.image_id}, {"objects", objects}});
  }
  const Json j{{"version", 1},
               {"camera",
                {{"fx", set.camera.fx},
                 {"fy", set.camera.fy},
                 {"cx", set.camera.cx},
                 {"cy", set.camera.cy},
                 {"width", set.camera.width},
                 {"height", set.camera.height}}},
               {"images", images}};
  save_json_file(j, path);
}

ModelManifest load_models(const std::filesystem::path& path) {
  const Json j = load_json_file(path);
  ModelManifest manifest;
  try {
    manifest.target_object_id = j.at("target_object_id").get<int>();
    for (const auto& [key, value] : j.at("models").items()) {
      manifest.mesh_paths[std::stoi(key)] = value.get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw DataError("malformed models manifest in " + path.string() + ": " + e.what());
  }
  if (manifest.mesh_paths.find(manifest.target_object_id) == manifest.mesh_paths.end()) {
    throw DataError("models manifest lacks the target object id");
  }
  return manifest;
}

void save_models(const ModelManifest& manifest, const std::filesystem::path& path) {
  Json models = Json::object();
  for (const auto& [id, mesh_path] : manifest.mesh_paths) {
    models[std::to_string(id)] = mesh_path;
  }
  save_json_file(Json{{"version", 1},
                      {"target_object_id", manifest.target_object_id},
                      {"models", models}},
                 path);
}

RunConfig apply_config_file(RunConfig config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string key, eq, value;
    if (!(ss >> key)) continue;
    if (!(ss >> eq >> value) || eq != "=") {
      throw DataError("bad config line " + std::to_string(line_no) + " in " + path.string());
    }
    if (key == "n") config.n = std::stoi(value);
    else if (key == "k") config.k = std::stoi(value);
    else if (key == "c") config.c = std::stod(value);
    else if (key == "n_select") config.n_select = std::stoi(value);
    else if (key == "fallback_threshold") config.fallback_threshold = std::stod(value);
    else if (key == "sigma_visible") config.noise.sigma_visible = std::stod(value);
    else if (key == "sigma_invisible") config.noise.sigma_invisible = std::stod(value);
    else if (key == "outlier_rate") config.noise.outlier_rate_invisible = std::stod(value);
    else if (key == "outlier_radius") config.noise.outlier_radius = std::stod(value);
    else if (key == "ransac_iters") config.ransac.iterations = std::stoi(value);
    else if (key == "reproj_thresh") config.ransac.reprojection_threshold = std::stod(value);
    else if (key == "auc_max_threshold") config.auc_max_threshold = std::stod(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "jobs") config.jobs = std::stoi(value);
    else throw DataError("unknown config key: " + key);
  }
  return config;
}

}  // namespace vispose
