#pragma once

#include <map>

#include "vispose/localizer.hpp"
#include "vispose/pnp.hpp"
#include "vispose/serialize.hpp"

namespace vispose {

struct ObjectAnnotation {
  int object_id = 0;
  Pose pose;
  std::string mask_path;  // relative to the dataset root; may be empty
};

struct ImageAnnotation {
  int image_id = 0;
  std::vector<ObjectAnnotation> objects;
};

struct AnnotationSet {
  Camera camera;
  std::vector<ImageAnnotation> images;
};

/// Loads and validates annotations: rotations must be orthonormal and every
/// non-empty mask path must exist relative to the annotation file.
/// Translations are multiplied by t_scale at ingestion.
AnnotationSet load_annotations(const std::filesystem::path& path, double t_scale = 1.0);
void save_annotations(const AnnotationSet& set, const std::filesystem::path& path);

// Object id -> mesh path (relative to the dataset root); which id is the
// evaluation target.
struct ModelManifest {
  std::map<int, std::string> mesh_paths;
  int target_object_id = 0;
};

ModelManifest load_models(const std::filesystem::path& path);
void save_models(const ModelManifest& manifest, const std::filesystem::path& path);

// Everything the end-to-end driver needs; defaults follow the evaluation
// configuration (N = 512, k = 20, c = 0.85, N' = 256, 400 RANSAC iterations
// at 2 px).
struct RunConfig {
  int n = 512;
  int k = 20;
  double c = 0.85;
  int n_select = 256;
  double fallback_threshold = 0.1;
  NoiseModel noise;
  RansacConfig ransac;
  double auc_max_threshold = 0.10;  // meters
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Applies "key = value" lines from a config file, then returns the result.
/// Unknown keys are an error; '#' starts a comment.
RunConfig apply_config_file(RunConfig config, const std::filesystem::path& path);

}  // namespace vispose
