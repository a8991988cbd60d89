#pragma once

#include <optional>

#include "vispose/dataset.hpp"
#include "vispose/metrics.hpp"
#include "vispose/scene_gen.hpp"

namespace vispose {

// Which keypoint subsets to run through localization + PnP.
enum class VariantKind { Selection, AllKeypoints, RandomSubset };

std::string variant_name(VariantKind kind);

struct ImageResult {
  int image_id = 0;
  bool pose_found = false;
  std::string error;  // non-empty when processing failed entirely
  double add = std::numeric_limits<double>::infinity();
  double adds = std::numeric_limits<double>::infinity();
  bool recall_002d = false, recall_005d = false, recall_01d = false;
  double mean_reprojection_error = 0.0;
  int inlier_count = 0;
  bool used_fallback = false;
};

struct VariantReport {
  VariantKind kind = VariantKind::Selection;
  std::vector<ImageResult> images;
  // aggregates
  double median_add = 0.0, median_adds = 0.0;
  double mean_add = 0.0;
  double recall_002d = 0.0, recall_005d = 0.0, recall_01d = 0.0;
  double auc_adds = 0.0, auc_adds_it = 0.0;
  double auc_mixed = 0.0, auc_mixed_it = 0.0;
  int failures = 0;
  int fallbacks = 0;
};

struct EvalReport {
  RunConfig config;
  double diameter = 0.0;
  bool symmetric = false;
  std::vector<VariantReport> variants;
};

struct EvalInputs {
  Mesh mesh;                       // target, with normals
  KeypointSet keypoints;           // N keypoints on the target
  AnnotationSet annotations;
  std::filesystem::path mask_root;    // mask paths resolve against this
  std::map<int, Mesh> object_meshes;  // every annotated non-target object id
  int target_object_id = 0;
  std::optional<SymmetrySpec> symmetry;  // pre-aligned frame when present
  std::optional<SymSubset> sym_subset;
};

/// Runs labels -> importance -> selection -> simulated localization ->
/// RANSAC PnP -> metrics for every image and every requested variant.
/// Deterministic given config.seed; images may be processed in parallel
/// (config.jobs) with a fixed reduction order.
EvalReport evaluate_images(const EvalInputs& inputs, const RunConfig& config,
                           const std::vector<VariantKind>& variants);

std::string report_to_json_string(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace vispose
