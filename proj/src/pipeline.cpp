#include "vispose/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace vispose {

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::infinity();
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<int> random_subset(int n, int count, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

constexpr std::uint64_t kSimSalt = 0x51;
constexpr std::uint64_t kRansacSalt = 0xA3;
constexpr std::uint64_t kRandomSubsetSalt = 0xC7;

}  // namespace

std::string variant_name(VariantKind kind) {
  switch (kind) {
    case VariantKind::Selection: return "selection";
    case VariantKind::AllKeypoints: return "all_keypoints";
    case VariantKind::RandomSubset: return "random_subset";
  }
  return "unknown";
}

EvalReport evaluate_images(const EvalInputs& inputs, const RunConfig& config,
                           const std::vector<VariantKind>& variants) {
  if (variants.empty()) {
    throw std::invalid_argument("evaluate_images: no variants requested");
  }
  validate_keypoints(inputs.keypoints);
  const int n = inputs.keypoints.size();
  if (config.n_select < 1 || config.n_select > n) {
    throw std::invalid_argument("evaluate_images: n_select out of range");
  }

  const double diameter = object_diameter(inputs.mesh);

  // the graph and its PPR matrix are per object, computed once
  const KnnGraph graph =
      precompute_ppr(build_knn_graph(inputs.keypoints.points, config.k), config.c);

  const int num_images = static_cast<int>(inputs.annotations.images.size());
  EvalReport report;
  report.config = config;
  report.config.n = n;  // echo the actual keypoint count
  report.diameter = diameter;
  report.symmetric = inputs.symmetry.has_value() && !inputs.symmetry->is_trivial();
  report.variants.resize(variants.size());
  for (size_t vi = 0; vi < variants.size(); ++vi) {
    report.variants[vi].kind = variants[vi];
    report.variants[vi].images.resize(num_images);
  }

  const auto process_image = [&](int img_idx) {
    const ImageAnnotation& ann = inputs.annotations.images[img_idx];
    for (size_t vi = 0; vi < variants.size(); ++vi) {
      report.variants[vi].images[img_idx].image_id = ann.image_id;
    }
    try {
      const ObjectAnnotation* target_ann = nullptr;
      for (const auto& obj : ann.objects) {
        if (obj.object_id == inputs.target_object_id) target_ann = &obj;
      }
      if (!target_ann) throw DataError("image has no target object annotation");
      if (target_ann->mask_path.empty()) throw DataError("target annotation has no mask");

      // With a symmetry spec the canonical pose is an equivalent annotation
      // of the same image; use it consistently for labels, simulation and
      // metrics.
      Pose pose = target_ann->pose;
      if (inputs.symmetry && !inputs.symmetry->is_trivial()) {
        pose = canonicalize(pose, *inputs.symmetry,
                            inputs.sym_subset.value_or(SymSubset{}), inputs.keypoints);
      }

      const MaskImage mask = load_pgm(inputs.mask_root / target_ann->mask_path);
      const VisibilityLabels labels =
          compute_labels(inputs.keypoints, pose, inputs.annotations.camera, mask);

      std::optional<Eigen::VectorXd> r;
      int visible = 0;
      for (auto f : labels.v) visible += f;
      if (visible > 0) {
        r = importance(graph, restart_vector(labels.v));
      }
      const Selection sel = select_with_fallback(
          labels.v, r, inputs.keypoints,
          SelectionConfig{config.n_select, config.fallback_threshold});

      // scene for the ray-cast oracle: target at the evaluation pose,
      // occluders at their annotated poses
      Scene scene;
      scene.target_index = 0;
      scene.entries.push_back(
          {std::shared_ptr<const Mesh>(&inputs.mesh, [](const Mesh*) {}), pose});
      for (const auto& obj : ann.objects) {
        if (obj.object_id == inputs.target_object_id) continue;
        const auto it = inputs.object_meshes.find(obj.object_id);
        if (it == inputs.object_meshes.end()) {
          throw DataError("no mesh for object id " + std::to_string(obj.object_id));
        }
        scene.entries.push_back(
            {std::shared_ptr<const Mesh>(&it->second, [](const Mesh*) {}), obj.pose});
      }
      const auto oracle = oracle_visibility(inputs.keypoints, pose, scene);

      const std::uint64_t image_seed = mix_seed(config.seed, ann.image_id);
      const auto pixels =
          simulate_localization(inputs.keypoints, pose, inputs.annotations.camera, oracle,
                                config.noise, mix_seed(image_seed, kSimSalt));

      for (size_t vi = 0; vi < variants.size(); ++vi) {
        ImageResult& res = report.variants[vi].images[img_idx];
        std::vector<int> indices;
        switch (variants[vi]) {
          case VariantKind::Selection:
            indices = sel.indices;
            res.used_fallback = sel.used_fallback;
            break;
          case VariantKind::AllKeypoints:
            indices.resize(n);
            std::iota(indices.begin(), indices.end(), 0);
            break;
          case VariantKind::RandomSubset:
            indices = random_subset(n, config.n_select,
                                    mix_seed(image_seed, kRandomSubsetSalt));
            break;
        }
        CorrespondenceSet corr;
        corr.points3d.reserve(indices.size());
        corr.pixels2d.reserve(indices.size());
        for (int idx : indices) {
          corr.points3d.push_back(inputs.keypoints.points[idx]);
          corr.pixels2d.push_back(pixels[idx]);
        }
        // same RANSAC seed for every variant so that n_select == N matches
        // the all-keypoints baseline bit for bit
        RansacConfig rc = config.ransac;
        rc.seed = mix_seed(image_seed, kRansacSalt);
        try {
          const PoseEstimate est = ransac_pnp(corr, inputs.annotations.camera, rc);
          res.pose_found = true;
          res.mean_reprojection_error = est.mean_reprojection_error;
          res.inlier_count = est.inlier_count;
          res.add = add_metric(inputs.mesh.vertices, pose, est.pose);
          res.adds = adds_metric(inputs.mesh.vertices, pose, est.pose);
          const double primary = report.symmetric ? res.adds : res.add;
          res.recall_002d = threshold_recall(primary, diameter, 0.02);
          res.recall_005d = threshold_recall(primary, diameter, 0.05);
          res.recall_01d = threshold_recall(primary, diameter, 0.1);
        } catch (const NumericError&) {
          res.pose_found = false;  // counted as failure with infinite distance
        }
      }
    } catch (const std::exception& e) {
      for (size_t vi = 0; vi < variants.size(); ++vi) {
        report.variants[vi].images[img_idx].error = e.what();
      }
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1 || num_images <= 1) {
    for (int i = 0; i < num_images; ++i) process_image(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, num_images);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < num_images; i = next.fetch_add(1)) {
          process_image(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (auto& variant : report.variants) {
    std::vector<double> adds_list, add_list, mixed_list;
    int usable = 0, found = 0;
    double recall002 = 0, recall005 = 0, recall01 = 0, add_sum = 0;
    for (const auto& res : variant.images) {
      if (!res.error.empty()) {
        ++variant.failures;
        continue;
      }
      ++usable;
      variant.fallbacks += res.used_fallback ? 1 : 0;
      if (!res.pose_found) ++variant.failures;
      add_list.push_back(res.add);
      adds_list.push_back(res.adds);
      mixed_list.push_back(report.symmetric ? res.adds : res.add);
      recall002 += res.recall_002d;
      recall005 += res.recall_005d;
      recall01 += res.recall_01d;
      if (std::isfinite(res.add)) {
        add_sum += res.add;
        ++found;
      }
    }
    if (usable > 0) {
      variant.median_add = median(add_list);
      variant.median_adds = median(adds_list);
      variant.mean_add = found > 0 ? add_sum / found : 0.0;
      variant.recall_002d = recall002 / usable;
      variant.recall_005d = recall005 / usable;
      variant.recall_01d = recall01 / usable;
      variant.auc_adds = auc(adds_list, config.auc_max_threshold, false);
      variant.auc_adds_it = auc(adds_list, config.auc_max_threshold, true);
      variant.auc_mixed = auc(mixed_list, config.auc_max_threshold, false);
      variant.auc_mixed_it = auc(mixed_list, config.auc_max_threshold, true);
    }
  }
  return report;
}

std::string report_to_json_string(const EvalReport& report) {
  Json variants = Json::array();
  for (const auto& variant : report.variants) {
    Json images = Json::array();
    for (const auto& res : variant.images) {
      Json r{{"image_id", res.image_id},
             {"pose_found", res.pose_found},
             {"add", std::isfinite(res.add) ? Json(res.add) : Json("inf")},
             {"adds", std::isfinite(res.adds) ? Json(res.adds) : Json("inf")},
             {"recall_002d", res.recall_002d},
             {"recall_005d", res.recall_005d},
             {"recall_01d", res.recall_01d},
             {"mean_reprojection_error", res.mean_reprojection_error},
             {"inlier_count", res.inlier_count},
             {"used_fallback", res.used_fallback}};
      if (!res.error.empty()) r["error"] = res.error;
      images.push_back(std::move(r));
    }
    variants.push_back(Json{{"name", variant_name(variant.kind)},
                            {"median_add", variant.median_add},
                            {"median_adds", variant.median_adds},
                            {"mean_add", variant.mean_add},
                            {"recall_002d", variant.recall_002d},
                            {"recall_005d", variant.recall_005d},
                            {"recall_01d", variant.recall_01d},
                            {"auc_adds", variant.auc_adds},
                            {"auc_adds_11pt", variant.auc_adds_it},
                            {"auc_mixed", variant.auc_mixed},
                            {"auc_mixed_11pt", variant.auc_mixed_it},
                            {"failures", variant.failures},
                            {"fallbacks", variant.fallbacks},
                            {"images", images}});
  }
  const Json j{{"version", 1},
               {"diameter", report.diameter},
               {"symmetric", report.symmetric},
               {"config",
                {{"n", report.config.n},
                 {"k", report.config.k},
                 {"c", report.config.c},
                 {"n_select", report.config.n_select},
                 {"fallback_threshold", report.config.fallback_threshold},
                 {"ransac_iters", report.config.ransac.iterations},
                 {"reproj_thresh", report.config.ransac.reprojection_threshold},
                 {"auc_max_threshold", report.config.auc_max_threshold},
                 {"seed", report.config.seed}}},
               {"variants", variants}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "variant,images,failures,fallbacks,median_add,mean_add,recall_002d,"
         "recall_005d,recall_01d,auc_adds,auc_adds_11pt,auc_mixed,auc_mixed_11pt\n";
  out.precision(6);
  out << std::fixed;
  for (const auto& v : report.variants) {
    out << variant_name(v.kind) << "," << v.images.size() << "," << v.failures << ","
        << v.fallbacks << "," << v.median_add << "," << v.mean_add << ","
        << v.recall_002d << "," << v.recall_005d << "," << v.recall_01d << ","
        << v.auc_adds << "," << v.auc_adds_it << "," << v.auc_mixed << ","
        << v.auc_mixed_it << "\n";
  }
  return out.str();
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %7s %5s %10s %8s %8s %8s %8s\n", "variant",
                "images", "fail", "med_add", "r0.02d", "r0.05d", "r0.1d", "auc");
  out << line;
  for (const auto& v : report.variants) {
    std::snprintf(line, sizeof(line), "%-14s %7zu %5d %10.6f %8.3f %8.3f %8.3f %8.3f\n",
                  variant_name(v.kind).c_str(), v.images.size(), v.failures, v.median_add,
                  v.recall_002d, v.recall_005d, v.recall_01d, v.auc_mixed);
    out << line;
  }
  return out.str();
}

}  // namespace vispose
