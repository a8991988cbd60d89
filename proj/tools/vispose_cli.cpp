// Command-line driver: keypoint sampling, visibility labeling, PPR
// importance, synthetic scene generation, and end-to-end pose evaluation.

#include <CLI11.hpp>
#include <iostream>

#include "vispose/mesh_io.hpp"
#include "vispose/pipeline.hpp"
#include "vispose/shapes.hpp"

namespace fs = std::filesystem;
using namespace vispose;

namespace {

struct CommonOptions {
  std::string config_path;
  double mesh_scale = 1.0;
  double t_scale = 1.0;
};

Mesh load_mesh_with_normals(const fs::path& path, double scale) {
  Mesh mesh = load_mesh(path, scale);
  if (!mesh.has_normals()) {
    mesh = compute_vertex_normals(std::move(mesh));
  }
  return mesh;
}

KeypointSet load_keypoints_file(const fs::path& path) {
  try {
    return keypoints_from_json(load_json_file(path));
  } catch (const Json::exception& e) {
    throw DataError("malformed keypoints in " + path.string() + ": " + e.what());
  }
}

// Alignment applied when a symmetry spec carries continuous axes: rotates
// mesh, keypoints and spec into the axis-aligned frame and maps annotated
// poses with R -> R * Q^T.
struct SymmetryContext {
  SymmetrySpec spec;
  Mat3 frame_rotation = Mat3::Identity();
  std::optional<SymSubset> subset;
};

SymmetryContext prepare_symmetry(const fs::path& spec_path, Mesh& mesh, KeypointSet& kps,
                                 int subset_level, double subset_distance_factor) {
  SymmetryContext ctx;
  try {
    ctx.spec = symmetry_from_json(load_json_file(spec_path));
  } catch (const Json::exception& e) {
    throw DataError("malformed symmetry spec in " + spec_path.string() + ": " + e.what());
  }
  if (ctx.spec.has_continuous()) {
    const AxisAlignment aligned = axis_align(ctx.spec, mesh, kps);
    mesh = aligned.mesh;
    kps = aligned.keypoints;
    ctx.spec = aligned.spec;
    ctx.frame_rotation = aligned.rotation;
  }
  if (ctx.spec.has_discrete()) {
    const double diameter = object_diameter(mesh);
    ctx.subset = build_sym_subset(kps, icosphere_rotation_sample(subset_level),
                                  {0, 0, subset_distance_factor * diameter});
  }
  return ctx;
}

Pose to_aligned_frame(const Pose& pose, const Mat3& frame_rotation) {
  return Pose{pose.R * frame_rotation.transpose(), pose.t};
}

const ObjectAnnotation* find_object(const ImageAnnotation& img, int object_id) {
  for (const auto& obj : img.objects) {
    if (obj.object_id == object_id) return &obj;
  }
  return nullptr;
}

int run_sample_keypoints(const std::string& mesh_path, int n, int seed_index,
                         double mesh_scale, const std::string& out_path) {
  const Mesh mesh = load_mesh_with_normals(mesh_path, mesh_scale);
  const KeypointSet kps = farthest_point_sampling(mesh, n, seed_index);
  save_json_file(keypoints_to_json(kps), out_path);
  std::cout << "wrote " << kps.size() << " keypoints to " << out_path << "\n";
  return 0;
}

int run_label(const std::string& mesh_path, const std::string& keypoints_path,
              const std::string& annotations_path, const std::string& symmetry_path,
              int object_id, const CommonOptions& common, const std::string& out_path) {
  Mesh mesh = load_mesh_with_normals(mesh_path, common.mesh_scale);
  KeypointSet kps = load_keypoints_file(keypoints_path);
  const AnnotationSet annotations = load_annotations(annotations_path, common.t_scale);
  const fs::path mask_root = fs::path(annotations_path).parent_path();

  SymmetryContext sym;
  if (!symmetry_path.empty()) {
    sym = prepare_symmetry(symmetry_path, mesh, kps, 4, 2.5);
  }

  Json images = Json::array();
  int errors = 0;
  for (const auto& img : annotations.images) {
    Json record{{"image_id", img.image_id}};
    try {
      const ObjectAnnotation* obj = find_object(img, object_id);
      if (!obj) throw DataError("no annotation for object id " + std::to_string(object_id));
      if (obj->mask_path.empty()) throw DataError("annotation has no mask path");
      Pose pose = to_aligned_frame(obj->pose, sym.frame_rotation);
      if (!sym.spec.is_trivial()) {
        pose = canonicalize(pose, sym.spec, sym.subset.value_or(SymSubset{}), kps);
      }
      const MaskImage mask = load_pgm(mask_root / obj->mask_path);
      const VisibilityLabels labels = compute_labels(kps, pose, annotations.camera, mask);
      record["labels"] = labels_to_json(labels);
      record["canonical_pose"] = pose_to_json(pose);
    } catch (const std::exception& e) {
      record["error"] = e.what();
      ++errors;
    }
    images.push_back(std::move(record));
  }
  Json out{{"version", 1}, {"object_id", object_id}, {"images", images}};
  if (!symmetry_path.empty()) {
    Json q = Json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) q.push_back(sym.frame_rotation(r, c));
    out["frame_rotation"] = q;
  }
  save_json_file(out, out_path);
  std::cout << "labeled " << images.size() << " images (" << errors << " errors) -> "
            << out_path << "\n";
  return 0;
}

int run_importance(const std::string& labels_path, const std::string& keypoints_path,
                   int k, double c, const std::string& edges_path,
                   const std::string& out_path) {
  const KeypointSet kps = load_keypoints_file(keypoints_path);
  const Json labels_file = load_json_file(labels_path);

  const KnnGraph graph = precompute_ppr(build_knn_graph(kps.points, k), c);
  if (!edges_path.empty()) {
    std::ofstream edges(edges_path);
    if (!edges) throw DataError("cannot open for writing: " + edges_path);
    edges << edge_list_text(graph);
  }

  Json images = Json::array();
  for (const auto& img : labels_file.at("images")) {
    Json record{{"image_id", img.at("image_id")}};
    if (img.contains("error")) {
      record["error"] = img.at("error");
    } else {
      const VisibilityLabels labels = labels_from_json(img.at("labels"));
      int visible = 0;
      for (auto f : labels.v) visible += f;
      if (visible == 0) {
        record["fallback"] = true;
      } else {
        record["importance"] = importance_to_json(importance(graph, restart_vector(labels.v)));
      }
    }
    images.push_back(std::move(record));
  }
  save_json_file(Json{{"version", 1}, {"k", k}, {"c", c}, {"images", images}}, out_path);
  std::cout << "wrote importance for " << images.size() << " images -> " << out_path << "\n";
  return 0;
}

int run_simulate(const std::string& mesh_path, const std::string& occluder_path,
                 int num_scenes, double coverage_min, double coverage_max,
                 double distance_min, double distance_max, int width, int height,
                 double focal, std::uint64_t seed, double mesh_scale, bool write_depth,
                 const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root / "masks");
  fs::create_directories(root / "models");
  if (write_depth) fs::create_directories(root / "depth");

  auto target = std::make_shared<const Mesh>(load_mesh_with_normals(mesh_path, mesh_scale));
  const double diameter = object_diameter(*target);

  std::vector<std::shared_ptr<const Mesh>> occluders;
  if (coverage_max > 0.0) {
    if (!occluder_path.empty()) {
      occluders.push_back(
          std::make_shared<const Mesh>(load_mesh_with_normals(occluder_path, mesh_scale)));
    } else {
      // default occluder: a flat box sized relative to the target
      occluders.push_back(std::make_shared<const Mesh>(
          box_mesh(0.7 * diameter, 0.7 * diameter, 0.2 * diameter)));
    }
  }

  Camera camera;
  camera.fx = camera.fy = focal;
  camera.cx = width / 2;
  camera.cy = height / 2;
  camera.width = width;
  camera.height = height;

  SceneGenConfig gen;
  gen.coverage_min = coverage_min;
  gen.coverage_max = coverage_max;
  gen.distance_min = distance_min;
  gen.distance_max = distance_max;

  save_obj(*target, root / "models" / "obj_000001.obj");
  ModelManifest manifest;
  manifest.target_object_id = 1;
  manifest.mesh_paths[1] = "models/obj_000001.obj";
  if (!occluders.empty()) {
    save_obj(*occluders[0], root / "models" / "obj_000002.obj");
    manifest.mesh_paths[2] = "models/obj_000002.obj";
  }
  save_models(manifest, root / "models.json");

  AnnotationSet annotations;
  annotations.camera = camera;
  for (int i = 0; i < num_scenes; ++i) {
    const Scene scene = generate_scene(target, occluders, gen, camera, mix_seed(seed, i));
    char name[64];
    std::snprintf(name, sizeof(name), "masks/%06d.pgm", i);
    save_pgm(render_visible_mask(scene, camera), root / name);
    if (write_depth) {
      char depth_name[64];
      std::snprintf(depth_name, sizeof(depth_name), "depth/%06d.vdph", i);
      save_depth(rasterize_scene(scene, camera).depth, root / depth_name);
    }
    ImageAnnotation img;
    img.image_id = i;
    ObjectAnnotation tgt;
    tgt.object_id = 1;
    tgt.pose = scene.entries[0].pose;
    tgt.mask_path = name;
    img.objects.push_back(tgt);
    for (size_t e = 1; e < scene.entries.size(); ++e) {
      ObjectAnnotation occ;
      occ.object_id = 2;
      occ.pose = scene.entries[e].pose;
      img.objects.push_back(occ);
    }
    annotations.images.push_back(std::move(img));
  }
  save_annotations(annotations, root / "annotations.json");
  std::cout << "simulated " << num_scenes << " scenes -> " << out_dir << "\n";
  return 0;
}

EvalInputs load_eval_inputs(const fs::path& dataset_dir, const std::string& keypoints_path,
                            const std::string& symmetry_path, int n,
                            const CommonOptions& common) {
  EvalInputs inputs;
  inputs.annotations = load_annotations(dataset_dir / "annotations.json", common.t_scale);
  inputs.mask_root = dataset_dir;
  const ModelManifest manifest = load_models(dataset_dir / "models.json");
  inputs.target_object_id = manifest.target_object_id;
  for (const auto& [id, rel_path] : manifest.mesh_paths) {
    Mesh mesh = load_mesh_with_normals(dataset_dir / rel_path, common.mesh_scale);
    if (id == manifest.target_object_id) {
      inputs.mesh = std::move(mesh);
    } else {
      inputs.object_meshes[id] = std::move(mesh);
    }
  }
  if (!keypoints_path.empty()) {
    inputs.keypoints = load_keypoints_file(keypoints_path);
  } else {
    inputs.keypoints = farthest_point_sampling(inputs.mesh, n, 0);
  }
  if (!symmetry_path.empty()) {
    SymmetryContext sym =
        prepare_symmetry(symmetry_path, inputs.mesh, inputs.keypoints, 4, 2.5);
    for (auto& img : inputs.annotations.images) {
      for (auto& obj : img.objects) {
        if (obj.object_id == inputs.target_object_id) {
          obj.pose = to_aligned_frame(obj.pose, sym.frame_rotation);
        }
      }
    }
    inputs.symmetry = sym.spec;
    inputs.sym_subset = sym.subset;
  }
  return inputs;
}

int run_evaluate(const std::string& dataset_dir, const std::string& keypoints_path,
                 const std::string& symmetry_path, const RunConfig& config,
                 bool with_baseline, bool with_random, const CommonOptions& common,
                 const std::string& out_path, const std::string& csv_path) {
  const EvalInputs inputs =
      load_eval_inputs(dataset_dir, keypoints_path, symmetry_path, config.n, common);

  std::vector<VariantKind> variants = {VariantKind::Selection};
  if (with_baseline) variants.push_back(VariantKind::AllKeypoints);
  if (with_random) variants.push_back(VariantKind::RandomSubset);

  const EvalReport report = evaluate_images(inputs, config, variants);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open for writing: " + out_path);
    out << report_to_json_string(report);
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw DataError("cannot open for writing: " + csv_path);
    out << report_to_csv(report);
  }
  std::cout << report_to_text(report);
  return 0;
}

int run_sym_subset(const std::string& mesh_path, const std::string& keypoints_path,
                   int level, double distance_factor, double mesh_scale,
                   const std::string& out_path) {
  const Mesh mesh = load_mesh_with_normals(mesh_path, mesh_scale);
  const KeypointSet kps = load_keypoints_file(keypoints_path);
  const double diameter = object_diameter(mesh);
  const SymSubset subset = build_sym_subset(kps, icosphere_rotation_sample(level),
                                            {0, 0, distance_factor * diameter});
  save_json_file(Json{{"version", 1}, {"indices", subset.indices}}, out_path);
  std::cout << "sym subset size " << subset.indices.size() << " -> " << out_path << "\n";
  return 0;
}

int run_accuracy(const std::string& dataset_dir_str, const std::string& keypoints_path,
                 int n, const CommonOptions& common, const std::string& out_path) {
  const fs::path dataset_dir(dataset_dir_str);
  const EvalInputs inputs = load_eval_inputs(dataset_dir, keypoints_path, "", n, common);
  const auto target_mesh = std::make_shared<const Mesh>(inputs.mesh);
  std::map<int, std::shared_ptr<const Mesh>> other_meshes;
  for (const auto& [id, mesh] : inputs.object_meshes) {
    other_meshes[id] = std::make_shared<const Mesh>(mesh);
  }

  Json images = Json::array();
  double sum = 0.0;
  int counted = 0;
  for (const auto& img : inputs.annotations.images) {
    Json record{{"image_id", img.image_id}};
    try {
      const ObjectAnnotation* obj = find_object(img, inputs.target_object_id);
      if (!obj || obj->mask_path.empty()) throw DataError("missing target annotation or mask");
      const MaskImage mask = load_pgm(dataset_dir / obj->mask_path);
      const VisibilityLabels labels =
          compute_labels(inputs.keypoints, obj->pose, inputs.annotations.camera, mask);
      Scene scene;
      scene.target_index = 0;
      scene.entries.push_back({target_mesh, obj->pose});
      for (const auto& other : img.objects) {
        if (other.object_id == inputs.target_object_id) continue;
        const auto it = other_meshes.find(other.object_id);
        if (it == other_meshes.end()) {
          throw DataError("no mesh for object id " + std::to_string(other.object_id));
        }
        scene.entries.push_back({it->second, other.pose});
      }
      const auto oracle = oracle_visibility(inputs.keypoints, obj->pose, scene);
      const double acc = labeling_accuracy(labels.v, oracle);
      record["accuracy"] = acc;
      sum += acc;
      ++counted;
    } catch (const std::exception& e) {
      record["error"] = e.what();
    }
    images.push_back(std::move(record));
  }
  const double mean = counted > 0 ? sum / counted : 0.0;
  const Json out{{"version", 1}, {"mean_accuracy", mean}, {"images", images}};
  if (!out_path.empty()) save_json_file(out, out_path);
  std::cout << "mean labeling accuracy over " << counted << " images: " << mean << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visibility-aware keypoint pose estimation toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  RunConfig config;

  std::string mesh_path, keypoints_path, annotations_path, symmetry_path, occluder_path;
  std::string dataset_dir, labels_path, out_path, csv_path;
  int seed_index = 0, object_id = 1, subset_level = 4;
  int num_scenes = 10, width = 256, height = 256;
  double coverage_min = 0.0, coverage_max = 0.0;
  double distance_min = 2.2, distance_max = 3.0, focal = 280.0, distance_factor = 2.5;
  bool with_baseline = false, with_random = false, write_depth = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "key = value config file");
    cmd->add_option("--mesh-scale", common.mesh_scale, "scale applied to mesh vertices at load");
  };

  auto* sample = app.add_subcommand("sample-keypoints", "farthest point sampling over mesh vertices");
  sample->add_option("--mesh", mesh_path, "mesh file (.obj/.ply)")->required();
  sample->add_option("--n", config.n, "number of keypoints");
  sample->add_option("--seed-index", seed_index, "first vertex of the sweep");
  sample->add_option("--out", out_path, "output keypoints json")->required();
  add_common(sample);

  auto* label = app.add_subcommand("label", "visibility labels from object-level annotations");
  label->add_option("--mesh", mesh_path)->required();
  label->add_option("--keypoints", keypoints_path)->required();
  label->add_option("--annotations", annotations_path)->required();
  label->add_option("--symmetry", symmetry_path, "symmetry spec json (native or BOP style)");
  label->add_option("--object-id", object_id);
  label->add_option("--t-scale", common.t_scale, "scale applied to annotation translations");
  label->add_option("--out", out_path)->required();
  add_common(label);

  std::string edges_path;
  auto* imp = app.add_subcommand("importance", "PPR importance from visibility labels");
  imp->add_option("--labels", labels_path)->required();
  imp->add_option("--keypoints", keypoints_path)->required();
  imp->add_option("--k", config.k, "k-NN out-degree");
  imp->add_option("--c", config.c, "damping factor");
  imp->add_option("--edges", edges_path, "also dump the graph as an 'i j' edge list");
  imp->add_option("--out", out_path)->required();
  add_common(imp);

  auto* sim = app.add_subcommand("simulate", "synthetic occluded dataset");
  sim->add_option("--mesh", mesh_path)->required();
  sim->add_option("--occluder", occluder_path, "occluder mesh (default: built-in box)");
  sim->add_option("--num-scenes", num_scenes);
  sim->add_option("--coverage-min", coverage_min);
  sim->add_option("--coverage-max", coverage_max);
  sim->add_option("--distance-min", distance_min, "target distance in diameters");
  sim->add_option("--distance-max", distance_max);
  sim->add_option("--width", width);
  sim->add_option("--height", height);
  sim->add_option("--focal", focal, "focal length in pixels");
  sim->add_option("--seed", config.seed);
  sim->add_flag("--depth", write_depth, "also write VDPH depth images");
  sim->add_option("--out", out_path, "dataset directory")->required();
  add_common(sim);

  auto* eval = app.add_subcommand("evaluate", "end-to-end pose evaluation on a dataset");
  eval->add_option("--dataset", dataset_dir)->required();
  eval->add_option("--keypoints", keypoints_path, "keypoints json (default: fps over the target)");
  eval->add_option("--symmetry", symmetry_path);
  eval->add_option("--n", config.n, "keypoints to sample when --keypoints is absent");
  eval->add_option("--k", config.k);
  eval->add_option("--c", config.c);
  eval->add_option("--n-select", config.n_select);
  eval->add_option("--fallback-threshold", config.fallback_threshold);
  eval->add_option("--ransac-iters", config.ransac.iterations);
  eval->add_option("--reproj-thresh", config.ransac.reprojection_threshold);
  eval->add_option("--sigma-visible", config.noise.sigma_visible);
  eval->add_option("--sigma-invisible", config.noise.sigma_invisible);
  eval->add_option("--outlier-rate", config.noise.outlier_rate_invisible);
  eval->add_option("--outlier-radius", config.noise.outlier_radius);
  eval->add_option("--auc-max", config.auc_max_threshold, "AUC threshold ceiling (meters)");
  eval->add_option("--seed", config.seed);
  eval->add_option("--jobs", config.jobs);
  eval->add_option("--t-scale", common.t_scale);
  eval->add_flag("--baseline", with_baseline, "also run the all-keypoints baseline");
  eval->add_flag("--random-baseline", with_random, "also run a random subset baseline");
  eval->add_option("--out", out_path, "report json path");
  eval->add_option("--csv", csv_path, "summary csv path");
  add_common(eval);

  auto* subset = app.add_subcommand("sym-subset", "visibility-maximizing keypoint subset");
  subset->add_option("--mesh", mesh_path)->required();
  subset->add_option("--keypoints", keypoints_path)->required();
  subset->add_option("--level", subset_level, "icosphere subdivision level (4 = 2562 rotations)");
  subset->add_option("--distance-factor", distance_factor, "translation in diameters");
  subset->add_option("--out", out_path)->required();
  add_common(subset);

  auto* acc = app.add_subcommand("accuracy", "label accuracy against the ray-cast oracle");
  acc->add_option("--dataset", dataset_dir)->required();
  acc->add_option("--keypoints", keypoints_path);
  acc->add_option("--n", config.n);
  acc->add_option("--t-scale", common.t_scale);
  acc->add_option("--out", out_path);
  add_common(acc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit with 1
  }

  try {
    if (!common.config_path.empty()) {
      config = apply_config_file(config, common.config_path);
    }
    if (sample->parsed()) {
      return run_sample_keypoints(mesh_path, config.n, seed_index, common.mesh_scale, out_path);
    }
    if (label->parsed()) {
      return run_label(mesh_path, keypoints_path, annotations_path, symmetry_path,
                       object_id, common, out_path);
    }
    if (imp->parsed()) {
      return run_importance(labels_path, keypoints_path, config.k, config.c, edges_path,
                            out_path);
    }
    if (sim->parsed()) {
      return run_simulate(mesh_path, occluder_path, num_scenes, coverage_min, coverage_max,
                          distance_min, distance_max, width, height, focal, config.seed,
                          common.mesh_scale, write_depth, out_path);
    }
    if (eval->parsed()) {
      return run_evaluate(dataset_dir, keypoints_path, symmetry_path, config, with_baseline,
                          with_random, common, out_path, csv_path);
    }
    if (subset->parsed()) {
      return run_sym_subset(mesh_path, keypoints_path, subset_level, distance_factor,
                            common.mesh_scale, out_path);
    }
    if (acc->parsed()) {
      return run_accuracy(dataset_dir, keypoints_path, config.n, common, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
