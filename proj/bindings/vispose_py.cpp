// pybind11 surface over the core library: mesh utilities, visibility labels,
// symmetry canonicalization, PPR importance, selection, PnP and metrics.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vispose/importance.hpp"
#include "vispose/localizer.hpp"
#include "vispose/mesh_io.hpp"
#include "vispose/metrics.hpp"
#include "vispose/pnp.hpp"
#include "vispose/rotations.hpp"
#include "vispose/selection.hpp"
#include "vispose/shapes.hpp"
#include "vispose/symmetry.hpp"
#include "vispose/visibility.hpp"

namespace py = pybind11;
using namespace vispose;

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatI = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<Vec3> to_points(const Eigen::Ref<const RowMat>& m) {
  if (m.cols() != 3) throw std::invalid_argument("expected an (N, 3) array");
  std::vector<Vec3> out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = m.row(i).transpose();
  return out;
}

RowMat from_points(const std::vector<Vec3>& points) {
  RowMat m(points.size(), 3);
  for (size_t i = 0; i < points.size(); ++i) m.row(i) = points[i].transpose();
  return m;
}

RowMatI from_faces(const std::vector<std::array<int, 3>>& faces) {
  RowMatI m(faces.size(), 3);
  for (size_t i = 0; i < faces.size(); ++i) {
    m(i, 0) = faces[i][0];
    m(i, 1) = faces[i][1];
    m(i, 2) = faces[i][2];
  }
  return m;
}

MaskImage mask_from_array(const py::array_t<std::uint8_t>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("mask must be a 2-d uint8 array");
  MaskImage mask = make_mask(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  const auto view = arr.unchecked<2>();
  for (py::ssize_t r = 0; r < arr.shape(0); ++r) {
    for (py::ssize_t c = 0; c < arr.shape(1); ++c) {
      mask.bits[static_cast<size_t>(r) * mask.width + c] = view(r, c) ? 1 : 0;
    }
  }
  return mask;
}

std::vector<std::uint8_t> flags_from_array(const py::array_t<std::uint8_t>& arr) {
  if (arr.ndim() != 1) throw std::invalid_argument("flags must be a 1-d uint8 array");
  const auto view = arr.unchecked<1>();
  std::vector<std::uint8_t> flags(arr.shape(0));
  for (py::ssize_t i = 0; i < arr.shape(0); ++i) flags[i] = view(i) ? 1 : 0;
  return flags;
}

py::array_t<std::uint8_t> flags_to_array(const std::vector<std::uint8_t>& flags) {
  py::array_t<std::uint8_t> out(flags.size());
  auto view = out.mutable_unchecked<1>();
  for (size_t i = 0; i < flags.size(); ++i) view(i) = flags[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(vispose, m) {
  m.doc() = "visibility-aware keypoint pose estimation toolkit";

  py::register_exception<DataError>(m, "DataError");
  py::register_exception<NumericError>(m, "NumericError");

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init([](const Mat3& R, const Vec3& t) { return Pose{R, t}; }), py::arg("R"),
           py::arg("t"))
      .def_readwrite("R", &Pose::R)
      .def_readwrite("t", &Pose::t)
      .def("apply", &Pose::apply);

  py::class_<Camera>(m, "Camera")
      .def(py::init([](double fx, double fy, double cx, double cy, int width, int height) {
             Camera cam{fx, fy, cx, cy, width, height};
             validate_camera(cam);
             return cam;
           }),
           py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
           py::arg("height"))
      .def_readwrite("fx", &Camera::fx)
      .def_readwrite("fy", &Camera::fy)
      .def_readwrite("cx", &Camera::cx)
      .def_readwrite("cy", &Camera::cy)
      .def_readwrite("width", &Camera::width)
      .def_readwrite("height", &Camera::height);

  py::class_<Mesh>(m, "Mesh")
      .def(py::init([](const Eigen::Ref<const RowMat>& vertices,
                       const Eigen::Ref<const RowMatI>& faces) {
             Mesh mesh;
             mesh.vertices = to_points(vertices);
             mesh.faces.reserve(faces.rows());
             for (Eigen::Index i = 0; i < faces.rows(); ++i) {
               mesh.faces.push_back({faces(i, 0), faces(i, 1), faces(i, 2)});
             }
             validate_mesh(mesh);
             return mesh;
           }),
           py::arg("vertices"), py::arg("faces"))
      .def_property_readonly("vertices", [](const Mesh& mesh) { return from_points(mesh.vertices); })
      .def_property_readonly("faces", [](const Mesh& mesh) { return from_faces(mesh.faces); })
      .def_property_readonly("vertex_normals",
                             [](const Mesh& mesh) { return from_points(mesh.vertex_normals); })
      .def_property_readonly("has_normals", &Mesh::has_normals);

  py::class_<KeypointSet>(m, "KeypointSet")
      .def_property_readonly("points", [](const KeypointSet& k) { return from_points(k.points); })
      .def_property_readonly("normals", [](const KeypointSet& k) { return from_points(k.normals); })
      .def_readonly("source_indices", &KeypointSet::source_indices)
      .def("__len__", &KeypointSet::size);

  py::class_<SymmetrySpec>(m, "SymmetrySpec")
      .def(py::init([](const std::vector<Mat3>& discrete, const std::vector<Vec3>& axes) {
             SymmetrySpec spec;
             if (!discrete.empty()) spec.discrete = discrete;
             spec.continuous_axes = axes;
             validate_symmetry_spec(spec);
             return spec;
           }),
           py::arg("discrete") = std::vector<Mat3>{Mat3::Identity()},
           py::arg("continuous_axes") = std::vector<Vec3>{})
      .def_readonly("discrete", &SymmetrySpec::discrete)
      .def_readonly("continuous_axes", &SymmetrySpec::continuous_axes);

  py::class_<SymSubset>(m, "SymSubset")
      .def(py::init([](std::vector<int> indices) { return SymSubset{std::move(indices)}; }),
           py::arg("indices"))
      .def_readonly("indices", &SymSubset::indices);

  py::class_<RotationSet>(m, "RotationSet")
      .def_readonly("rotations", &RotationSet::rotations)
      .def("__len__", &RotationSet::size);

  py::class_<KnnGraph>(m, "KnnGraph")
      .def_readonly("n", &KnnGraph::n)
      .def_readonly("k", &KnnGraph::k)
      .def_readonly("neighbors", &KnnGraph::neighbors)
      .def_readonly("transition", &KnnGraph::transition)
      .def_readonly("ppr", &KnnGraph::ppr)
      .def_readonly("damping", &KnnGraph::damping);

  py::class_<Selection>(m, "Selection")
      .def_readonly("indices", &Selection::indices)
      .def_readonly("used_fallback", &Selection::used_fallback);

  py::class_<PoseEstimate>(m, "PoseEstimate")
      .def_readonly("pose", &PoseEstimate::pose)
      .def_property_readonly("inliers",
                             [](const PoseEstimate& e) { return flags_to_array(e.inliers); })
      .def_readonly("mean_reprojection_error", &PoseEstimate::mean_reprojection_error)
      .def_readonly("inlier_count", &PoseEstimate::inlier_count);

  // meshes and shapes
  m.def("load_mesh", &load_mesh, py::arg("path"), py::arg("scale") = 1.0);
  m.def("save_obj", &save_obj, py::arg("mesh"), py::arg("path"));
  m.def("compute_vertex_normals", &compute_vertex_normals, py::arg("mesh"));
  m.def("object_diameter", &object_diameter, py::arg("mesh"));
  m.def("icosphere_mesh", &icosphere_mesh, py::arg("level"), py::arg("radius"));
  m.def("box_mesh", &box_mesh, py::arg("sx"), py::arg("sy"), py::arg("sz"));
  m.def("torus_mesh", &torus_mesh, py::arg("ring_radius"), py::arg("tube_radius"),
        py::arg("ring_segments"), py::arg("tube_segments"));
  m.def("cylinder_mesh", &cylinder_mesh, py::arg("radius"), py::arg("height"), py::arg("segments"));
  m.def("farthest_point_sampling", &farthest_point_sampling, py::arg("mesh"), py::arg("count"),
        py::arg("seed_index") = 0);
  m.def("face_centroid_keypoints", &face_centroid_keypoints, py::arg("mesh"));
  m.def("icosphere_rotation_sample", &icosphere_rotation_sample, py::arg("level"));

  // projection and visibility
  m.def("project", &project, py::arg("camera"), py::arg("pose"), py::arg("point"));
  m.def(
      "internal_visibility",
      [](const KeypointSet& kps, const Pose& pose) {
        return flags_to_array(internal_visibility(kps, pose));
      },
      py::arg("keypoints"), py::arg("pose"));
  m.def(
      "external_visibility",
      [](const KeypointSet& kps, const Pose& pose, const Camera& cam,
         const py::array_t<std::uint8_t>& mask) {
        return flags_to_array(external_visibility(kps, pose, cam, mask_from_array(mask)));
      },
      py::arg("keypoints"), py::arg("pose"), py::arg("camera"), py::arg("mask"));
  m.def(
      "overall_visibility",
      [](const py::array_t<std::uint8_t>& v_ex, const py::array_t<std::uint8_t>& v_in) {
        return flags_to_array(overall_visibility(flags_from_array(v_ex), flags_from_array(v_in)));
      },
      py::arg("v_ex"), py::arg("v_in"));
  m.def(
      "oracle_visibility",
      [](const Mesh& mesh, const KeypointSet& kps, const Pose& pose) {
        Scene scene;
        scene.entries.push_back({std::make_shared<const Mesh>(mesh), pose});
        scene.target_index = 0;
        return flags_to_array(oracle_visibility(kps, pose, scene));
      },
      py::arg("mesh"), py::arg("keypoints"), py::arg("pose"),
      "ray-cast visibility against a single mesh (self-occlusion only)");
  m.def(
      "labeling_accuracy",
      [](const py::array_t<std::uint8_t>& predicted, const py::array_t<std::uint8_t>& oracle) {
        return labeling_accuracy(flags_from_array(predicted), flags_from_array(oracle));
      },
      py::arg("predicted"), py::arg("oracle"));

  // symmetry
  m.def("canonical_angle", &canonical_angle, py::arg("pose"));
  m.def("canonicalize_continuous", &canonicalize_continuous, py::arg("pose"));
  m.def("canonicalize_second_axis", &canonicalize_second_axis, py::arg("pose"));
  m.def("canonicalize_discrete", &canonicalize_discrete, py::arg("pose"), py::arg("spec"),
        py::arg("subset"), py::arg("keypoints"));
  m.def("canonicalize", &vispose::canonicalize, py::arg("pose"), py::arg("spec"),
        py::arg("subset"), py::arg("keypoints"));
  m.def("build_sym_subset", &build_sym_subset, py::arg("keypoints"), py::arg("rotations"),
        py::arg("fixed_translation"));

  // importance
  m.def(
      "build_knn_graph",
      [](const Eigen::Ref<const RowMat>& points, int k) {
        return build_knn_graph(to_points(points), k);
      },
      py::arg("points"), py::arg("k"));
  m.def("precompute_ppr", &precompute_ppr, py::arg("graph"), py::arg("damping"));
  m.def(
      "restart_vector",
      [](const py::array_t<std::uint8_t>& flags) {
        return restart_vector(flags_from_array(flags));
      },
      py::arg("visibility"));
  m.def("importance", &importance, py::arg("graph"), py::arg("restart"));
  m.def("power_iteration_ppr", &power_iteration_ppr, py::arg("graph"), py::arg("restart"),
        py::arg("damping"), py::arg("tol") = 1e-12, py::arg("max_iters") = 10000);

  // selection
  m.def(
      "select_top",
      [](const Eigen::VectorXd& r, int n_select) {
        return select_top(r, SelectionConfig{n_select, 0.1});
      },
      py::arg("importance"), py::arg("n_select"));
  m.def(
      "select_with_fallback",
      [](const py::array_t<std::uint8_t>& visibility,
         const std::optional<Eigen::VectorXd>& r, const KeypointSet& kps, int n_select,
         double threshold) {
        return select_with_fallback(flags_from_array(visibility), r, kps,
                                    SelectionConfig{n_select, threshold});
      },
      py::arg("visibility"), py::arg("importance"), py::arg("keypoints"), py::arg("n_select"),
      py::arg("fallback_threshold") = 0.1);
  m.def(
      "merge_multiview_keypoints",
      [](const std::vector<Mesh>& meshes, const std::vector<Pose>& poses, int total) {
        MergedKeypoints merged = merge_multiview_keypoints(meshes, poses, total);
        return py::make_tuple(merged.keypoints, merged.source_mesh);
      },
      py::arg("meshes"), py::arg("view_poses"), py::arg("total"));

  // localizer simulation
  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init([](double sv, double si, double rate, double radius) {
             NoiseModel nm{sv, si, rate, radius};
             validate_noise_model(nm);
             return nm;
           }),
           py::arg("sigma_visible") = 1.0, py::arg("sigma_invisible") = 8.0,
           py::arg("outlier_rate_invisible") = 0.2, py::arg("outlier_radius") = 32.0)
      .def_readwrite("sigma_visible", &NoiseModel::sigma_visible)
      .def_readwrite("sigma_invisible", &NoiseModel::sigma_invisible)
      .def_readwrite("outlier_rate_invisible", &NoiseModel::outlier_rate_invisible)
      .def_readwrite("outlier_radius", &NoiseModel::outlier_radius);
  m.def(
      "simulate_localization",
      [](const KeypointSet& kps, const Pose& pose, const Camera& cam,
         const py::array_t<std::uint8_t>& oracle, const NoiseModel& noise, std::uint64_t seed) {
        const auto pixels =
            simulate_localization(kps, pose, cam, flags_from_array(oracle), noise, seed);
        RowMat out(pixels.size(), 2);
        for (size_t i = 0; i < pixels.size(); ++i) out.row(i) = pixels[i].transpose();
        return out;
      },
      py::arg("keypoints"), py::arg("pose"), py::arg("camera"), py::arg("oracle_visibility"),
      py::arg("noise"), py::arg("seed"));

  // pnp and metrics
  m.def(
      "epnp",
      [](const Eigen::Ref<const RowMat>& points3d, const Eigen::Ref<const RowMat>& pixels,
         const Camera& cam) {
        if (pixels.cols() != 2) throw std::invalid_argument("pixels must be (N, 2)");
        CorrespondenceSet corr;
        corr.points3d = to_points(points3d);
        corr.pixels2d.reserve(pixels.rows());
        for (Eigen::Index i = 0; i < pixels.rows(); ++i) {
          corr.pixels2d.emplace_back(pixels(i, 0), pixels(i, 1));
        }
        return epnp(corr, cam);
      },
      py::arg("points3d"), py::arg("pixels2d"), py::arg("camera"));
  m.def(
      "ransac_pnp",
      [](const Eigen::Ref<const RowMat>& points3d, const Eigen::Ref<const RowMat>& pixels,
         const Camera& cam, int iterations, double threshold, std::uint64_t seed) {
        if (pixels.cols() != 2) throw std::invalid_argument("pixels must be (N, 2)");
        CorrespondenceSet corr;
        corr.points3d = to_points(points3d);
        corr.pixels2d.reserve(pixels.rows());
        for (Eigen::Index i = 0; i < pixels.rows(); ++i) {
          corr.pixels2d.emplace_back(pixels(i, 0), pixels(i, 1));
        }
        return ransac_pnp(corr, cam, RansacConfig{iterations, threshold, seed});
      },
      py::arg("points3d"), py::arg("pixels2d"), py::arg("camera"), py::arg("iterations") = 400,
      py::arg("reprojection_threshold") = 2.0, py::arg("seed") = 0);
  m.def(
      "add_metric",
      [](const Eigen::Ref<const RowMat>& points, const Pose& gt, const Pose& est) {
        return add_metric(to_points(points), gt, est);
      },
      py::arg("model_points"), py::arg("gt"), py::arg("est"));
  m.def(
      "adds_metric",
      [](const Eigen::Ref<const RowMat>& points, const Pose& gt, const Pose& est) {
        return adds_metric(to_points(points), gt, est);
      },
      py::arg("model_points"), py::arg("gt"), py::arg("est"));
  m.def("threshold_recall", &threshold_recall, py::arg("distance"), py::arg("diameter"),
        py::arg("fraction"));
  m.def("auc", &auc, py::arg("distances"), py::arg("max_threshold"),
        py::arg("eleven_point_interpolation") = false);
  m.def("rotation_angle_between", &rotation_angle_between, py::arg("a"), py::arg("b"));
}
