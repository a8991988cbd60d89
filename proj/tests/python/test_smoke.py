"""Smoke tests for the python module and the CLI binary."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

sys.path.insert(0, os.environ.get("VISPOSE_MODULE_DIR", "build/bindings"))

import vispose  # noqa: E402

CLI = os.environ.get("VISPOSE_CLI", "build/tools/vispose")


def test_mesh_and_keypoints():
    mesh = vispose.icosphere_mesh(2, 0.1)
    assert mesh.vertices.shape == (162, 3)
    assert mesh.has_normals
    assert abs(vispose.object_diameter(mesh) - 0.2) < 1e-3

    kps = vispose.farthest_point_sampling(mesh, 64)
    assert len(kps) == 64
    assert kps.points.shape == (64, 3)
    assert np.allclose(np.linalg.norm(kps.normals, axis=1), 1.0, atol=1e-9)


def test_visibility_and_importance():
    mesh = vispose.icosphere_mesh(2, 0.1)
    kps = vispose.farthest_point_sampling(mesh, 64)
    pose = vispose.Pose(np.eye(3), np.array([0.0, 0.0, 0.5]))

    v_in = vispose.internal_visibility(kps, pose)
    assert 0 < v_in.sum() < 64

    oracle = vispose.oracle_visibility(mesh, kps, pose)
    accuracy = vispose.labeling_accuracy(v_in, oracle)
    assert accuracy > 0.9  # convex object, vertex-normal horizon band only

    graph = vispose.precompute_ppr(vispose.build_knn_graph(kps.points, 8), 0.85)
    r = vispose.importance(graph, vispose.restart_vector(v_in))
    assert abs(r.sum() - 1.0) < 1e-9
    it = vispose.power_iteration_ppr(graph, vispose.restart_vector(v_in), 0.85)
    assert np.max(np.abs(r - it)) < 1e-9

    sel = vispose.select_with_fallback(v_in, r, kps, 32)
    assert len(sel.indices) == 32
    assert not sel.used_fallback


def test_two_cycle_closed_form():
    points = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    graph = vispose.precompute_ppr(vispose.build_knn_graph(points, 1), 0.85)
    r = vispose.importance(graph, np.array([1.0, 0.0]))
    assert abs(r[0] - 1.0 / 1.85) < 1e-12
    assert abs(r[1] - 0.85 / 1.85) < 1e-12


def test_canonical_angle_cases():
    # R^T t = (0, -1, 3) -> theta = pi/2
    pose = vispose.Pose(np.eye(3), np.array([0.0, -1.0, 3.0]))
    assert abs(vispose.canonical_angle(pose) - np.pi / 2) < 1e-12
    canon = vispose.canonicalize_continuous(pose)
    rt = canon.R.T @ canon.t
    assert rt[0] < 0 and abs(rt[1]) < 1e-12


def test_epnp_round_trip():
    cam = vispose.Camera(500.0, 500.0, 320.0, 240.0, 640, 480)
    rng = np.random.default_rng(0)
    points = rng.uniform(-0.1, 0.1, size=(30, 3))
    angle = 0.4
    R = np.array(
        [
            [np.cos(angle), -np.sin(angle), 0.0],
            [np.sin(angle), np.cos(angle), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    pose = vispose.Pose(R, np.array([0.02, -0.01, 0.6]))
    pixels = np.array([vispose.project(cam, pose, p) for p in points])
    est = vispose.epnp(points, pixels, cam)
    assert vispose.rotation_angle_between(pose.R, est.R) < 1e-4
    assert np.linalg.norm(pose.t - est.t) < 1e-5

    est2 = vispose.ransac_pnp(points, pixels, cam, iterations=100, seed=3)
    assert est2.inlier_count == 30


def test_metrics():
    mesh = vispose.icosphere_mesh(1, 0.1)
    gt = vispose.Pose(np.eye(3), np.array([0.0, 0.0, 0.5]))
    est = vispose.Pose(np.eye(3), np.array([0.0, 0.003, 0.504]))
    add = vispose.add_metric(mesh.vertices, gt, est)
    assert abs(add - 0.005) < 1e-12
    assert vispose.adds_metric(mesh.vertices, gt, est) <= add
    assert vispose.threshold_recall(add, 0.2, 0.05)
    assert not vispose.threshold_recall(add, 0.2, 0.02)
    assert vispose.auc([0.0] * 5, 0.1, False) == 1.0


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("vispose_cli")
    mesh_path = root / "target.obj"
    vispose.save_obj(vispose.icosphere_mesh(3, 0.1), mesh_path)
    out = root / "dataset"
    subprocess.run(
        [
            CLI, "simulate", "--mesh", str(mesh_path), "--num-scenes", "4",
            "--coverage-min", "0.3", "--coverage-max", "0.6", "--seed", "5",
            "--out", str(out),
        ],
        check=True,
    )
    return out


def test_cli_simulate_layout(dataset):
    assert (dataset / "annotations.json").exists()
    assert (dataset / "models.json").exists()
    annotations = json.loads((dataset / "annotations.json").read_text())
    assert annotations["version"] == 1
    assert len(annotations["images"]) == 4
    for image in annotations["images"]:
        mask = dataset / image["objects"][0]["mask_path"]
        assert mask.exists()


def test_cli_pipeline_round_trip(dataset, tmp_path):
    kp_path = tmp_path / "kps.json"
    labels_path = tmp_path / "labels.json"
    importance_path = tmp_path / "importance.json"
    mesh_path = dataset / "models" / "obj_000001.obj"

    subprocess.run(
        [CLI, "sample-keypoints", "--mesh", str(mesh_path), "--n", "128",
         "--out", str(kp_path)],
        check=True,
    )
    subprocess.run(
        [CLI, "label", "--mesh", str(mesh_path), "--keypoints", str(kp_path),
         "--annotations", str(dataset / "annotations.json"), "--out", str(labels_path)],
        check=True,
    )
    labels = json.loads(labels_path.read_text())
    assert len(labels["images"]) == 4
    first = labels["images"][0]["labels"]
    assert len(first["v"]) == 128
    assert all(v == (e and i) for v, e, i in zip(first["v"], first["v_ex"], first["v_in"]))

    subprocess.run(
        [CLI, "importance", "--labels", str(labels_path), "--keypoints", str(kp_path),
         "--k", "8", "--out", str(importance_path)],
        check=True,
    )
    importance = json.loads(importance_path.read_text())
    for image in importance["images"]:
        if "importance" in image:
            assert abs(sum(image["importance"]) - 1.0) < 1e-9


def test_cli_evaluate_deterministic(dataset, tmp_path):
    reports = []
    for run in range(2):
        out = tmp_path / f"report_{run}.json"
        subprocess.run(
            [CLI, "evaluate", "--dataset", str(dataset), "--n", "128", "--k", "8",
             "--n-select", "64", "--ransac-iters", "100", "--seed", "11",
             "--baseline", "--out", str(out)],
            check=True,
        )
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]
    report = json.loads(reports[0])
    names = [v["name"] for v in report["variants"]]
    assert names == ["selection", "all_keypoints"]


def test_cli_sample_keypoints_cube(tmp_path):
    cube_path = tmp_path / "cube.obj"
    vispose.save_obj(vispose.box_mesh(0.1, 0.1, 0.1), cube_path)
    outs = []
    for run in range(2):
        out = tmp_path / f"cube_kps_{run}.json"
        subprocess.run(
            [CLI, "sample-keypoints", "--mesh", str(cube_path), "--n", "8",
             "--out", str(out)],
            check=True,
        )
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]  # byte-identical across invocations
    kps = json.loads(outs[0])
    # farthest point sampling of a cube reaches all 8 extreme corners
    assert sorted(kps["source_indices"]) == list(range(8))


def test_cli_label_symmetric_poses_agree(tmp_path):
    # two annotations of the same physical view, differing by a symmetry
    # transform, must produce the same visibility labels
    mesh_path = tmp_path / "cyl.obj"
    vispose.save_obj(vispose.cylinder_mesh(0.04, 0.15, 96), mesh_path)
    spec_path = tmp_path / "sym.json"
    spec_path.write_text(json.dumps({
        "discrete": [[1, 0, 0, 0, 1, 0, 0, 0, 1],
                     [1, 0, 0, 0, -1, 0, 0, 0, -1]],  # end-over-end flip
        "continuous_axes": [[0.0, 0.0, 1.0]],
    }))

    kp_path = tmp_path / "kps.json"
    subprocess.run(
        [CLI, "sample-keypoints", "--mesh", str(mesh_path), "--n", "128",
         "--out", str(kp_path)],
        check=True,
    )

    rng = np.random.default_rng(4)
    angle = float(rng.uniform(0, 2 * np.pi))
    rz = np.array([[np.cos(angle), -np.sin(angle), 0],
                   [np.sin(angle), np.cos(angle), 0],
                   [0, 0, 1]])
    flip = np.diag([1.0, -1.0, -1.0])
    base_r = np.array([[0, 0, 1.0], [0, 1.0, 0], [-1.0, 0, 0]])  # side view

    mask = tmp_path / "full.pgm"
    full = np.full((64, 64), 255, dtype=np.uint8)
    mask.write_bytes(b"P5\n64 64\n255\n" + full.tobytes())

    labels = []
    for variant_r in (base_r, base_r @ rz @ flip):
        ann = {
            "version": 1,
            "camera": {"fx": 120.0, "fy": 120.0, "cx": 32.0, "cy": 32.0,
                       "width": 64, "height": 64},
            "images": [{
                "image_id": 0,
                "objects": [{"object_id": 1, "R": list(variant_r.flatten()),
                             "t": [0.0, 0.01, 0.5], "mask_path": "full.pgm"}],
            }],
        }
        ann_path = tmp_path / "ann.json"
        ann_path.write_text(json.dumps(ann))
        out = tmp_path / "labels.json"
        subprocess.run(
            [CLI, "label", "--mesh", str(mesh_path), "--keypoints", str(kp_path),
             "--annotations", str(ann_path), "--symmetry", str(spec_path),
             "--out", str(out)],
            check=True,
        )
        labels.append(json.loads(out.read_text())["images"][0]["labels"])
    assert labels[0] == labels[1]


def test_cli_label_unoccluded_sphere_fraction(tmp_path):
    # For a convex target at distance f*diameter the internally visible cap
    # covers (1 - 1/(2 f)) / 2 of the surface: 0.39..0.42 for f in [2.2, 3].
    mesh_path = tmp_path / "sphere.obj"
    vispose.save_obj(vispose.icosphere_mesh(3, 0.1), mesh_path)
    dataset = tmp_path / "ds"
    subprocess.run(
        [CLI, "simulate", "--mesh", str(mesh_path), "--num-scenes", "2",
         "--seed", "3", "--out", str(dataset)],
        check=True,
    )
    kp_path = tmp_path / "kps.json"
    subprocess.run(
        [CLI, "sample-keypoints", "--mesh", str(mesh_path), "--n", "256",
         "--out", str(kp_path)],
        check=True,
    )
    labels_path = tmp_path / "labels.json"
    subprocess.run(
        [CLI, "label", "--mesh", str(mesh_path), "--keypoints", str(kp_path),
         "--annotations", str(dataset / "annotations.json"), "--out", str(labels_path)],
        check=True,
    )
    for image in json.loads(labels_path.read_text())["images"]:
        fraction = sum(image["labels"]["v"]) / 256.0
        assert 0.33 < fraction < 0.55


def test_cli_evaluate_with_symmetry(tmp_path):
    # full pipeline over a symmetric object: canonical poses drive labels,
    # simulation and ADD-S-based recall
    mesh_path = tmp_path / "cyl.obj"
    vispose.save_obj(vispose.cylinder_mesh(0.04, 0.15, 96), mesh_path)
    spec_path = tmp_path / "sym.json"
    spec_path.write_text(json.dumps({
        "discrete": [[1, 0, 0, 0, 1, 0, 0, 0, 1],
                     [1, 0, 0, 0, -1, 0, 0, 0, -1]],
        "continuous_axes": [[0.0, 0.0, 1.0]],
    }))
    dataset = tmp_path / "dataset"
    subprocess.run(
        [CLI, "simulate", "--mesh", str(mesh_path), "--num-scenes", "3",
         "--seed", "9", "--out", str(dataset)],
        check=True,
    )
    out = tmp_path / "report.json"
    subprocess.run(
        [CLI, "evaluate", "--dataset", str(dataset), "--symmetry", str(spec_path),
         "--n", "128", "--k", "8", "--n-select", "64", "--ransac-iters", "150",
         "--seed", "9", "--out", str(out)],
        check=True,
    )
    report = json.loads(out.read_text())
    assert report["symmetric"] is True
    variant = report["variants"][0]
    assert variant["failures"] == 0
    assert variant["recall_01d"] == 1.0  # unoccluded scenes, ADD-S based


def test_cli_usage_error_exit_code():
    result = subprocess.run([CLI, "sample-keypoints"], capture_output=True)
    assert result.returncode == 1  # missing required options

    result = subprocess.run(
        [CLI, "sample-keypoints", "--mesh", "/nonexistent.obj", "--out", "/tmp/x.json"],
        capture_output=True,
    )
    assert result.returncode == 2  # data error


def test_cli_zero_keypoints_is_a_usage_error(tmp_path):
    cube_path = tmp_path / "cube.obj"
    vispose.save_obj(vispose.box_mesh(0.1, 0.1, 0.1), cube_path)
    result = subprocess.run(
        [CLI, "sample-keypoints", "--mesh", str(cube_path), "--n", "0",
         "--out", str(tmp_path / "kps.json")],
        capture_output=True,
    )
    assert result.returncode == 1
