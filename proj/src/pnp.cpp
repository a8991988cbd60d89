#include "vispose/pnp.hpp"

#include <array>
#include <cmath>
#include <random>

namespace vispose {

namespace {

// Pairwise index pairs of 4 control points, fixed order.
constexpr std::array<std::array<int, 2>, 6> kPairs4 = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 2>, 3> kPairs3 = {{{0, 1}, {0, 2}, {1, 2}}};

struct EpnpProblem {
  const std::vector<Vec3>* points;
  std::vector<Vec2> normalized;  // pixel coords mapped through K^-1
  const Camera* camera;
};

double reproj_error_sum(const EpnpProblem& prob, const Mat3& R, const Vec3& t) {
  double sum = 0.0;
  for (size_t i = 0; i < prob.points->size(); ++i) {
    const Vec3 pc = R * (*prob.points)[i] + t;
    if (pc.z() <= 0.0) {
      sum += 1e12;
      continue;
    }
    const Vec2 proj(prob.camera->fx * pc.x() / pc.z() + prob.camera->cx,
                    prob.camera->fy * pc.y() / pc.z() + prob.camera->cy);
    const Vec2 pix(prob.camera->fx * prob.normalized[i].x() + prob.camera->cx,
                   prob.camera->fy * prob.normalized[i].y() + prob.camera->cy);
    sum += (proj - pix).norm();
  }
  return sum;
}

// Procrustes alignment of camera-frame points to world points.
void estimate_rt(const std::vector<Vec3>& world, const std::vector<Vec3>& cam, Mat3& R,
                 Vec3& t) {
  Vec3 pw0 = Vec3::Zero(), pc0 = Vec3::Zero();
  for (size_t i = 0; i < world.size(); ++i) {
    pw0 += world[i];
    pc0 += cam[i];
  }
  pw0 /= static_cast<double>(world.size());
  pc0 /= static_cast<double>(world.size());

  Mat3 abt = Mat3::Zero();
  for (size_t i = 0; i < world.size(); ++i) {
    abt += (cam[i] - pc0) * (world[i] - pw0).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(abt, Eigen::ComputeFullU | Eigen::ComputeFullV);
  R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0) {
    Mat3 Vf = svd.matrixV();
    Vf.col(2) = -Vf.col(2);
    R = svd.matrixU() * Vf.transpose();
  }
  t = pc0 - R * pw0;
}

// --------------------------- 4-control-point branch -----------------------

using Mat6x10 = Eigen::Matrix<double, 6, 10>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

Mat6x10 compute_l6x10(const Eigen::MatrixXd& nullspace /* 12 x 4, cols small->large */) {
  Mat6x10 L;
  std::array<std::array<Vec3, 6>, 4> dv;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) {
      const int a = kPairs4[j][0], b = kPairs4[j][1];
      dv[i][j] = nullspace.block<3, 1>(3 * a, i) - nullspace.block<3, 1>(3 * b, i);
    }
  }
  for (int j = 0; j < 6; ++j) {
    L(j, 0) = dv[0][j].dot(dv[0][j]);
    L(j, 1) = 2.0 * dv[0][j].dot(dv[1][j]);
    L(j, 2) = dv[1][j].dot(dv[1][j]);
    L(j, 3) = 2.0 * dv[0][j].dot(dv[2][j]);
    L(j, 4) = 2.0 * dv[1][j].dot(dv[2][j]);
    L(j, 5) = dv[2][j].dot(dv[2][j]);
    L(j, 6) = 2.0 * dv[0][j].dot(dv[3][j]);
    L(j, 7) = 2.0 * dv[1][j].dot(dv[3][j]);
    L(j, 8) = 2.0 * dv[2][j].dot(dv[3][j]);
    L(j, 9) = dv[3][j].dot(dv[3][j]);
  }
  return L;
}

// betas10 = [B11 B12 B22 B13 B23 B33 B14 B24 B34 B44]
Eigen::Vector4d betas_approx1(const Mat6x10& L, const Vec6& rho) {
  Eigen::Matrix<double, 6, 4> L4;
  L4.col(0) = L.col(0);
  L4.col(1) = L.col(1);
  L4.col(2) = L.col(3);
  L4.col(3) = L.col(6);
  const Eigen::Vector4d b = L4.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
  Eigen::Vector4d betas;
  const double sign = b[0] < 0 ? -1.0 : 1.0;
  betas[0] = std::sqrt(sign * b[0]);
  betas[1] = sign * b[1] / betas[0];
  betas[2] = sign * b[2] / betas[0];
  betas[3] = sign * b[3] / betas[0];
  return betas;
}

Eigen::Vector4d betas_approx2(const Mat6x10& L, const Vec6& rho) {
  Eigen::Matrix<double, 6, 3> L3;
  L3.col(0) = L.col(0);
  L3.col(1) = L.col(1);
  L3.col(2) = L.col(2);
  const Eigen::Vector3d b = L3.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b[0] < 0) {
    betas[0] = std::sqrt(-b[0]);
    betas[1] = b[2] < 0 ? std::sqrt(-b[2]) : 0.0;
  } else {
    betas[0] = std::sqrt(b[0]);
    betas[1] = b[2] > 0 ? std::sqrt(b[2]) : 0.0;
  }
  if (b[1] < 0) betas[0] = -betas[0];
  return betas;
}

Eigen::Vector4d betas_approx3(const Mat6x10& L, const Vec6& rho) {
  const Eigen::Matrix<double, 6, 5> L5 = L.leftCols<5>();
  const Eigen::Matrix<double, 5, 1> b =
      L5.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rho);
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b[0] < 0) {
    betas[0] = std::sqrt(-b[0]);
    betas[1] = b[2] < 0 ? std::sqrt(-b[2]) : 0.0;
  } else {
    betas[0] = std::sqrt(b[0]);
    betas[1] = b[2] > 0 ? std::sqrt(b[2]) : 0.0;
  }
  if (b[1] < 0) betas[0] = -betas[0];
  betas[2] = b[3] / betas[0];
  return betas;
}

void gauss_newton_betas(const Mat6x10& L, const Vec6& rho, Eigen::Vector4d& betas) {
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::Matrix<double, 6, 4> A;
    Vec6 residual;
    for (int i = 0; i < 6; ++i) {
      A(i, 0) = 2 * L(i, 0) * betas[0] + L(i, 1) * betas[1] + L(i, 3) * betas[2] +
                L(i, 6) * betas[3];
      A(i, 1) = L(i, 1) * betas[0] + 2 * L(i, 2) * betas[1] + L(i, 4) * betas[2] +
                L(i, 7) * betas[3];
      A(i, 2) = L(i, 3) * betas[0] + L(i, 4) * betas[1] + 2 * L(i, 5) * betas[2] +
                L(i, 8) * betas[3];
      A(i, 3) = L(i, 6) * betas[0] + L(i, 7) * betas[1] + L(i, 8) * betas[2] +
                2 * L(i, 9) * betas[3];
      residual(i) =
          rho[i] - (L(i, 0) * betas[0] * betas[0] + L(i, 1) * betas[0] * betas[1] +
                    L(i, 2) * betas[1] * betas[1] + L(i, 3) * betas[0] * betas[2] +
                    L(i, 4) * betas[1] * betas[2] + L(i, 5) * betas[2] * betas[2] +
                    L(i, 6) * betas[0] * betas[3] + L(i, 7) * betas[1] * betas[3] +
                    L(i, 8) * betas[2] * betas[3] + L(i, 9) * betas[3] * betas[3]);
    }
    betas += A.colPivHouseholderQr().solve(residual);
  }
}

double pose_from_betas(const EpnpProblem& prob, const Eigen::MatrixXd& nullspace,
                       const Eigen::Vector4d& betas,
                       const std::vector<Eigen::Vector4d>& alphas, int num_control,
                       Mat3& R, Vec3& t) {
  std::vector<Vec3> ccs(num_control, Vec3::Zero());
  const int dims = static_cast<int>(nullspace.cols());
  for (int i = 0; i < dims; ++i) {
    for (int j = 0; j < num_control; ++j) {
      ccs[j] += betas[i] * nullspace.block<3, 1>(3 * j, i);
    }
  }
  const size_t n = prob.points->size();
  std::vector<Vec3> pcs(n);
  double zsum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    Vec3 p = Vec3::Zero();
    for (int j = 0; j < num_control; ++j) {
      p += alphas[i][j] * ccs[j];
    }
    pcs[i] = p;
    zsum += p.z();
  }
  if (zsum < 0.0) {
    for (auto& p : pcs) p = -p;
  }
  estimate_rt(*prob.points, pcs, R, t);
  return reproj_error_sum(prob, R, t);
}

// --------------------------- 3-control-point branch -----------------------

using Mat3x3 = Eigen::Matrix3d;

Eigen::Vector4d planar_betas_case1(const Eigen::Matrix<double, 3, 3>& L,
                                   const Eigen::Vector3d& rho) {
  // single null vector: L column 0 only
  const Eigen::Vector3d l0 = L.col(0);
  const double b11 = l0.dot(rho) / l0.dot(l0);
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  betas[0] = b11 > 0 ? std::sqrt(b11) : 0.0;
  return betas;
}

Eigen::Vector4d planar_betas_case2(const Eigen::Matrix<double, 3, 3>& L,
                                   const Eigen::Vector3d& rho) {
  const Eigen::Vector3d b = L.colPivHouseholderQr().solve(rho);
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b[0] < 0) {
    betas[0] = std::sqrt(-b[0]);
    betas[1] = b[2] < 0 ? std::sqrt(-b[2]) : 0.0;
  } else {
    betas[0] = std::sqrt(b[0]);
    betas[1] = b[2] > 0 ? std::sqrt(b[2]) : 0.0;
  }
  if (b[1] < 0) betas[0] = -betas[0];
  return betas;
}

}  // namespace

void validate_correspondences(const CorrespondenceSet& c) {
  if (c.points3d.size() != c.pixels2d.size()) {
    throw std::invalid_argument("correspondence lengths differ");
  }
  for (const auto& p : c.points3d) {
    if (!p.allFinite()) throw DataError("non-finite 3d point");
  }
  for (const auto& p : c.pixels2d) {
    if (!p.allFinite()) throw DataError("non-finite pixel");
  }
}

double reprojection_error(const Camera& camera, const Pose& pose, const Vec3& point,
                          const Vec2& pixel) {
  const Vec3 pc = pose.apply(point);
  if (pc.z() <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const Vec2 proj(camera.fx * pc.x() / pc.z() + camera.cx,
                  camera.fy * pc.y() / pc.z() + camera.cy);
  return (proj - pixel).norm();
}

Pose epnp(const CorrespondenceSet& correspondences, const Camera& camera) {
  validate_correspondences(correspondences);
  validate_camera(camera);
  const int n = correspondences.size();
  if (n < 4) {
    throw std::invalid_argument("epnp: need at least 4 correspondences");
  }

  EpnpProblem prob;
  prob.points = &correspondences.points3d;
  prob.camera = &camera;
  prob.normalized.resize(n);
  for (int i = 0; i < n; ++i) {
    prob.normalized[i] = {(correspondences.pixels2d[i].x() - camera.cx) / camera.fx,
                          (correspondences.pixels2d[i].y() - camera.cy) / camera.fy};
  }

  // control points from the centroid and principal directions
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : correspondences.points3d) centroid += p;
  centroid /= n;
  Mat3 scatter = Mat3::Zero();
  for (const auto& p : correspondences.points3d) {
    scatter += (p - centroid) * (p - centroid).transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);  // eigenvalues ascending
  const Vec3 evals = eig.eigenvalues().cwiseMax(0.0);
  if (evals[1] <= 1e-12 * std::max(evals[2], 1e-300)) {
    throw NumericError("epnp: degenerate (collinear) points");
  }
  const bool planar = evals[0] <= 1e-10 * evals[2];
  const int num_control = planar ? 3 : 4;

  std::vector<Vec3> control(num_control);
  control[0] = centroid;
  for (int i = 1; i < num_control; ++i) {
    // largest principal directions first
    control[i] =
        centroid + std::sqrt(evals[3 - i] / n) * eig.eigenvectors().col(3 - i);
  }

  // barycentric coordinates
  Eigen::MatrixXd basis(3, num_control - 1);
  for (int i = 1; i < num_control; ++i) {
    basis.col(i - 1) = control[i] - control[0];
  }
  const Eigen::MatrixXd pinv =
      (basis.transpose() * basis).ldlt().solve(basis.transpose()).eval();
  std::vector<Eigen::Vector4d> alphas(n, Eigen::Vector4d::Zero());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd rest = pinv * (correspondences.points3d[i] - control[0]);
    double a0 = 1.0;
    for (int j = 0; j < num_control - 1; ++j) {
      alphas[i][j + 1] = rest[j];
      a0 -= rest[j];
    }
    alphas[i][0] = a0;
  }

  // M matrix on normalized image coordinates
  const int dim = 3 * num_control;
  Eigen::MatrixXd M(2 * n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < num_control; ++j) {
      M(2 * i, 3 * j) = alphas[i][j];
      M(2 * i, 3 * j + 1) = 0.0;
      M(2 * i, 3 * j + 2) = -alphas[i][j] * prob.normalized[i].x();
      M(2 * i + 1, 3 * j) = 0.0;
      M(2 * i + 1, 3 * j + 1) = alphas[i][j];
      M(2 * i + 1, 3 * j + 2) = -alphas[i][j] * prob.normalized[i].y();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> msolver(M.transpose() * M);
  const int null_dims = planar ? 2 : 4;
  const Eigen::MatrixXd nullspace = msolver.eigenvectors().leftCols(null_dims);

  Mat3 best_R;
  Vec3 best_t;
  double best_err = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::Vector4d& betas) {
    Mat3 R;
    Vec3 t;
    const double err = pose_from_betas(prob, nullspace, betas, alphas, num_control, R, t);
    if (err < best_err) {
      best_err = err;
      best_R = R;
      best_t = t;
    }
  };

  if (!planar) {
    Vec6 rho;
    for (int j = 0; j < 6; ++j) {
      rho[j] = (control[kPairs4[j][0]] - control[kPairs4[j][1]]).squaredNorm();
    }
    const Mat6x10 L = compute_l6x10(nullspace);
    for (auto* approx : {&betas_approx1, &betas_approx2, &betas_approx3}) {
      Eigen::Vector4d betas = (*approx)(L, rho);
      gauss_newton_betas(L, rho, betas);
      consider(betas);
    }
  } else {
    Eigen::Vector3d rho;
    Eigen::Matrix3d L;
    for (int j = 0; j < 3; ++j) {
      const int a = kPairs3[j][0], b = kPairs3[j][1];
      rho[j] = (control[a] - control[b]).squaredNorm();
      const Vec3 s0 = nullspace.block<3, 1>(3 * a, 0) - nullspace.block<3, 1>(3 * b, 0);
      const Vec3 s1 = nullspace.block<3, 1>(3 * a, 1) - nullspace.block<3, 1>(3 * b, 1);
      L(j, 0) = s0.dot(s0);
      L(j, 1) = 2.0 * s0.dot(s1);
      L(j, 2) = s1.dot(s1);
    }
    consider(planar_betas_case1(L, rho));
    consider(planar_betas_case2(L, rho));
  }

  if (!std::isfinite(best_err)) {
    throw NumericError("epnp: no valid pose");
  }
  return Pose{best_R, best_t};
}

PoseEstimate ransac_pnp(const CorrespondenceSet& correspondences, const Camera& camera,
                        const RansacConfig& config) {
  validate_correspondences(correspondences);
  const int n = correspondences.size();
  if (n < 4) {
    throw std::invalid_argument("ransac_pnp: need at least 4 correspondences");
  }
  if (config.iterations < 1 || config.reprojection_threshold <= 0.0) {
    throw std::invalid_argument("ransac_pnp: bad configuration");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  auto score = [&](const Pose& pose, std::vector<std::uint8_t>& inliers) {
    inliers.assign(n, 0);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const double err = reprojection_error(camera, pose, correspondences.points3d[i],
                                            correspondences.pixels2d[i]);
      if (err <= config.reprojection_threshold) {
        inliers[i] = 1;
        ++count;
      }
    }
    return count;
  };

  Pose best_pose;
  std::vector<std::uint8_t> best_inliers;
  int best_count = 0;

  CorrespondenceSet sample;
  sample.points3d.resize(4);
  sample.pixels2d.resize(4);
  for (int iter = 0; iter < config.iterations; ++iter) {
    int idx[4];
    for (int j = 0; j < 4; ++j) {
      bool fresh = true;
      do {
        idx[j] = pick(rng);
        fresh = true;
        for (int m = 0; m < j; ++m) fresh &= (idx[m] != idx[j]);
      } while (!fresh);
    }
    for (int j = 0; j < 4; ++j) {
      sample.points3d[j] = correspondences.points3d[idx[j]];
      sample.pixels2d[j] = correspondences.pixels2d[idx[j]];
    }
    Pose hypothesis;
    try {
      hypothesis = epnp(sample, camera);
    } catch (const NumericError&) {
      continue;  // degenerate minimal sample
    }
    std::vector<std::uint8_t> inliers;
    const int count = score(hypothesis, inliers);
    if (count > best_count) {
      best_count = count;
      best_pose = hypothesis;
      best_inliers = std::move(inliers);
    }
  }

  if (best_count < 4) {
    throw NumericError("pose not found");
  }

  // refine on the inlier set, re-scoring and refitting while consensus
  // grows; keep a refinement only if it does not lose inliers
  for (int round = 0; round < 3; ++round) {
    CorrespondenceSet inlier_set;
    for (int i = 0; i < n; ++i) {
      if (best_inliers[i]) {
        inlier_set.points3d.push_back(correspondences.points3d[i]);
        inlier_set.pixels2d.push_back(correspondences.pixels2d[i]);
      }
    }
    bool improved = false;
    try {
      const Pose refined = epnp(inlier_set, camera);
      std::vector<std::uint8_t> refined_inliers;
      const int refined_count = score(refined, refined_inliers);
      if (refined_count >= best_count) {
        improved = refined_count > best_count || refined_inliers != best_inliers;
        best_pose = refined;
        best_count = refined_count;
        best_inliers = std::move(refined_inliers);
      }
    } catch (const NumericError&) {
      // keep the raw hypothesis
    }
    if (!improved) break;
  }

  PoseEstimate est;
  est.pose = best_pose;
  est.inliers = best_inliers;
  est.inlier_count = best_count;
  double err_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (best_inliers[i]) {
      err_sum += reprojection_error(camera, best_pose, correspondences.points3d[i],
                                    correspondences.pixels2d[i]);
    }
  }
  est.mean_reprojection_error = best_count > 0 ? err_sum / best_count : 0.0;
  return est;
}

}  // namespace vispose
