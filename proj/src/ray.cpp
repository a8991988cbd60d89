#include "vispose/ray.hpp"

#include <cmath>

namespace vispose {

namespace {

struct RaySetup {
  Vec3 origin;
  int kx, ky, kz;
  double sx, sy, sz;
};

RaySetup make_setup(const Vec3& origin, const Vec3& dir) {
  RaySetup s;
  s.origin = origin;
  // axis with the largest direction magnitude becomes the shear axis
  int kz = 0;
  if (std::abs(dir[1]) > std::abs(dir[kz])) kz = 1;
  if (std::abs(dir[2]) > std::abs(dir[kz])) kz = 2;
  int kx = (kz + 1) % 3;
  int ky = (kx + 1) % 3;
  if (dir[kz] < 0.0) std::swap(kx, ky);
  s.kx = kx;
  s.ky = ky;
  s.kz = kz;
  s.sx = dir[kx] / dir[kz];
  s.sy = dir[ky] / dir[kz];
  s.sz = 1.0 / dir[kz];
  return s;
}

// Returns hit distance or NaN. Watertight: barycentric terms with mixed
// signs reject, shared-edge zeros accept consistently.
double intersect(const RaySetup& s, const Vec3& va, const Vec3& vb, const Vec3& vc) {
  const Vec3 A = va - s.origin;
  const Vec3 B = vb - s.origin;
  const Vec3 C = vc - s.origin;

  const double Ax = A[s.kx] - s.sx * A[s.kz];
  const double Ay = A[s.ky] - s.sy * A[s.kz];
  const double Bx = B[s.kx] - s.sx * B[s.kz];
  const double By = B[s.ky] - s.sy * B[s.kz];
  const double Cx = C[s.kx] - s.sx * C[s.kz];
  const double Cy = C[s.ky] - s.sy * C[s.kz];

  const double U = Cx * By - Cy * Bx;
  const double V = Ax * Cy - Ay * Cx;
  const double W = Bx * Ay - By * Ax;

  if ((U < 0.0 || V < 0.0 || W < 0.0) && (U > 0.0 || V > 0.0 || W > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double det = U + V + W;
  if (det == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double Az = s.sz * A[s.kz];
  const double Bz = s.sz * B[s.kz];
  const double Cz = s.sz * C[s.kz];
  const double T = U * Az + V * Bz + W * Cz;
  const double t = T / det;
  if (t <= 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

bool hits_bounding_box(const Mesh& mesh, const Vec3& origin, const Vec3& dir,
                       double t_max) {
  Vec3 lo = mesh.vertices.front(), hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  double t0 = 0.0, t1 = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < lo[a] || origin[a] > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - origin[a]) / dir[a];
    double tb = (hi[a] - origin[a]) / dir[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

std::optional<RayHit> ray_mesh_first_hit(const Mesh& mesh, const Vec3& origin,
                                         const Vec3& direction, double t_max) {
  if (direction.squaredNorm() == 0.0) {
    throw std::invalid_argument("ray direction is zero");
  }
  if (mesh.vertices.empty() || !hits_bounding_box(mesh, origin, direction, t_max)) {
    return std::nullopt;
  }
  const RaySetup s = make_setup(origin, direction);
  RayHit best;
  best.t = t_max;
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    const double t =
        intersect(s, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    if (std::isnan(t)) continue;
    if (t > kRayEpsilon && t < best.t) {
      best.t = t;
      best.face_index = static_cast<int>(fi);
    }
  }
  if (best.face_index < 0) return std::nullopt;
  return best;
}

bool ray_mesh_any_hit(const Mesh& mesh, const Vec3& origin, const Vec3& direction,
                      double t_max) {
  if (mesh.vertices.empty() || !hits_bounding_box(mesh, origin, direction, t_max)) {
    return false;
  }
  const RaySetup s = make_setup(origin, direction);
  for (const auto& f : mesh.faces) {
    const double t =
        intersect(s, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    if (!std::isnan(t) && t > kRayEpsilon && t < t_max) {
      return true;
    }
  }
  return false;
}

}  // namespace vispose
