#include "vispose/shapes.hpp"

#include <cmath>
#include <map>

namespace vispose {

namespace {

struct SubdivMesh {
  std::vector<Vec3> verts;  // kept on the unit sphere
  std::vector<std::array<int, 3>> faces;
};

SubdivMesh unit_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  SubdivMesh m;
  m.verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : m.verts) v.normalize();
  m.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return m;
}

SubdivMesh subdivide_once(const SubdivMesh& in) {
  SubdivMesh out;
  out.verts = in.verts;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec3 v = (out.verts[a] + out.verts[b]).normalized();
    const int idx = static_cast<int>(out.verts.size());
    out.verts.push_back(v);
    midpoint.emplace(key, idx);
    return idx;
  };
  out.faces.reserve(in.faces.size() * 4);
  for (const auto& f : in.faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

SubdivMesh subdivided_icosahedron(int level) {
  if (level < 0) {
    throw std::invalid_argument("subdivision level must be >= 0");
  }
  SubdivMesh m = unit_icosahedron();
  for (int i = 0; i < level; ++i) m = subdivide_once(m);
  return m;
}

}  // namespace

std::vector<Vec3> icosphere_directions(int level) {
  return subdivided_icosahedron(level).verts;
}

Mesh icosphere_mesh(int level, double radius) {
  const SubdivMesh s = subdivided_icosahedron(level);
  Mesh mesh;
  mesh.vertices.reserve(s.verts.size());
  mesh.vertex_normals.reserve(s.verts.size());
  for (const auto& v : s.verts) {
    mesh.vertices.push_back(v * radius);
    mesh.vertex_normals.push_back(v);
  }
  mesh.faces = s.faces;
  return mesh;
}

Mesh box_mesh(double size_x, double size_y, double size_z) {
  const double hx = size_x / 2, hy = size_y / 2, hz = size_z / 2;
  Mesh mesh;
  mesh.vertices = {
      {-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, hy, -hz}, {-hx, hy, -hz},
      {-hx, -hy, hz},  {hx, -hy, hz},  {hx, hy, hz},  {-hx, hy, hz},
  };
  // Diagonals chosen through the "even parity" corners {0,2,5,7} on every
  // face, which balances incident triangle areas per corner.
  mesh.faces = {
      {0, 2, 1}, {0, 3, 2},  // z = -hz, outward -z
      {4, 5, 7}, {5, 6, 7},  // z = +hz, outward +z
      {0, 1, 5}, {0, 5, 4},  // y = -hy
      {2, 3, 7}, {2, 7, 6},  // y = +hy
      {0, 4, 7}, {0, 7, 3},  // x = -hx
      {1, 2, 5}, {2, 6, 5},  // x = +hx
  };
  return compute_vertex_normals(std::move(mesh));
}

Mesh torus_mesh(double ring_radius, double tube_radius, int ring_segments,
                int tube_segments) {
  if (ring_segments < 3 || tube_segments < 3) {
    throw std::invalid_argument("torus_mesh: need >= 3 segments");
  }
  Mesh mesh;
  mesh.vertices.reserve(ring_segments * tube_segments);
  mesh.vertex_normals.reserve(ring_segments * tube_segments);
  for (int i = 0; i < ring_segments; ++i) {
    const double u = 2.0 * M_PI * i / ring_segments;
    const double cu = std::cos(u), su = std::sin(u);
    for (int j = 0; j < tube_segments; ++j) {
      const double v = 2.0 * M_PI * j / tube_segments;
      const double cv = std::cos(v), sv = std::sin(v);
      mesh.vertices.emplace_back((ring_radius + tube_radius * cv) * cu,
                                 (ring_radius + tube_radius * cv) * su,
                                 tube_radius * sv);
      mesh.vertex_normals.emplace_back(cv * cu, cv * su, sv);
    }
  }
  auto vid = [&](int i, int j) {
    return (i % ring_segments) * tube_segments + (j % tube_segments);
  };
  for (int i = 0; i < ring_segments; ++i) {
    for (int j = 0; j < tube_segments; ++j) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

Mesh quad_mesh(double size_x, double size_y) {
  const double hx = size_x / 2, hy = size_y / 2;
  Mesh mesh;
  mesh.vertices = {{-hx, -hy, 0}, {hx, -hy, 0}, {hx, hy, 0}, {-hx, hy, 0}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};
  mesh.vertex_normals.assign(4, Vec3(0, 0, 1));
  return mesh;
}

Mesh dented_sphere_mesh(int level, double radius, double depth_fraction,
                        double cap_angle) {
  Mesh mesh = icosphere_mesh(level, radius);
  const Vec3 axis = Vec3::UnitX();
  for (auto& v : mesh.vertices) {
    const double angle = std::acos(std::clamp(v.normalized().dot(axis), -1.0, 1.0));
    if (angle < cap_angle) {
      const double blend = 0.5 * (1.0 + std::cos(M_PI * angle / cap_angle));
      v *= 1.0 - depth_fraction * blend;
    }
  }
  mesh.vertex_normals.clear();
  return compute_vertex_normals(std::move(mesh));
}

Mesh cylinder_mesh(double radius, double height, int segments) {
  if (segments < 3) {
    throw std::invalid_argument("cylinder_mesh: need >= 3 segments");
  }
  const double hz = height / 2;
  Mesh mesh;
  for (int i = 0; i < segments; ++i) {
    const double u = 2.0 * M_PI * i / segments;
    mesh.vertices.emplace_back(radius * std::cos(u), radius * std::sin(u), -hz);
    mesh.vertices.emplace_back(radius * std::cos(u), radius * std::sin(u), hz);
  }
  const int bottom_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0, 0, -hz);
  const int top_center = bottom_center + 1;
  mesh.vertices.emplace_back(0, 0, hz);
  for (int i = 0; i < segments; ++i) {
    const int a = 2 * i, b = 2 * ((i + 1) % segments);
    mesh.faces.push_back({a, b, a + 1});
    mesh.faces.push_back({b, b + 1, a + 1});
    mesh.faces.push_back({bottom_center, b, a});
    mesh.faces.push_back({top_center, a + 1, b + 1});
  }
  return compute_vertex_normals(std::move(mesh));
}

}  // namespace vispose
