#include "vispose/mesh_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace vispose {

namespace {

// OBJ face corner "v", "v/vt", "v//vn", "v/vt/vn"; returns (vertex, normal)
// as 0-based indices, normal -1 when absent.
std::pair<int, int> parse_corner(const std::string& token, int vertex_count,
                                 int normal_count) {
  int v = 0;
  int vn = 0;  // OBJ indices are 1-based, so 0 marks "no normal"
  const auto first = token.find('/');
  if (first == std::string::npos) {
    v = std::stoi(token);
  } else {
    v = std::stoi(token.substr(0, first));
    const auto second = token.find('/', first + 1);
    if (second != std::string::npos && second + 1 < token.size()) {
      vn = std::stoi(token.substr(second + 1));
    }
  }
  // negative OBJ indices are relative to the current element count
  if (v < 0) v = vertex_count + v + 1;
  if (vn < 0) vn = normal_count + vn + 1;
  if (v < 1 || v > vertex_count) throw DataError("OBJ face index out of range");
  return {v - 1, vn - 1};
}

}  // namespace

Mesh load_obj(const std::filesystem::path& path, double scale) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());

  Mesh mesh;
  std::vector<Vec3> file_normals;
  std::vector<int> vertex_normal;  // normal index assigned per vertex, -1 = none
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw DataError("bad OBJ vertex line");
      mesh.vertices.emplace_back(x * scale, y * scale, z * scale);
      vertex_normal.push_back(-1);
    } else if (tag == "vn") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw DataError("bad OBJ normal line");
      file_normals.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<std::pair<int, int>> corners;
      std::string token;
      while (ss >> token) {
        corners.push_back(parse_corner(token, static_cast<int>(mesh.vertices.size()),
                                       static_cast<int>(file_normals.size())));
      }
      if (corners.size() < 3) throw DataError("OBJ face with fewer than 3 corners");
      for (auto& [v, vn] : corners) {
        if (vn >= 0) {
          if (vn >= static_cast<int>(file_normals.size())) {
            throw DataError("OBJ normal index out of range");
          }
          vertex_normal[v] = vn;
        }
      }
      for (size_t i = 1; i + 1 < corners.size(); ++i) {  // fan triangulation
        mesh.faces.push_back({corners[0].first, corners[i].first, corners[i + 1].first});
      }
    }
  }
  bool all_assigned = !mesh.vertices.empty();
  for (int vn : vertex_normal) all_assigned &= (vn >= 0);
  if (all_assigned && !file_normals.empty()) {
    mesh.vertex_normals.resize(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      const Vec3& n = file_normals[vertex_normal[i]];
      const double len = n.norm();
      if (len <= 0.0) throw DataError("zero-length OBJ normal");
      mesh.vertex_normals[i] = n / len;
    }
  }
  validate_mesh(mesh);
  return mesh;
}

Mesh load_ply(const std::filesystem::path& path, double scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw DataError("not a PLY file: " + path.string());
  }

  struct Property {
    std::string type;
    std::string name;
  };
  long vertex_count = -1, face_count = -1;
  std::vector<Property> vertex_props;
  std::string face_count_type = "uchar", face_index_type = "int";
  std::string current_element;
  bool little_endian = false;

  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      little_endian = (fmt == "binary_little_endian");
      if (!little_endian) throw DataError("PLY must be binary little-endian");
    } else if (tag == "element") {
      std::string name;
      long count;
      ss >> name >> count;
      current_element = name;
      if (name == "vertex") vertex_count = count;
      if (name == "face") face_count = count;
    } else if (tag == "property") {
      std::string type;
      ss >> type;
      if (type == "list") {
        ss >> face_count_type >> face_index_type;
      } else if (current_element == "vertex") {
        Property p;
        p.type = type;
        ss >> p.name;
        vertex_props.push_back(p);
      }
    } else if (tag == "end_header") {
      break;
    }
  }
  if (vertex_count < 0 || face_count < 0) {
    throw DataError("PLY missing vertex or face element");
  }

  auto scalar_size = [](const std::string& t) -> size_t {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
        t == "float32")
      return 4;
    if (t == "double" || t == "float64") return 8;
    throw DataError("unsupported PLY property type: " + t);
  };
  auto read_scalar = [&](const std::string& t) -> double {
    char buf[8];
    in.read(buf, static_cast<std::streamsize>(scalar_size(t)));
    if (t == "float" || t == "float32") {
      float f;
      std::memcpy(&f, buf, 4);
      return f;
    }
    if (t == "double" || t == "float64") {
      double d;
      std::memcpy(&d, buf, 8);
      return d;
    }
    if (t == "uchar" || t == "uint8") return static_cast<unsigned char>(buf[0]);
    if (t == "char" || t == "int8") return static_cast<signed char>(buf[0]);
    if (t == "short" || t == "int16") {
      std::int16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    if (t == "ushort" || t == "uint16") {
      std::uint16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    if (t == "int" || t == "int32") {
      std::int32_t v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    std::uint32_t v;
    std::memcpy(&v, buf, 4);
    return v;
  };

  Mesh mesh;
  mesh.vertices.resize(vertex_count);
  bool has_nx = false;
  for (const auto& p : vertex_props) has_nx |= (p.name == "nx");
  if (has_nx) mesh.vertex_normals.resize(vertex_count);

  for (long i = 0; i < vertex_count; ++i) {
    Vec3 v = Vec3::Zero(), n = Vec3::Zero();
    for (const auto& p : vertex_props) {
      const double value = read_scalar(p.type);
      if (p.name == "x") v.x() = value;
      else if (p.name == "y") v.y() = value;
      else if (p.name == "z") v.z() = value;
      else if (p.name == "nx") n.x() = value;
      else if (p.name == "ny") n.y() = value;
      else if (p.name == "nz") n.z() = value;
    }
    mesh.vertices[i] = v * scale;
    if (has_nx) {
      const double len = n.norm();
      if (len <= 0.0) throw DataError("zero-length PLY normal");
      mesh.vertex_normals[i] = n / len;
    }
  }
  for (long f = 0; f < face_count; ++f) {
    const int corners = static_cast<int>(read_scalar(face_count_type));
    std::vector<int> poly(corners);
    for (int c = 0; c < corners; ++c) {
      poly[c] = static_cast<int>(read_scalar(face_index_type));
    }
    if (corners < 3) throw DataError("PLY face with fewer than 3 corners");
    for (int c = 1; c + 1 < corners; ++c) {
      mesh.faces.push_back({poly[0], poly[c], poly[c + 1]});
    }
  }
  if (!in) throw DataError("truncated PLY data: " + path.string());
  validate_mesh(mesh);
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path, double scale) {
  const auto ext = path.extension().string();
  if (ext == ".obj" || ext == ".OBJ") return load_obj(path, scale);
  if (ext == ".ply" || ext == ".PLY") return load_ply(path, scale);
  throw DataError("unsupported mesh format: " + path.string());
}

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.precision(17);
  for (const auto& v : mesh.vertices) {
    out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  }
  const bool normals = mesh.has_normals();
  if (normals) {
    for (const auto& n : mesh.vertex_normals) {
      out << "vn " << n.x() << " " << n.y() << " " << n.z() << "\n";
    }
  }
  for (const auto& f : mesh.faces) {
    if (normals) {
      out << "f " << f[0] + 1 << "//" << f[0] + 1 << " " << f[1] + 1 << "//" << f[1] + 1
          << " " << f[2] + 1 << "//" << f[2] + 1 << "\n";
    } else {
      out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace vispose
