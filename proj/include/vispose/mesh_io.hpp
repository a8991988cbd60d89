#pragma once

#include <filesystem>

#include "vispose/mesh.hpp"

namespace vispose {

/// Loads a mesh from OBJ (v / vn / f records, polygons fan-triangulated) or
/// binary little-endian PLY (x/y/z plus optional nx/ny/nz), chosen by file
/// extension. Vertices are multiplied by scale at ingestion. Result is
/// validated; normals are taken from the file when present, otherwise left
/// empty.
Mesh load_mesh(const std::filesystem::path& path, double scale = 1.0);

Mesh load_obj(const std::filesystem::path& path, double scale = 1.0);
Mesh load_ply(const std::filesystem::path& path, double scale = 1.0);

/// Writes v / vn / f records.
void save_obj(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace vispose
