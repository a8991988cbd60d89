#pragma once

#include <filesystem>

#include "vispose/camera.hpp"

namespace vispose {

// Row-major binary occupancy image.
struct MaskImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1

  bool at(int col, int row) const { return bits[static_cast<size_t>(row) * width + col] != 0; }
  void set(int col, int row, bool v) { bits[static_cast<size_t>(row) * width + col] = v ? 1 : 0; }
  std::size_t count() const;
};

// Row-major depth in meters; 0 marks empty pixels.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<float> depths;

  float at(int col, int row) const { return depths[static_cast<size_t>(row) * width + col]; }
};

MaskImage make_mask(int width, int height);
DepthImage make_depth(int width, int height);

// 8-bit binary PGM (P5): 0 = background, 255 = visible.
void save_pgm(const MaskImage& mask, const std::filesystem::path& path);
MaskImage load_pgm(const std::filesystem::path& path);

// Raw little-endian float32 depth with a 16-byte header:
// magic "VDPH", u32 width, u32 height, u32 reserved.
void save_depth(const DepthImage& depth, const std::filesystem::path& path);
DepthImage load_depth(const std::filesystem::path& path);

}  // namespace vispose
