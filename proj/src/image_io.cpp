#include "vispose/image.hpp"

#include <cstring>
#include <fstream>

namespace vispose {

std::size_t MaskImage::count() const {
  std::size_t n = 0;
  for (auto b : bits) n += (b != 0);
  return n;
}

MaskImage make_mask(int width, int height) {
  MaskImage m;
  m.width = width;
  m.height = height;
  m.bits.assign(static_cast<size_t>(width) * height, 0);
  return m;
}

DepthImage make_depth(int width, int height) {
  DepthImage d;
  d.width = width;
  d.height = height;
  d.depths.assign(static_cast<size_t>(width) * height, 0.0f);
  return d;
}

void save_pgm(const MaskImage& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<std::uint8_t> raw(mask.bits.size());
  for (size_t i = 0; i < mask.bits.size(); ++i) raw[i] = mask.bits[i] ? 255 : 0;
  out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
  if (!out) throw DataError("write failed: " + path.string());
}

MaskImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") throw DataError("not a binary PGM: " + path.string());
  auto next_token = [&]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw DataError("truncated PGM header: " + path.string());
  };
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w < 1 || h < 1 || maxval != 255) throw DataError("unsupported PGM: " + path.string());
  in.get();  // single whitespace after maxval
  MaskImage m = make_mask(w, h);
  std::vector<std::uint8_t> raw(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), raw.size());
  if (!in) throw DataError("truncated PGM data: " + path.string());
  for (size_t i = 0; i < raw.size(); ++i) m.bits[i] = raw[i] >= 128 ? 1 : 0;
  return m;
}

namespace {
constexpr char kDepthMagic[4] = {'V', 'D', 'P', 'H'};

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace

void save_depth(const DepthImage& depth, const std::filesystem::path& path) {
  static_assert(sizeof(float) == 4);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(kDepthMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(depth.width));
  put_u32(out, static_cast<std::uint32_t>(depth.height));
  put_u32(out, 0);
  out.write(reinterpret_cast<const char*>(depth.depths.data()),
            static_cast<std::streamsize>(depth.depths.size() * sizeof(float)));
  if (!out) throw DataError("write failed: " + path.string());
}

DepthImage load_depth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kDepthMagic, 4) != 0) {
    throw DataError("bad depth magic: " + path.string());
  }
  const auto w = get_u32(in);
  const auto h = get_u32(in);
  get_u32(in);  // reserved
  DepthImage d = make_depth(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(d.depths.data()),
          static_cast<std::streamsize>(d.depths.size() * sizeof(float)));
  if (!in) throw DataError("truncated depth data: " + path.string());
  return d;
}

}  // namespace vispose
