// SPDX-License-Identifier: Apache-2.0

#include "storyboard/raster.hpp"

#include <algorithm>
#include <sstream>

namespace storyboard {

const std::array<Rgb, kPaletteSize>& palette() {
  static const std::array<Rgb, kPaletteSize> kPalette{{
      {255, 255, 255}, {33, 33, 33},   {63, 81, 181},  {233, 30, 99},
      {0, 150, 136},   {255, 193, 7},  {121, 85, 72},  {158, 158, 158},
      {3, 169, 244},   {139, 195, 74}, {255, 87, 34},  {103, 58, 183},
      {205, 220, 57},  {96, 125, 139}, {244, 67, 54},  {0, 0, 0},
  }};
  return kPalette;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

void paint(Raster& r, const Node& n, std::uint64_t seed) {
  const int x0 = std::clamp(n.bounds.x, 0, r.width);
  const int y0 = std::clamp(n.bounds.y, 0, r.height);
  const int x1 = std::clamp(n.bounds.x + n.bounds.w, 0, r.width);
  const int y1 = std::clamp(n.bounds.y + n.bounds.h, 0, r.height);
  const auto fill = static_cast<std::uint8_t>(n.color);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) r.at(x, y) = fill;

  if (!n.label.empty() && y1 > y0 && x1 - x0 > 2) {
    // One text row, vertically centred; each glyph covers one cell.
    const int row = y0 + (y1 - y0) / 2;
    const auto ink = static_cast<std::uint8_t>((n.color + kPaletteSize / 2) % kPaletteSize);
    const std::uint64_t base = mix64(seed ^ fnv1a(n.id));
    for (std::size_t i = 0; i < n.label.size(); ++i) {
      const int x = x0 + 1 + static_cast<int>(i);
      if (x >= x1 - 1) break;
      if (n.label[i] == ' ') continue;
      const std::uint64_t bits = mix64(base + static_cast<unsigned char>(n.label[i]) * 131 + i);
      if ((bits & 3u) != 0) r.at(x, row) = ink;
    }
  }
  for (const auto& c : n.children) paint(r, c, seed);
}

}  // namespace

Raster rasterize(const LayoutTree& layout, std::uint64_t seed) {
  Raster r;
  paint(r, layout.root, seed);
  return r;
}

std::string to_ppm(const Raster& raster) {
  std::ostringstream os;
  os << "P3\n" << raster.width << ' ' << raster.height << "\n255\n";
  const auto& pal = palette();
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      const Rgb& c = pal[raster.at(x, y) % kPaletteSize];
      os << (x ? " " : "") << int(c.r) << ' ' << int(c.g) << ' ' << int(c.b);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace storyboard
