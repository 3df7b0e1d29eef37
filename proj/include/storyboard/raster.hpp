// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "storyboard/app_model.hpp"

namespace storyboard {

/// Row-major grid of palette indices.
struct Raster {
  int width = kGridWidth;
  int height = kGridHeight;
  std::vector<std::uint8_t> cells = std::vector<std::uint8_t>(kGridWidth * kGridHeight, 0);

  std::uint8_t at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const Raster&) const = default;
};

struct Rgb {
  std::uint8_t r, g, b;
};

const std::array<Rgb, kPaletteSize>& palette();

/// Paints nodes in pre-order: fill, then a seeded glyph stipple for labels.
Raster rasterize(const LayoutTree& layout, std::uint64_t seed);

/// Plain-text portable pixmap (P3).
std::string to_ppm(const Raster& raster);

std::uint64_t fnv1a(std::string_view s);
std::uint64_t mix64(std::uint64_t x);

}  // namespace storyboard
