#pragma once

#include <vector>

#include "flowcomp/field.hpp"

namespace flowcomp {

/// RGB image with planar channels, intensities in [0,1].
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<double> r, g, b;

  RgbImage() = default;
  RgbImage(int w, int h);

  size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b.
GrayImage to_grayscale(const RgbImage& img);

}  // namespace flowcomp
