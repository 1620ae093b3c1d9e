#include "flowcomp/image.hpp"

#include "flowcomp/errors.hpp"

namespace flowcomp {

RgbImage::RgbImage(int w, int h) : width(w), height(h) {
  if (w < 2 || h < 2)
    throw InvalidArgumentError("RgbImage must be at least 2x2");
  const size_t n = static_cast<size_t>(w) * h;
  r.assign(n, 0.0);
  g.assign(n, 0.0);
  b.assign(n, 0.0);
}

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out;
  out.width = img.width;
  out.height = img.height;
  out.data.resize(static_cast<size_t>(img.width) * img.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = 0.299 * img.r[i] + 0.587 * img.g[i] + 0.114 * img.b[i];
  return out;
}

}  // namespace flowcomp
