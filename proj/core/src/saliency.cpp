#include "flowcomp/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "flowcomp/errors.hpp"
#include "flowcomp/image.hpp"
#include "flowcomp/image_io.hpp"

namespace flowcomp {

SaliencyMap uniform_saliency(int w, int h) {
  if (w < 2 || h < 2)
    throw InvalidArgumentError("uniform_saliency: size must be >= 2x2");
  SaliencyMap s;
  static_cast<ScalarField&>(s) = ScalarField(w, h, 0.5);
  return s;
}

SaliencyMap center_bias_saliency(int w, int h, double sigma_frac) {
  if (w < 2 || h < 2)
    throw InvalidArgumentError("center_bias_saliency: size must be >= 2x2");
  if (sigma_frac <= 0.0)
    throw InvalidArgumentError("center_bias_saliency: sigma_frac must be > 0");
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double sigma = sigma_frac * std::min(w, h);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  SaliencyMap s;
  static_cast<ScalarField&>(s) = ScalarField(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = x - cx, dy = y - cy;
      s.at(x, y) = std::exp(-(dx * dx + dy * dy) * inv);
    }
  return s;
}

SaliencyMap edge_saliency(const GrayImage& img, double blur_sigma) {
  require_min_size(img, 3, 3, "edge_saliency");
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * blur_sigma)));
  SaliencyMap s;
  static_cast<ScalarField&>(s) =
      minmax_normalize(gaussian_blur(sobel_edges(img), blur_sigma, radius));
  return s;
}

SaliencyMap load_saliency(const std::string& path, int w, int h) {
  if (w < 2 || h < 2)
    throw InvalidArgumentError("load_saliency: target size must be >= 2x2");
  ScalarField raw;
  if (is_png_file(path)) {
    raw = to_grayscale(load_image(path));
  } else {
    raw = read_fcf_scalar(path);
    const double lo = field_min(raw), hi = field_max(raw);
    if (lo < 0.0 || hi > 1.0) raw = minmax_normalize(raw);
  }
  SaliencyMap s;
  static_cast<ScalarField&>(s) =
      (raw.width == w && raw.height == h) ? std::move(raw)
                                          : resize_bilinear(raw, w, h);
  return s;
}

GradientPair saliency_gradient(const SaliencyMap& s) {
  require_min_size(s, 3, 3, "saliency_gradient");
  return central_gradients(s);
}

}  // namespace flowcomp
