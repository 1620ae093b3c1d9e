#include "flowcomp/ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "flowcomp/errors.hpp"

namespace flowcomp {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

ScalarField resize_bilinear(const ScalarField& f, int out_w, int out_h) {
  if (out_w < 2 || out_h < 2)
    throw InvalidArgumentError("resize_bilinear: target size must be >= 2x2");
  ScalarField out(out_w, out_h);
  const double sx = static_cast<double>(f.width) / out_w;
  const double sy = static_cast<double>(f.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double src_y = (y + 0.5) * sy - 0.5;
    src_y = std::clamp(src_y, 0.0, static_cast<double>(f.height - 1));
    const int y0 = static_cast<int>(std::floor(src_y));
    const int y1 = std::min(y0 + 1, f.height - 1);
    const double wy = src_y - y0;
    for (int x = 0; x < out_w; ++x) {
      double src_x = (x + 0.5) * sx - 0.5;
      src_x = std::clamp(src_x, 0.0, static_cast<double>(f.width - 1));
      const int x0 = static_cast<int>(std::floor(src_x));
      const int x1 = std::min(x0 + 1, f.width - 1);
      const double wx = src_x - x0;
      const double top = f.at(x0, y0) * (1.0 - wx) + f.at(x1, y0) * wx;
      const double bot = f.at(x0, y1) * (1.0 - wx) + f.at(x1, y1) * wx;
      out.at(x, y) = top * (1.0 - wy) + bot * wy;
    }
  }
  return out;
}

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
  GrayImage out;
  static_cast<ScalarField&>(out) = resize_bilinear(static_cast<const ScalarField&>(img), out_w, out_h);
  return out;
}

GradientPair central_gradients(const ScalarField& f) {
  require_min_size(f, 3, 3, "central_gradients");
  ScalarField fx(f.width, f.height), fy(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    fx.at(0, y) = f.at(1, y) - f.at(0, y);
    for (int x = 1; x < f.width - 1; ++x)
      fx.at(x, y) = (f.at(x + 1, y) - f.at(x - 1, y)) * 0.5;
    fx.at(f.width - 1, y) = f.at(f.width - 1, y) - f.at(f.width - 2, y);
  }
  for (int x = 0; x < f.width; ++x) {
    fy.at(x, 0) = f.at(x, 1) - f.at(x, 0);
    for (int y = 1; y < f.height - 1; ++y)
      fy.at(x, y) = (f.at(x, y + 1) - f.at(x, y - 1)) * 0.5;
    fy.at(x, f.height - 1) = f.at(x, f.height - 1) - f.at(x, f.height - 2);
  }
  return {std::move(fx), std::move(fy)};
}

ScalarField laplacian(const ScalarField& f) {
  require_min_size(f, 3, 3, "laplacian");
  ScalarField out(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    const int yu = clampi(y - 1, 0, f.height - 1);
    const int yd = clampi(y + 1, 0, f.height - 1);
    for (int x = 0; x < f.width; ++x) {
      const int xl = clampi(x - 1, 0, f.width - 1);
      const int xr = clampi(x + 1, 0, f.width - 1);
      out.at(x, y) = f.at(xl, y) + f.at(xr, y) + f.at(x, yu) + f.at(x, yd) -
                     4.0 * f.at(x, y);
    }
  }
  return out;
}

ScalarField gaussian_blur(const ScalarField& f, double sigma, int radius) {
  if (sigma <= 0.0 || radius < 1)
    throw InvalidArgumentError("gaussian_blur: sigma must be > 0, radius >= 1");
  const int k = 2 * radius + 1;
  std::vector<double> kernel(static_cast<size_t>(k) * k);
  double sum = 0.0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      kernel[static_cast<size_t>(dy + radius) * k + (dx + radius)] = w;
      sum += w;
    }
  for (double& w : kernel) w /= sum;

  ScalarField out(f.width, f.height);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      double acc = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = clampi(y + dy, 0, f.height - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          const int sx = clampi(x + dx, 0, f.width - 1);
          acc += kernel[static_cast<size_t>(dy + radius) * k + (dx + radius)] *
                 f.at(sx, sy);
        }
      }
      out.at(x, y) = acc;
    }
  return out;
}

GradientPair sobel_gradients(const ScalarField& f) {
  require_min_size(f, 3, 3, "sobel_gradients");
  ScalarField gx(f.width, f.height), gy(f.width, f.height);
  for (int y = 1; y < f.height - 1; ++y)
    for (int x = 1; x < f.width - 1; ++x) {
      gx.at(x, y) = (f.at(x + 1, y - 1) + 2.0 * f.at(x + 1, y) + f.at(x + 1, y + 1)) -
                    (f.at(x - 1, y - 1) + 2.0 * f.at(x - 1, y) + f.at(x - 1, y + 1));
      gy.at(x, y) = (f.at(x - 1, y + 1) + 2.0 * f.at(x, y + 1) + f.at(x + 1, y + 1)) -
                    (f.at(x - 1, y - 1) + 2.0 * f.at(x, y - 1) + f.at(x + 1, y - 1));
    }
  // Border ring copies the nearest interior response.
  for (ScalarField* g : {&gx, &gy}) {
    for (int x = 0; x < f.width; ++x) {
      const int xi = clampi(x, 1, f.width - 2);
      g->at(x, 0) = g->at(xi, 1);
      g->at(x, f.height - 1) = g->at(xi, f.height - 2);
    }
    for (int y = 1; y < f.height - 1; ++y) {
      g->at(0, y) = g->at(1, y);
      g->at(f.width - 1, y) = g->at(f.width - 2, y);
    }
  }
  return {std::move(gx), std::move(gy)};
}

ScalarField sobel_edges(const GrayImage& img) {
  const GradientPair g = sobel_gradients(img);
  ScalarField mag(img.width, img.height);
  for (size_t i = 0; i < mag.data.size(); ++i)
    mag.data[i] = std::hypot(g.fx.data[i], g.fy.data[i]);
  return minmax_normalize(mag);
}

ScalarField canny_edges(const GrayImage& img, double low_frac, double high_frac) {
  if (!(low_frac > 0.0 && low_frac < high_frac && high_frac <= 1.0))
    throw InvalidArgumentError("canny_edges: need 0 < low_frac < high_frac <= 1");
  require_min_size(img, 3, 3, "canny_edges");

  const ScalarField smoothed = gaussian_blur(img, 1.4, 2);
  const GradientPair g = sobel_gradients(smoothed);

  const int w = img.width, h = img.height;
  ScalarField mag(w, h);
  for (size_t i = 0; i < mag.data.size(); ++i)
    mag.data[i] = std::hypot(g.fx.data[i], g.fy.data[i]);
  const double max_mag = field_max(mag);
  if (max_mag <= 0.0) return ScalarField(w, h, 0.0);

  // Direction bins 0/45/90/135 degrees and their sample offsets.
  static constexpr int kOffX[4] = {1, 1, 0, -1};
  static constexpr int kOffY[4] = {0, 1, 1, 1};
  ScalarField nms(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(x, y);
      if (m <= 0.0) continue;
      double angle = std::atan2(g.fy.at(x, y), g.fx.at(x, y)) * 180.0 / M_PI;
      if (angle < 0.0) angle += 180.0;
      int bin;
      if (angle < 22.5 || angle >= 157.5)
        bin = 0;
      else if (angle < 67.5)
        bin = 1;
      else if (angle < 112.5)
        bin = 2;
      else
        bin = 3;
      const int xb = x - kOffX[bin], yb = y - kOffY[bin];
      const int xf = x + kOffX[bin], yf = y + kOffY[bin];
      const double back = (xb >= 0 && xb < w && yb >= 0 && yb < h) ? mag.at(xb, yb) : 0.0;
      const double fwd = (xf >= 0 && xf < w && yf >= 0 && yf < h) ? mag.at(xf, yf) : 0.0;
      // Strict on the backward neighbor so plateaus keep a single sample.
      if (m > back && m >= fwd) nms.at(x, y) = m;
    }

  const double high = high_frac * max_mag;
  const double low = low_frac * max_mag;
  ScalarField out(w, h, 0.0);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (nms.at(x, y) >= high) {
        out.at(x, y) = 1.0;
        queue.emplace_back(x, y);
      }
  while (!queue.empty()) {
    const auto [cx, cy] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        if (out.at(nx, ny) != 0.0) continue;
        if (nms.at(nx, ny) >= low) {
          out.at(nx, ny) = 1.0;
          queue.emplace_back(nx, ny);
        }
      }
  }
  return out;
}

ScalarField avg_pool(const ScalarField& f, int factor) {
  if (factor < 1) throw InvalidArgumentError("avg_pool: factor must be >= 1");
  if (f.width % factor != 0 || f.height % factor != 0)
    throw InvalidArgumentError("avg_pool: factor " + std::to_string(factor) +
                               " does not divide " + std::to_string(f.width) +
                               "x" + std::to_string(f.height));
  if (factor == 1) return f;
  ScalarField out(f.width / factor, f.height / factor);
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double acc = 0.0;
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx)
          acc += f.at(x * factor + dx, y * factor + dy);
      out.at(x, y) = acc * inv;
    }
  return out;
}

ScalarField minmax_normalize(const ScalarField& f) {
  const double lo = field_min(f);
  const double hi = field_max(f);
  ScalarField out(f.width, f.height);
  if (hi <= lo) return out;  // constant field maps to zeros
  const double inv = 1.0 / (hi - lo);
  for (size_t i = 0; i < f.data.size(); ++i)
    out.data[i] = (f.data[i] - lo) * inv;
  return out;
}

}  // namespace flowcomp
