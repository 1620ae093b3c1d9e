#pragma once

#include <vector>

namespace flowcomp {

/// A dense H x W grid of doubles, stored row-major. The x axis runs along
/// columns (width), the y axis along rows (height).
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0.0);
  ScalarField(int w, int h, std::vector<double> values);

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }

  size_t size() const { return data.size(); }
  bool same_shape(const ScalarField& other) const {
    return width == other.width && height == other.height;
  }
};

/// Grayscale image; values lie in [0,1].
struct GrayImage : ScalarField {};

/// Attention distribution; values lie in [0,1].
struct SaliencyMap : ScalarField {};

bool all_finite(const ScalarField& f);
double field_min(const ScalarField& f);
double field_max(const ScalarField& f);
double field_mean(const ScalarField& f);

/// Mirror columns: out(x,y) = f(width-1-x, y).
ScalarField flip_horizontal(const ScalarField& f);
/// Mirror rows: out(x,y) = f(x, height-1-y).
ScalarField flip_vertical(const ScalarField& f);

/// Throws InvalidArgumentError unless the field is at least min_w x min_h.
void require_min_size(const ScalarField& f, int min_w, int min_h,
                      const char* what);
/// Throws InvalidArgumentError unless both fields share the same shape.
void require_same_shape(const ScalarField& a, const ScalarField& b,
                        const char* what);

}  // namespace flowcomp
