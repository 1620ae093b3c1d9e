#include "flowcomp/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flowcomp/errors.hpp"

namespace flowcomp {

ScalarField::ScalarField(int w, int h, double fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
  if (w < 1 || h < 1)
    throw InvalidArgumentError("ScalarField dimensions must be positive");
}

ScalarField::ScalarField(int w, int h, std::vector<double> values)
    : width(w), height(h), data(std::move(values)) {
  if (w < 1 || h < 1)
    throw InvalidArgumentError("ScalarField dimensions must be positive");
  if (data.size() != static_cast<size_t>(w) * h)
    throw InvalidArgumentError("ScalarField data size does not match shape");
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.data.begin(), f.data.end(),
                     [](double v) { return std::isfinite(v); });
}

double field_min(const ScalarField& f) {
  return *std::min_element(f.data.begin(), f.data.end());
}

double field_max(const ScalarField& f) {
  return *std::max_element(f.data.begin(), f.data.end());
}

double field_mean(const ScalarField& f) {
  return std::accumulate(f.data.begin(), f.data.end(), 0.0) /
         static_cast<double>(f.data.size());
}

ScalarField flip_horizontal(const ScalarField& f) {
  ScalarField out(f.width, f.height);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      out.at(x, y) = f.at(f.width - 1 - x, y);
  return out;
}

ScalarField flip_vertical(const ScalarField& f) {
  ScalarField out(f.width, f.height);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      out.at(x, y) = f.at(x, f.height - 1 - y);
  return out;
}

void require_min_size(const ScalarField& f, int min_w, int min_h,
                      const char* what) {
  if (f.width < min_w || f.height < min_h)
    throw InvalidArgumentError(std::string(what) + ": field " +
                               std::to_string(f.width) + "x" +
                               std::to_string(f.height) + " is below minimum " +
                               std::to_string(min_w) + "x" +
                               std::to_string(min_h));
}

void require_same_shape(const ScalarField& a, const ScalarField& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw InvalidArgumentError(std::string(what) + ": shape mismatch " +
                               std::to_string(a.width) + "x" +
                               std::to_string(a.height) + " vs " +
                               std::to_string(b.width) + "x" +
                               std::to_string(b.height));
}

}  // namespace flowcomp
