#pragma once

#include <utility>

#include "flowcomp/field.hpp"

namespace flowcomp {

/// Gradient pair (d/dx, d/dy) of a scalar grid.
struct GradientPair {
  ScalarField fx;
  ScalarField fy;
};

/// Bilinear resampling with half-pixel sample centers:
/// src = (dst + 0.5) * in/out - 0.5, clamped to the valid range. Output
/// values stay within [min(input), max(input)]; a size-preserving call is
/// the identity.
ScalarField resize_bilinear(const ScalarField& f, int out_w, int out_h);
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);

/// Central differences (f[i+1]-f[i-1])/2 at interior samples, one-sided
/// differences on the boundary rows/columns. Exact for affine grids.
GradientPair central_gradients(const ScalarField& f);

/// 5-point Laplacian with replicate (zero-flux) boundary handling:
/// out-of-range neighbors clamp to the nearest sample.
ScalarField laplacian(const ScalarField& f);

/// Isotropic Gaussian blur with a (2*radius+1)^2 sampled kernel normalized
/// to unit sum; replicate borders.
ScalarField gaussian_blur(const ScalarField& f, double sigma, int radius);

/// Raw 3x3 Sobel responses. Evaluated at interior samples; the one-pixel
/// border ring copies the nearest interior value, so constant-gradient
/// inputs produce constant responses.
GradientPair sobel_gradients(const ScalarField& f);

/// Sobel gradient magnitude sqrt(gx^2+gy^2), min-max normalized to [0,1].
ScalarField sobel_edges(const GrayImage& img);

/// Binary {0,1} Canny edge map. Pipeline: Gaussian blur (sigma 1.4, 5x5),
/// Sobel gradients, non-maximum suppression with the gradient direction
/// quantized to 4 bins, double threshold at (low_frac, high_frac) times the
/// maximum magnitude, hysteresis by 8-connected flood fill from strong
/// edges. Requires 0 < low_frac < high_frac <= 1.
ScalarField canny_edges(const GrayImage& img, double low_frac = 0.1,
                        double high_frac = 0.3);

/// Block mean pooling; factor must divide both dimensions. Factor 1 is the
/// identity.
ScalarField avg_pool(const ScalarField& f, int factor);

/// (v - min) / (max - min). A constant field maps to all zeros.
ScalarField minmax_normalize(const ScalarField& f);

}  // namespace flowcomp
