#pragma once

#include <string>

#include "flowcomp/field.hpp"
#include "flowcomp/ops.hpp"

namespace flowcomp {

/// Constant map of 0.5. Only the saliency gradient enters the solver, so
/// any constant works; 0.5 keeps the assembled S channel mid-scale.
SaliencyMap uniform_saliency(int w, int h);

/// Isotropic Gaussian exp(-d^2 / (2 sigma^2)) of the distance d to the
/// image center, sigma = sigma_frac * min(w, h). Peaks at 1 on the center
/// sample when both dimensions are odd.
SaliencyMap center_bias_saliency(int w, int h, double sigma_frac = 0.3);

/// Gaussian-blurred Sobel magnitude (blur_sigma, kernel radius 3*sigma),
/// min-max normalized to [0,1].
SaliencyMap edge_saliency(const GrayImage& img, double blur_sigma = 2.0);

/// Loads an externally computed map from a grayscale PNG (values / 255) or
/// an FCF1 float file (min-max normalized when any value falls outside
/// [0,1]), then bilinearly resizes to (w, h).
SaliencyMap load_saliency(const std::string& path, int w, int h);

/// Central-difference gradient of the saliency values.
GradientPair saliency_gradient(const SaliencyMap& s);

}  // namespace flowcomp
