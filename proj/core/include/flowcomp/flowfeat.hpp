#pragma once

#include <array>
#include <string>
#include <vector>

#include "flowcomp/field.hpp"
#include "flowcomp/gvf.hpp"

namespace flowcomp {

/// Differential summaries of one stream at one pooling scale. Derivatives
/// are taken in original-grid units: differences on a field pooled by
/// factor s are divided by the spacing s, so a linear flow keeps the same
/// divergence at every scale.
struct ScaleFeatures {
  int scale = 1;
  ScalarField div;
  ScalarField curl;
  ScalarField mag;
};

/// du/dx + dv/dy, central differences interior, one-sided boundaries.
ScalarField divergence(const FlowField& flow);

/// dv/dx - du/dy.
ScalarField curl(const FlowField& flow);

/// Elementwise sqrt(u^2 + v^2).
ScalarField magnitude(const FlowField& flow);

inline constexpr std::array<int, 3> kFeatureScales = {1, 2, 4};

/// Pools u and v by each factor in kFeatureScales, then differentiates on
/// the pooled grid (see ScaleFeatures for the spacing convention).
std::array<ScaleFeatures, 3> multiscale_features(const FlowField& flow);

/// The 12 scale-1 statistical summaries, ordered
/// [div, curl, mag] x [mean, population std, positive ratio, negative ratio].
/// Ratios count strictly positive / strictly negative samples.
struct FlowStats {
  double div_mean = 0, div_std = 0, div_pos = 0, div_neg = 0;
  double curl_mean = 0, curl_std = 0, curl_pos = 0, curl_neg = 0;
  double mag_mean = 0, mag_std = 0, mag_pos = 0, mag_neg = 0;

  std::array<double, 12> to_array() const {
    return {div_mean,  div_std,  div_pos,  div_neg,  curl_mean, curl_std,
            curl_pos,  curl_neg, mag_mean, mag_std,  mag_pos,   mag_neg};
  }
};

FlowStats flow_statistics(const FlowField& flow);

inline constexpr int kDescriptorGrid = 4;
inline constexpr int kDescriptorLength = 600;

/// Deterministic embedding of a (baseline, saliency-enhanced) stream pair.
/// Layout, fixed: [stream: base, sal] where each stream contributes
/// [scale 1, 2, 4] x [4x4 grid cells row-major] x [div, curl, mag] x
/// [mean, std] (288 values) followed by its 12 FlowStats entries.
std::vector<double> descriptor(const FlowField& base, const FlowField& sal);

/// Shortest decimal string that round-trips the value.
std::string format_double(double v);

/// One row per descriptor: "id,v1,...,v600" with shortest round-trip
/// formatting. Rows are written in the given order.
void write_descriptor_csv(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows,
    const std::string& path);

}  // namespace flowcomp
