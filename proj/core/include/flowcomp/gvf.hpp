#pragma once

#include <string>

#include "flowcomp/field.hpp"
#include "flowcomp/ops.hpp"

namespace flowcomp {

enum class EdgeSource { Intensity, Sobel, Canny };

EdgeSource edge_source_from_string(const std::string& name);
std::string to_string(EdgeSource source);

struct GvfParams {
  double mu = 0.15;        // smoothness weight
  double beta = 0.1;       // saliency force strength
  int iterations = 10;
  EdgeSource edge_source = EdgeSource::Intensity;

  void validate() const;
};

/// One GVF stream: paired flow components of identical shape.
struct FlowField {
  ScalarField u;
  ScalarField v;
};

/// Channels [S, u, v] at a common resolution, each in [0,1].
struct InputTensor {
  ScalarField saliency;
  ScalarField u;
  ScalarField v;
};

/// External force basis for the solver. Intensity uses the image gradients
/// directly; Sobel and Canny differentiate the respective edge map.
GradientPair edge_force_field(const GrayImage& img, EdgeSource source);

/// Iterative diffusion with Jacobi updates and replicate boundaries:
///   u <- u + mu * lap(u) - (fx^2 + fy^2) * (u - fx)
/// and the v analogue, initialized at (fx, fy) and run for exactly
/// p.iterations steps. Returns the raw, unnormalized field.
FlowField gvf_baseline(const ScalarField& fx, const ScalarField& fy,
                       const GvfParams& p);

/// Baseline updates plus a constant per-iteration force beta * (Sx, Sy)
/// pulling flow toward increasing saliency.
FlowField gvf_saliency(const ScalarField& fx, const ScalarField& fy,
                       const ScalarField& sx, const ScalarField& sy,
                       const GvfParams& p);

/// Discrete energy: mu * sum of squared second differences of u and v
/// (evaluated where the full stencil fits) plus the fidelity term
/// (fx^2+fy^2) * ((u-fx)^2 + (v-fy)^2) over all samples.
double gvf_energy(const FlowField& flow, const ScalarField& fx,
                  const ScalarField& fy, double mu);

/// gvf_energy minus beta * sum(u*Sx + v*Sy); may be negative.
double gvf_energy_saliency(const FlowField& flow, const ScalarField& fx,
                           const ScalarField& fy, const ScalarField& sx,
                           const ScalarField& sy, double mu, double beta);

/// Min-max normalizes u and v independently.
FlowField normalize_flow(const FlowField& flow);

/// Elementwise mean of the two streams.
FlowField average_streams(const FlowField& base, const FlowField& sal);

/// Normalizes the averaged flow, resizes all channels to
/// out_size x out_size, returns [S, u, v].
InputTensor assemble_input(const SaliencyMap& s, const FlowField& avg,
                           int out_size = 224);

}  // namespace flowcomp
