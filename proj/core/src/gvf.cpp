#include "flowcomp/gvf.hpp"

#include <cmath>
#include <utility>

#include "flowcomp/errors.hpp"

namespace flowcomp {

EdgeSource edge_source_from_string(const std::string& name) {
  if (name == "intensity") return EdgeSource::Intensity;
  if (name == "sobel") return EdgeSource::Sobel;
  if (name == "canny") return EdgeSource::Canny;
  throw InvalidArgumentError("unknown edge source: " + name);
}

std::string to_string(EdgeSource source) {
  switch (source) {
    case EdgeSource::Intensity: return "intensity";
    case EdgeSource::Sobel: return "sobel";
    case EdgeSource::Canny: return "canny";
  }
  throw InvalidArgumentError("invalid edge source value");
}

void GvfParams::validate() const {
  if (!(mu > 0.0)) throw InvalidArgumentError("GvfParams: mu must be > 0");
  if (beta < 0.0) throw InvalidArgumentError("GvfParams: beta must be >= 0");
  if (iterations < 1)
    throw InvalidArgumentError("GvfParams: iterations must be >= 1");
}

GradientPair edge_force_field(const GrayImage& img, EdgeSource source) {
  require_min_size(img, 3, 3, "edge_force_field");
  switch (source) {
    case EdgeSource::Intensity:
      return central_gradients(img);
    case EdgeSource::Sobel:
      return central_gradients(sobel_edges(img));
    case EdgeSource::Canny:
      return central_gradients(canny_edges(img));
  }
  throw InvalidArgumentError("invalid edge source value");
}

namespace {

void check_solver_inputs(const ScalarField& fx, const ScalarField& fy,
                         const GvfParams& p) {
  p.validate();
  require_same_shape(fx, fy, "gvf");
  require_min_size(fx, 3, 3, "gvf");
  if (!all_finite(fx) || !all_finite(fy))
    throw InvalidArgumentError("gvf: non-finite force field");
}

// Shared diffusion loop; sx/sy are null for the baseline stream.
FlowField solve(const ScalarField& fx, const ScalarField& fy,
                const ScalarField* sx, const ScalarField* sy,
                const GvfParams& p) {
  const int w = fx.width, h = fx.height;
  ScalarField weight(w, h);
  for (size_t i = 0; i < weight.data.size(); ++i)
    weight.data[i] = fx.data[i] * fx.data[i] + fy.data[i] * fy.data[i];

  ScalarField u = fx, v = fy;
  for (int t = 0; t < p.iterations; ++t) {
    const ScalarField lap_u = laplacian(u);
    const ScalarField lap_v = laplacian(v);
    ScalarField next_u(w, h), next_v(w, h);
    for (size_t i = 0; i < next_u.data.size(); ++i) {
      double du = u.data[i] + p.mu * lap_u.data[i] -
                  weight.data[i] * (u.data[i] - fx.data[i]);
      double dv = v.data[i] + p.mu * lap_v.data[i] -
                  weight.data[i] * (v.data[i] - fy.data[i]);
      if (sx) du += p.beta * sx->data[i];
      if (sy) dv += p.beta * sy->data[i];
      next_u.data[i] = du;
      next_v.data[i] = dv;
    }
    u = std::move(next_u);
    v = std::move(next_v);
  }
  return {std::move(u), std::move(v)};
}

// Squared second differences along each axis, summed where the full
// three-sample stencil fits. Zero for affine fields.
double smoothness_sum(const ScalarField& f) {
  double acc = 0.0;
  for (int y = 0; y < f.height; ++y)
    for (int x = 1; x < f.width - 1; ++x) {
      const double d = f.at(x - 1, y) - 2.0 * f.at(x, y) + f.at(x + 1, y);
      acc += d * d;
    }
  for (int x = 0; x < f.width; ++x)
    for (int y = 1; y < f.height - 1; ++y) {
      const double d = f.at(x, y - 1) - 2.0 * f.at(x, y) + f.at(x, y + 1);
      acc += d * d;
    }
  return acc;
}

}  // namespace

FlowField gvf_baseline(const ScalarField& fx, const ScalarField& fy,
                       const GvfParams& p) {
  check_solver_inputs(fx, fy, p);
  return solve(fx, fy, nullptr, nullptr, p);
}

FlowField gvf_saliency(const ScalarField& fx, const ScalarField& fy,
                       const ScalarField& sx, const ScalarField& sy,
                       const GvfParams& p) {
  check_solver_inputs(fx, fy, p);
  require_same_shape(fx, sx, "gvf_saliency");
  require_same_shape(fx, sy, "gvf_saliency");
  if (!all_finite(sx) || !all_finite(sy))
    throw InvalidArgumentError("gvf_saliency: non-finite saliency gradient");
  return solve(fx, fy, &sx, &sy, p);
}

double gvf_energy(const FlowField& flow, const ScalarField& fx,
                  const ScalarField& fy, double mu) {
  require_same_shape(flow.u, flow.v, "gvf_energy");
  require_same_shape(flow.u, fx, "gvf_energy");
  require_same_shape(flow.u, fy, "gvf_energy");
  double fidelity = 0.0;
  for (size_t i = 0; i < flow.u.data.size(); ++i) {
    const double w = fx.data[i] * fx.data[i] + fy.data[i] * fy.data[i];
    const double ru = flow.u.data[i] - fx.data[i];
    const double rv = flow.v.data[i] - fy.data[i];
    fidelity += w * (ru * ru + rv * rv);
  }
  return mu * (smoothness_sum(flow.u) + smoothness_sum(flow.v)) + fidelity;
}

double gvf_energy_saliency(const FlowField& flow, const ScalarField& fx,
                           const ScalarField& fy, const ScalarField& sx,
                           const ScalarField& sy, double mu, double beta) {
  require_same_shape(flow.u, sx, "gvf_energy_saliency");
  require_same_shape(flow.u, sy, "gvf_energy_saliency");
  double attraction = 0.0;
  for (size_t i = 0; i < flow.u.data.size(); ++i)
    attraction += flow.u.data[i] * sx.data[i] + flow.v.data[i] * sy.data[i];
  return gvf_energy(flow, fx, fy, mu) - beta * attraction;
}

FlowField normalize_flow(const FlowField& flow) {
  require_same_shape(flow.u, flow.v, "normalize_flow");
  return {minmax_normalize(flow.u), minmax_normalize(flow.v)};
}

FlowField average_streams(const FlowField& base, const FlowField& sal) {
  require_same_shape(base.u, sal.u, "average_streams");
  require_same_shape(base.v, sal.v, "average_streams");
  FlowField out{ScalarField(base.u.width, base.u.height),
                ScalarField(base.v.width, base.v.height)};
  for (size_t i = 0; i < out.u.data.size(); ++i) {
    out.u.data[i] = 0.5 * (base.u.data[i] + sal.u.data[i]);
    out.v.data[i] = 0.5 * (base.v.data[i] + sal.v.data[i]);
  }
  return out;
}

InputTensor assemble_input(const SaliencyMap& s, const FlowField& avg,
                           int out_size) {
  if (out_size < 2)
    throw InvalidArgumentError("assemble_input: out_size must be >= 2");
  const FlowField norm = normalize_flow(avg);
  auto fit = [out_size](const ScalarField& f) {
    return (f.width == out_size && f.height == out_size)
               ? f
               : resize_bilinear(f, out_size, out_size);
  };
  return {fit(s), fit(norm.u), fit(norm.v)};
}

}  // namespace flowcomp
