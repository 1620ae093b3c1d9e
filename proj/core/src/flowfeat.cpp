#include "flowcomp/flowfeat.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "flowcomp/errors.hpp"
#include "flowcomp/ops.hpp"

namespace flowcomp {

namespace {

// d/dx with central differences, one-sided at the boundary columns, all
// scaled for grid spacing h.
ScalarField ddx(const ScalarField& f, double h) {
  ScalarField out(f.width, f.height);
  const double inv2h = 1.0 / (2.0 * h), invh = 1.0 / h;
  for (int y = 0; y < f.height; ++y) {
    out.at(0, y) = (f.at(1, y) - f.at(0, y)) * invh;
    for (int x = 1; x < f.width - 1; ++x)
      out.at(x, y) = (f.at(x + 1, y) - f.at(x - 1, y)) * inv2h;
    out.at(f.width - 1, y) = (f.at(f.width - 1, y) - f.at(f.width - 2, y)) * invh;
  }
  return out;
}

ScalarField ddy(const ScalarField& f, double h) {
  ScalarField out(f.width, f.height);
  const double inv2h = 1.0 / (2.0 * h), invh = 1.0 / h;
  for (int x = 0; x < f.width; ++x) {
    out.at(x, 0) = (f.at(x, 1) - f.at(x, 0)) * invh;
    for (int y = 1; y < f.height - 1; ++y)
      out.at(x, y) = (f.at(x, y + 1) - f.at(x, y - 1)) * inv2h;
    out.at(x, f.height - 1) = (f.at(x, f.height - 1) - f.at(x, f.height - 2)) * invh;
  }
  return out;
}

ScalarField divergence_spaced(const FlowField& flow, double h) {
  const ScalarField ux = ddx(flow.u, h);
  const ScalarField vy = ddy(flow.v, h);
  ScalarField out(ux.width, ux.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = ux.data[i] + vy.data[i];
  return out;
}

ScalarField curl_spaced(const FlowField& flow, double h) {
  const ScalarField vx = ddx(flow.v, h);
  const ScalarField uy = ddy(flow.u, h);
  ScalarField out(vx.width, vx.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = vx.data[i] - uy.data[i];
  return out;
}

void check_flow(const FlowField& flow, const char* what) {
  require_same_shape(flow.u, flow.v, what);
  require_min_size(flow.u, 3, 3, what);
}

struct Moments {
  double mean = 0;
  double stddev = 0;  // population
  double pos_ratio = 0;
  double neg_ratio = 0;
};

Moments moments_of(const double* begin, const double* end) {
  Moments m;
  const double n = static_cast<double>(end - begin);
  double sum = 0;
  for (const double* p = begin; p != end; ++p) sum += *p;
  m.mean = sum / n;
  double sq = 0;
  size_t pos = 0, neg = 0;
  for (const double* p = begin; p != end; ++p) {
    const double d = *p - m.mean;
    sq += d * d;
    if (*p > 0) ++pos;
    if (*p < 0) ++neg;
  }
  m.stddev = std::sqrt(sq / n);
  m.pos_ratio = pos / n;
  m.neg_ratio = neg / n;
  return m;
}

Moments cell_moments(const ScalarField& f, int x0, int x1, int y0, int y1) {
  std::vector<double> cell;
  cell.reserve(static_cast<size_t>(x1 - x0) * (y1 - y0));
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) cell.push_back(f.at(x, y));
  return moments_of(cell.data(), cell.data() + cell.size());
}

// 288 grid values + 12 stats per stream.
void append_stream_features(const FlowField& flow, std::vector<double>& out) {
  const std::array<ScaleFeatures, 3> scales = multiscale_features(flow);
  for (const ScaleFeatures& sf : scales) {
    const int w = sf.div.width, h = sf.div.height;
    for (int gy = 0; gy < kDescriptorGrid; ++gy)
      for (int gx = 0; gx < kDescriptorGrid; ++gx) {
        const int x0 = gx * w / kDescriptorGrid;
        const int x1 = (gx + 1) * w / kDescriptorGrid;
        const int y0 = gy * h / kDescriptorGrid;
        const int y1 = (gy + 1) * h / kDescriptorGrid;
        for (const ScalarField* f : {&sf.div, &sf.curl, &sf.mag}) {
          const Moments m = cell_moments(*f, x0, x1, y0, y1);
          out.push_back(m.mean);
          out.push_back(m.stddev);
        }
      }
  }
  for (double v : flow_statistics(flow).to_array()) out.push_back(v);
}

}  // namespace

ScalarField divergence(const FlowField& flow) {
  check_flow(flow, "divergence");
  return divergence_spaced(flow, 1.0);
}

ScalarField curl(const FlowField& flow) {
  check_flow(flow, "curl");
  return curl_spaced(flow, 1.0);
}

ScalarField magnitude(const FlowField& flow) {
  require_same_shape(flow.u, flow.v, "magnitude");
  ScalarField out(flow.u.width, flow.u.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::hypot(flow.u.data[i], flow.v.data[i]);
  return out;
}

std::array<ScaleFeatures, 3> multiscale_features(const FlowField& flow) {
  check_flow(flow, "multiscale_features");
  if (flow.u.width % 4 != 0 || flow.u.height % 4 != 0)
    throw InvalidArgumentError(
        "multiscale_features: dimensions must be divisible by 4");
  std::array<ScaleFeatures, 3> out;
  for (size_t k = 0; k < kFeatureScales.size(); ++k) {
    const int s = kFeatureScales[k];
    const FlowField pooled{avg_pool(flow.u, s), avg_pool(flow.v, s)};
    const double h = static_cast<double>(s);
    out[k].scale = s;
    out[k].div = divergence_spaced(pooled, h);
    out[k].curl = curl_spaced(pooled, h);
    out[k].mag = magnitude(pooled);
  }
  return out;
}

FlowStats flow_statistics(const FlowField& flow) {
  check_flow(flow, "flow_statistics");
  const ScalarField d = divergence(flow);
  const ScalarField c = curl(flow);
  const ScalarField m = magnitude(flow);
  FlowStats st;
  const Moments md = moments_of(d.data.data(), d.data.data() + d.data.size());
  const Moments mc = moments_of(c.data.data(), c.data.data() + c.data.size());
  const Moments mm = moments_of(m.data.data(), m.data.data() + m.data.size());
  st.div_mean = md.mean;  st.div_std = md.stddev;
  st.div_pos = md.pos_ratio;  st.div_neg = md.neg_ratio;
  st.curl_mean = mc.mean;  st.curl_std = mc.stddev;
  st.curl_pos = mc.pos_ratio;  st.curl_neg = mc.neg_ratio;
  st.mag_mean = mm.mean;  st.mag_std = mm.stddev;
  st.mag_pos = mm.pos_ratio;  st.mag_neg = mm.neg_ratio;
  return st;
}

std::vector<double> descriptor(const FlowField& base, const FlowField& sal) {
  require_same_shape(base.u, sal.u, "descriptor");
  require_same_shape(base.v, sal.v, "descriptor");
  // The coarsest pooled field must still cover the 4x4 cell grid.
  const int min_side = kFeatureScales.back() * kDescriptorGrid;
  require_min_size(base.u, min_side, min_side, "descriptor");
  std::vector<double> out;
  out.reserve(kDescriptorLength);
  append_stream_features(base, out);
  append_stream_features(sal, out);
  if (out.size() != kDescriptorLength)
    throw Error("descriptor: unexpected length " + std::to_string(out.size()));
  return out;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_descriptor_csv(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows,
    const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  for (const auto& [id, vec] : rows) {
    out << id;
    for (double v : vec) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw Error("short write: " + path);
}

}  // namespace flowcomp
