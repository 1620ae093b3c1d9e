#include "flowcomp/render.hpp"

#include <algorithm>
#include <cmath>

#include "flowcomp/errors.hpp"
#include "flowcomp/ops.hpp"

namespace flowcomp {

namespace {

void draw_segment(ScalarField& canvas, double x0, double y0, double x1,
                  double y1) {
  const int steps =
      std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0),
                                                      std::abs(y1 - y0)))));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
    const int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
    if (x >= 0 && x < canvas.width && y >= 0 && y < canvas.height)
      canvas.at(x, y) = 1.0;
  }
}

}  // namespace

ScalarField render_heatmap(const ScalarField& f) { return minmax_normalize(f); }

ScalarField render_quiver(const FlowField& flow, int stride) {
  require_same_shape(flow.u, flow.v, "render_quiver");
  const int w = flow.u.width, h = flow.u.height;
  if (stride <= 0) stride = std::max(1, std::min(w, h) / 16);

  double max_len = 0.0;
  for (size_t i = 0; i < flow.u.data.size(); ++i)
    max_len = std::max(max_len, std::hypot(flow.u.data[i], flow.v.data[i]));
  const double scale = max_len > 0.0 ? 0.9 * stride / max_len : 0.0;

  ScalarField canvas(w, h, 0.0);
  for (int y = stride / 2; y < h; y += stride)
    for (int x = stride / 2; x < w; x += stride) {
      canvas.at(x, y) = 1.0;  // anchor mark
      const double du = flow.u.at(x, y) * scale;
      const double dv = flow.v.at(x, y) * scale;
      if (du != 0.0 || dv != 0.0) draw_segment(canvas, x, y, x + du, y + dv);
    }
  return canvas;
}

RenderKind render_kind_from_string(const std::string& name) {
  if (name == "div") return RenderKind::Div;
  if (name == "curl") return RenderKind::Curl;
  if (name == "mag") return RenderKind::Mag;
  if (name == "saliency") return RenderKind::Saliency;
  if (name == "quiver") return RenderKind::Quiver;
  throw InvalidArgumentError("unknown render kind: " + name);
}

}  // namespace flowcomp
