#pragma once

#include <string>

#include "flowcomp/field.hpp"
#include "flowcomp/gvf.hpp"

namespace flowcomp {

/// Min-max normalized linear grayscale heatmap of a field.
ScalarField render_heatmap(const ScalarField& f);

/// Rasterizes subsampled flow arrows as white segments on black at the
/// flow grid resolution. Anchors are placed every `stride` samples
/// (stride 0 picks roughly 16 arrows across); segments are scaled so the
/// longest arrow spans about 0.9 * stride and each anchor is marked.
ScalarField render_quiver(const FlowField& flow, int stride = 0);

enum class RenderKind { Div, Curl, Mag, Saliency, Quiver };

RenderKind render_kind_from_string(const std::string& name);

}  // namespace flowcomp
