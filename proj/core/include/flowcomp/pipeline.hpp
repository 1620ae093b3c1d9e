#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flowcomp/evalkit.hpp"
#include "flowcomp/gvf.hpp"
#include "flowcomp/saliency.hpp"

namespace flowcomp {

/// Effective configuration for the pipeline commands. JSON config files use
/// the same flat keys as the field names below; unknown keys are rejected
/// and command-line flags override file values.
struct PipelineConfig {
  int grid = 56;       // solver resolution
  int tensor = 224;    // assembled input resolution
  double mu = 0.15;
  double beta = 0.1;
  int iterations = 10;
  std::string edge_source = "intensity";     // intensity | sobel | canny
  std::string saliency = "edge";             // uniform | center | edge | file:<dir>
  double sigma_frac = 0.3;                   // center-bias width
  double blur_sigma = 2.0;                   // edge-saliency blur
  double canny_low = 0.1;
  double canny_high = 0.3;
  int per_anchor = 12;
  std::vector<uint64_t> seeds = {42, 43, 44, 45, 46};
  std::string mode = "cda1";                 // cda1 | cda2
  bool free_classes = false;
  std::string output = "out";

  GvfParams gvf_params() const;
  void validate() const;
};

/// Parses a flat key-value JSON config file. Throws ParseError on malformed
/// JSON or unknown keys.
PipelineConfig load_config(const std::string& path);

/// The effective config as a JSON object string (sorted keys), as echoed
/// into evaluation reports.
std::string config_json(const PipelineConfig& cfg);

/// Loads an image, converts to grayscale and resizes to the solver grid.
GrayImage load_gray_at_grid(const std::string& path, int grid);

/// Builds the saliency map named by cfg.saliency for one image. A
/// "file:<dir>" source looks for <dir>/<id>.png, then <dir>/<id>.fcf.
SaliencyMap make_saliency(const PipelineConfig& cfg, const GrayImage& gray,
                          const std::string& id);

/// Edge force basis honoring the configured Canny thresholds.
GradientPair make_forces(const GrayImage& gray, const PipelineConfig& cfg);

/// Both GVF streams for one image.
struct StreamPair {
  FlowField baseline;
  FlowField enhanced;
};
StreamPair solve_streams(const GrayImage& gray, const SaliencyMap& sal,
                         const PipelineConfig& cfg);

/// Full per-image descriptor: solve both streams and embed.
std::vector<double> image_descriptor(const GrayImage& gray,
                                     const SaliencyMap& sal,
                                     const PipelineConfig& cfg);

/// Runs fn(0..n-1) on a bounded worker pool. The pool size is
/// FLOWCOMP_THREADS when set (minimum 1), otherwise the hardware
/// concurrency. fn must not throw; callers record per-item failures.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

/// Files with a .png/.jpg/.jpeg extension (case-insensitive), sorted by
/// filename.
std::vector<std::string> list_image_files(const std::string& dir);

/// Filename without directory or extension; used as the image id.
std::string image_id(const std::string& path);

}  // namespace flowcomp
