#pragma once

#include <string>

#include "flowcomp/pipeline.hpp"

namespace flowcomp {

/// Pipeline commands behind the CLI. Each returns a process exit status:
/// 0 only when no per-item failure occurred. Corpus commands run on a
/// bounded worker pool (FLOWCOMP_THREADS) and produce output that is
/// byte-identical regardless of worker count; files are written atomically
/// (temp file + rename).

/// One saliency map per image in input_dir, written to output_dir as
/// <id>.png or <id>.fcf depending on `format` ("png" | "fcf").
int cmd_saliency(const std::string& input_dir, const PipelineConfig& cfg,
                 const std::string& output_dir, const std::string& format);

/// Solves both streams for one image and writes <id>_baseline.fcf,
/// <id>_enhanced.fcf, <id>_average.fcf (2-channel flow files) and
/// <id>_tensor.fcf (3-channel [S,u,v]). Prints stream energies at
/// iteration 0 and after the final iteration. A nonempty
/// saliency_map_path overrides cfg.saliency with a single explicit file.
int cmd_gvf(const std::string& image_path, const PipelineConfig& cfg,
            const std::string& output_dir,
            const std::string& saliency_map_path = "");

/// Descriptor CSV (id + 600 values per row, id-sorted) for every image in
/// image_dir. When labels_path is nonempty only labeled images are
/// embedded.
int cmd_embed(const std::string& image_dir, const std::string& labels_path,
              const PipelineConfig& cfg, const std::string& output_csv);

/// CDA report plus DBI/Silhouette over an embedding CSV and label TSV;
/// prints a summary and writes the JSON report (schema in README).
int cmd_eval(const std::string& embeddings_path, const std::string& labels_path,
             const PipelineConfig& cfg, const std::string& output_json);

/// Renders a heatmap or quiver PNG. Flow kinds (div, curl, mag, quiver)
/// read a 2-channel flow file; kind saliency reads a PNG or FCF1 scalar.
int cmd_render(const std::string& input_path, const std::string& kind,
               const PipelineConfig& cfg, const std::string& output_png);

/// Parameter sweep: the 3x3 {mu} x {iterations} grid plus one cell per
/// edge source at mu=0.15, 10 iterations. Each cell embeds the corpus and
/// writes ablate_<cell>.json (plus the descriptor CSV) into output_dir.
int cmd_ablate(const std::string& image_dir, const std::string& labels_path,
               const PipelineConfig& cfg, const std::string& output_dir);

}  // namespace flowcomp
