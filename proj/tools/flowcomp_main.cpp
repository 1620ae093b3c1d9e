// flowcomp: dual-stream gradient vector flow fields, flow descriptors and
// composition embedding evaluation. See README.md for formats and examples.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "flowcomp/commands.hpp"
#include "flowcomp/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  flowcomp::PipelineConfig cfg;
};

// Config file first, then explicit flags on top.
void add_config_flags(CLI::App* app, CommonOpts& opts) {
  app->add_option("--config", opts.config_path,
                  "JSON config file (flags override file values)")
      ->check(CLI::ExistingFile);
  app->add_option("--grid", opts.cfg.grid, "solver grid size");
  app->add_option("--tensor", opts.cfg.tensor, "assembled tensor size");
  app->add_option("--mu", opts.cfg.mu, "smoothness weight");
  app->add_option("--beta", opts.cfg.beta, "saliency force strength");
  app->add_option("--iterations", opts.cfg.iterations, "diffusion iterations");
  app->add_option("--edge-source", opts.cfg.edge_source,
                  "force basis: intensity | sobel | canny");
  app->add_option("--saliency", opts.cfg.saliency,
                  "saliency source: uniform | center | edge | file:<dir>");
  app->add_option("--sigma-frac", opts.cfg.sigma_frac,
                  "center-bias sigma as fraction of min dimension");
  app->add_option("--blur-sigma", opts.cfg.blur_sigma,
                  "edge-saliency blur sigma");
  app->add_option("--canny-low", opts.cfg.canny_low, "Canny low threshold");
  app->add_option("--canny-high", opts.cfg.canny_high, "Canny high threshold");
  app->add_option("--per-anchor", opts.cfg.per_anchor, "triplets per anchor");
  app->add_option("--seeds", opts.cfg.seeds, "evaluation seeds")
      ->delimiter(',');
  app->add_option("--mode", opts.cfg.mode, "cda1 | cda2");
  app->add_flag("--free-classes", opts.cfg.free_classes,
                "accept composition classes outside the KUPCP set");
}

void finalize_config(CLI::App* app, CommonOpts& opts) {
  if (opts.config_path.empty()) return;
  const flowcomp::PipelineConfig flags = opts.cfg;  // flag values (or defaults)
  opts.cfg = flowcomp::load_config(opts.config_path);
  // Flags the user actually passed win over the file.
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--grid") opts.cfg.grid = flags.grid;
    else if (name == "--tensor") opts.cfg.tensor = flags.tensor;
    else if (name == "--mu") opts.cfg.mu = flags.mu;
    else if (name == "--beta") opts.cfg.beta = flags.beta;
    else if (name == "--iterations") opts.cfg.iterations = flags.iterations;
    else if (name == "--edge-source") opts.cfg.edge_source = flags.edge_source;
    else if (name == "--saliency") opts.cfg.saliency = flags.saliency;
    else if (name == "--sigma-frac") opts.cfg.sigma_frac = flags.sigma_frac;
    else if (name == "--blur-sigma") opts.cfg.blur_sigma = flags.blur_sigma;
    else if (name == "--canny-low") opts.cfg.canny_low = flags.canny_low;
    else if (name == "--canny-high") opts.cfg.canny_high = flags.canny_high;
    else if (name == "--per-anchor") opts.cfg.per_anchor = flags.per_anchor;
    else if (name == "--seeds") opts.cfg.seeds = flags.seeds;
    else if (name == "--mode") opts.cfg.mode = flags.mode;
    else if (name == "--free-classes") opts.cfg.free_classes = flags.free_classes;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowcomp: saliency-guided gradient vector flow composition toolkit"};
  app.require_subcommand(1);

  CommonOpts saliency_opts, gvf_opts, embed_opts, eval_opts, render_opts,
      ablate_opts;

  // saliency
  std::string sal_input, sal_output = "out", sal_format = "png";
  CLI::App* sal = app.add_subcommand("saliency", "generate saliency maps for a directory of images");
  sal->add_option("input", sal_input, "image directory")->required();
  sal->add_option("-o,--output", sal_output, "output directory");
  sal->add_option("--format", sal_format, "png | fcf");
  add_config_flags(sal, saliency_opts);

  // gvf
  std::string gvf_image, gvf_output = "out", gvf_salmap;
  CLI::App* gvf = app.add_subcommand("gvf", "solve both GVF streams for one image");
  gvf->add_option("image", gvf_image, "input image")->required();
  gvf->add_option("-o,--output", gvf_output, "output directory");
  gvf->add_option("--saliency-map", gvf_salmap,
                  "explicit saliency file (overrides --saliency)");
  add_config_flags(gvf, gvf_opts);

  // embed
  std::string embed_input, embed_labels, embed_output = "descriptors.csv";
  CLI::App* embed = app.add_subcommand("embed", "extract flow descriptors for a corpus");
  embed->add_option("input", embed_input, "image directory")->required();
  embed->add_option("--labels", embed_labels, "label TSV; restricts to labeled ids");
  embed->add_option("-o,--output", embed_output, "descriptor CSV path");
  add_config_flags(embed, embed_opts);

  // eval
  std::string eval_embeddings, eval_labels, eval_output = "report.json";
  CLI::App* eval = app.add_subcommand("eval", "CDA and clustering metrics over embeddings");
  eval->add_option("embeddings", eval_embeddings, "embedding CSV")->required();
  eval->add_option("labels", eval_labels, "label TSV")->required();
  eval->add_option("-o,--output", eval_output, "JSON report path");
  add_config_flags(eval, eval_opts);

  // render
  std::string render_input, render_kind, render_output = "render.png";
  CLI::App* render = app.add_subcommand("render", "render heatmap or quiver PNGs");
  render->add_option("input", render_input, "flow file, saliency PNG or FCF1 file")->required();
  render->add_option("kind", render_kind, "div | curl | mag | saliency | quiver")->required();
  render->add_option("-o,--output", render_output, "output PNG path");
  add_config_flags(render, render_opts);

  // ablate
  std::string ablate_input, ablate_labels, ablate_output = "ablate";
  CLI::App* ablate = app.add_subcommand("ablate", "sweep mu/iterations and edge sources");
  ablate->add_option("input", ablate_input, "image directory")->required();
  ablate->add_option("labels", ablate_labels, "label TSV")->required();
  ablate->add_option("-o,--output", ablate_output, "output directory");
  add_config_flags(ablate, ablate_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sal->parsed()) {
      finalize_config(sal, saliency_opts);
      return flowcomp::cmd_saliency(sal_input, saliency_opts.cfg, sal_output,
                                    sal_format);
    }
    if (gvf->parsed()) {
      finalize_config(gvf, gvf_opts);
      return flowcomp::cmd_gvf(gvf_image, gvf_opts.cfg, gvf_output, gvf_salmap);
    }
    if (embed->parsed()) {
      finalize_config(embed, embed_opts);
      return flowcomp::cmd_embed(embed_input, embed_labels, embed_opts.cfg,
                                 embed_output);
    }
    if (eval->parsed()) {
      finalize_config(eval, eval_opts);
      return flowcomp::cmd_eval(eval_embeddings, eval_labels, eval_opts.cfg,
                                eval_output);
    }
    if (render->parsed()) {
      finalize_config(render, render_opts);
      return flowcomp::cmd_render(render_input, render_kind, render_opts.cfg,
                                  render_output);
    }
    if (ablate->parsed()) {
      finalize_config(ablate, ablate_opts);
      return flowcomp::cmd_ablate(ablate_input, ablate_labels, ablate_opts.cfg,
                                  ablate_output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
