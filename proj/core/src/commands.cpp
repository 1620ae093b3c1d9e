#include "flowcomp/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <vector>

#include <json.hpp>

#include "flowcomp/errors.hpp"
#include "flowcomp/flowfeat.hpp"
#include "flowcomp/image_io.hpp"
#include "flowcomp/render.hpp"

namespace fs = std::filesystem;

namespace flowcomp {

namespace {

// Write-to-temp-then-rename so partially written outputs never appear.
void atomic_write(const std::string& path,
                  const std::function<void(const std::string&)>& writer) {
  const std::string tmp = path + ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

void report_failures(const std::vector<std::string>& errors) {
  for (const std::string& e : errors)
    if (!e.empty()) std::cerr << "error: " << e << "\n";
}

bool any_failure(const std::vector<std::string>& errors) {
  return std::any_of(errors.begin(), errors.end(),
                     [](const std::string& e) { return !e.empty(); });
}

nlohmann::json config_as_json(const PipelineConfig& cfg) {
  return nlohmann::json::parse(config_json(cfg));
}

struct EmbedResult {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::vector<std::string> errors;
};

EmbedResult embed_corpus(const std::string& image_dir,
                         const std::string& labels_path,
                         const PipelineConfig& cfg) {
  std::vector<std::string> files = list_image_files(image_dir);
  if (!labels_path.empty()) {
    const std::map<std::string, LabelPair> labels =
        load_labels(labels_path, !cfg.free_classes);
    std::erase_if(files, [&](const std::string& f) {
      return labels.find(image_id(f)) == labels.end();
    });
  }
  if (files.empty())
    throw InvalidArgumentError("no images found in " + image_dir);

  EmbedResult result;
  result.rows.resize(files.size());
  result.errors.resize(files.size());
  parallel_for(files.size(), [&](size_t i) {
    try {
      const std::string id = image_id(files[i]);
      const GrayImage gray = load_gray_at_grid(files[i], cfg.grid);
      const SaliencyMap sal = make_saliency(cfg, gray, id);
      result.rows[i] = {id, image_descriptor(gray, sal, cfg)};
    } catch (const std::exception& e) {
      result.errors[i] = files[i] + ": " + e.what();
    }
  });
  std::erase_if(result.rows,
                [](const auto& row) { return row.first.empty(); });
  std::sort(result.rows.begin(), result.rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

nlohmann::json build_report(const PipelineConfig& cfg, const CdaReport& rep,
                            double dbi, double sil, size_t dim, size_t n) {
  nlohmann::json j;
  j["config"] = config_as_json(cfg);
  j["mode"] = to_string(rep.mode);
  j["seeds"] = nlohmann::json::array();
  for (const SeedResult& r : rep.per_seed)
    j["seeds"].push_back({{"seed", r.seed},
                          {"accuracy", r.accuracy},
                          {"n_triplets", r.n_triplets}});
  j["mean"] = rep.mean;
  j["std"] = rep.stddev;
  j["cv"] = rep.cv;
  j["dbi"] = dbi;
  j["silhouette"] = sil;
  j["embedding_dim"] = dim;
  j["n_images"] = n;
  return j;
}

int run_eval(const std::string& embeddings_path, const std::string& labels_path,
             const PipelineConfig& cfg, const std::string& output_json) {
  const LabeledEmbeddingSet set = make_labeled_set(
      load_embeddings(embeddings_path), load_labels(labels_path, !cfg.free_classes));
  if (set.entries.empty())
    throw InvalidArgumentError("no ids shared between embeddings and labels");

  const CdaReport rep = cda_multiseed(set, cda_mode_from_string(cfg.mode),
                                      cfg.seeds, cfg.per_anchor);
  const double dbi = davies_bouldin(set);
  const double sil = silhouette(set);

  for (const SeedResult& r : rep.per_seed)
    std::cout << "seed " << r.seed << ": accuracy " << format_double(r.accuracy)
              << " over " << r.n_triplets << " triplets\n";
  std::cout << to_string(rep.mode) << " mean " << format_double(rep.mean)
            << " std " << format_double(rep.stddev) << " cv "
            << format_double(rep.cv) << "\n";
  if (rep.cv >= 0.03)
    std::cerr << "warning: coefficient of variation " << format_double(rep.cv)
              << " is >= 3%\n";
  std::cout << "dbi " << format_double(dbi) << " silhouette "
            << format_double(sil) << "\n";

  const nlohmann::json report =
      build_report(cfg, rep, dbi, sil, set.dim, set.entries.size());
  atomic_write(output_json, [&](const std::string& tmp) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp);
    out << report.dump(2) << "\n";
  });
  std::cout << "wrote " << output_json << "\n";
  return 0;
}

}  // namespace

int cmd_saliency(const std::string& input_dir, const PipelineConfig& cfg,
                 const std::string& output_dir, const std::string& format) {
  try {
    cfg.validate();
    if (format != "png" && format != "fcf")
      throw InvalidArgumentError("unknown output format '" + format + "'");
    const std::vector<std::string> files = list_image_files(input_dir);
    if (files.empty()) {
      std::cerr << "error: no images found in " << input_dir << "\n";
      return 1;
    }
    fs::create_directories(output_dir);

    std::vector<std::string> errors(files.size());
    parallel_for(files.size(), [&](size_t i) {
      try {
        const std::string id = image_id(files[i]);
        const GrayImage gray = load_gray_at_grid(files[i], cfg.grid);
        const SaliencyMap sal = make_saliency(cfg, gray, id);
        const std::string out =
            (fs::path(output_dir) / (id + "." + format)).string();
        atomic_write(out, [&](const std::string& tmp) {
          if (format == "png")
            write_gray_png(sal, tmp);
          else
            write_fcf_scalar(sal, tmp);
        });
      } catch (const std::exception& e) {
        errors[i] = files[i] + ": " + e.what();
      }
    });

    report_failures(errors);
    const size_t failed =
        static_cast<size_t>(std::count_if(errors.begin(), errors.end(),
                                          [](const std::string& e) { return !e.empty(); }));
    std::cout << "wrote " << (files.size() - failed) << " saliency maps to "
              << output_dir << " (" << failed << " failed)\n";
    return any_failure(errors) ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_gvf(const std::string& image_path, const PipelineConfig& cfg,
            const std::string& output_dir, const std::string& saliency_map_path) {
  try {
    cfg.validate();
    const std::string id = image_id(image_path);
    const GrayImage gray = load_gray_at_grid(image_path, cfg.grid);
    const SaliencyMap sal =
        saliency_map_path.empty()
            ? make_saliency(cfg, gray, id)
            : load_saliency(saliency_map_path, gray.width, gray.height);

    const GvfParams params = cfg.gvf_params();
    const GradientPair forces = make_forces(gray, cfg);
    const GradientPair sgrad = saliency_gradient(sal);
    const FlowField base = gvf_baseline(forces.fx, forces.fy, params);
    const FlowField enhanced =
        gvf_saliency(forces.fx, forces.fy, sgrad.fx, sgrad.fy, params);
    const FlowField averaged = average_streams(base, enhanced);
    const InputTensor tensor = assemble_input(sal, averaged, cfg.tensor);

    const FlowField initial{forces.fx, forces.fy};
    std::cout << "baseline energy: iter0="
              << format_double(gvf_energy(initial, forces.fx, forces.fy, cfg.mu))
              << " final="
              << format_double(gvf_energy(base, forces.fx, forces.fy, cfg.mu))
              << "\n";
    std::cout << "enhanced energy: iter0="
              << format_double(gvf_energy_saliency(initial, forces.fx, forces.fy,
                                                   sgrad.fx, sgrad.fy, cfg.mu,
                                                   cfg.beta))
              << " final="
              << format_double(gvf_energy_saliency(enhanced, forces.fx, forces.fy,
                                                   sgrad.fx, sgrad.fy, cfg.mu,
                                                   cfg.beta))
              << "\n";

    fs::create_directories(output_dir);
    const auto out = [&](const std::string& suffix) {
      return (fs::path(output_dir) / (id + suffix)).string();
    };
    atomic_write(out("_baseline.fcf"), [&](const std::string& tmp) {
      write_fcf_planes({base.u, base.v}, tmp);
    });
    atomic_write(out("_enhanced.fcf"), [&](const std::string& tmp) {
      write_fcf_planes({enhanced.u, enhanced.v}, tmp);
    });
    atomic_write(out("_average.fcf"), [&](const std::string& tmp) {
      write_fcf_planes({averaged.u, averaged.v}, tmp);
    });
    atomic_write(out("_tensor.fcf"), [&](const std::string& tmp) {
      write_fcf_planes({tensor.saliency, tensor.u, tensor.v}, tmp);
    });
    std::cout << "wrote flow fields for " << id << " to " << output_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << image_path << ": " << e.what() << "\n";
    return 1;
  }
}

int cmd_embed(const std::string& image_dir, const std::string& labels_path,
              const PipelineConfig& cfg, const std::string& output_csv) {
  try {
    cfg.validate();
    const EmbedResult result = embed_corpus(image_dir, labels_path, cfg);
    if (!result.rows.empty())
      atomic_write(output_csv, [&](const std::string& tmp) {
        write_descriptor_csv(result.rows, tmp);
      });
    report_failures(result.errors);
    std::cout << "wrote " << result.rows.size() << " descriptors to "
              << output_csv << "\n";
    return any_failure(result.errors) ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const std::string& embeddings_path, const std::string& labels_path,
             const PipelineConfig& cfg, const std::string& output_json) {
  try {
    cfg.validate();
    return run_eval(embeddings_path, labels_path, cfg, output_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_render(const std::string& input_path, const std::string& kind,
               const PipelineConfig& cfg, const std::string& output_png) {
  try {
    cfg.validate();
    const RenderKind rk = render_kind_from_string(kind);
    ScalarField image;
    if (rk == RenderKind::Saliency) {
      image = render_heatmap(is_png_file(input_path)
                                 ? to_grayscale(load_image(input_path))
                                 : read_fcf_scalar(input_path));
    } else {
      const std::vector<ScalarField> planes = read_fcf_planes(input_path);
      if (planes.size() != 2)
        throw CorruptDataError("expected a 2-channel flow file: " + input_path);
      const FlowField flow{planes[0], planes[1]};
      switch (rk) {
        case RenderKind::Div: image = render_heatmap(divergence(flow)); break;
        case RenderKind::Curl: image = render_heatmap(curl(flow)); break;
        case RenderKind::Mag: image = render_heatmap(magnitude(flow)); break;
        case RenderKind::Quiver: image = render_quiver(flow); break;
        case RenderKind::Saliency: break;  // unreachable
      }
    }
    atomic_write(output_png, [&](const std::string& tmp) {
      write_gray_png(image, tmp);
    });
    std::cout << "wrote " << output_png << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << input_path << ": " << e.what() << "\n";
    return 1;
  }
}

int cmd_ablate(const std::string& image_dir, const std::string& labels_path,
               const PipelineConfig& cfg, const std::string& output_dir) {
  try {
    cfg.validate();
    if (labels_path.empty())
      throw InvalidArgumentError("ablate requires a labels file");
    fs::create_directories(output_dir);

    struct Cell {
      std::string name;
      PipelineConfig cfg;
    };
    std::vector<Cell> cells;
    for (double mu : {0.05, 0.15, 0.25})
      for (int iters : {10, 30, 50}) {
        PipelineConfig c = cfg;
        c.mu = mu;
        c.iterations = iters;
        char name[64];
        std::snprintf(name, sizeof(name), "mu%.2f_iter%d", mu, iters);
        cells.push_back({name, c});
      }
    for (const char* source : {"intensity", "sobel", "canny"}) {
      PipelineConfig c = cfg;
      c.mu = 0.15;
      c.iterations = 10;
      c.edge_source = source;
      cells.push_back({std::string("edge_") + source, c});
    }

    int status = 0;
    for (const Cell& cell : cells) {
      const std::string csv =
          (fs::path(output_dir) / ("ablate_" + cell.name + ".csv")).string();
      const std::string json =
          (fs::path(output_dir) / ("ablate_" + cell.name + ".json")).string();
      std::cout << "=== ablate cell " << cell.name << " ===\n";
      if (cmd_embed(image_dir, labels_path, cell.cfg, csv) != 0 ||
          cmd_eval(csv, labels_path, cell.cfg, json) != 0)
        status = 1;
    }
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace flowcomp
