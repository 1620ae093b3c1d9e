#include "flowcomp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "flowcomp/errors.hpp"
#include "flowcomp/flowfeat.hpp"
#include "flowcomp/image_io.hpp"

namespace fs = std::filesystem;

namespace flowcomp {

GvfParams PipelineConfig::gvf_params() const {
  GvfParams p;
  p.mu = mu;
  p.beta = beta;
  p.iterations = iterations;
  p.edge_source = edge_source_from_string(edge_source);
  return p;
}

void PipelineConfig::validate() const {
  gvf_params().validate();
  if (grid < 4 || grid % 4 != 0)
    throw InvalidArgumentError("config: grid must be a positive multiple of 4");
  if (tensor < 2) throw InvalidArgumentError("config: tensor must be >= 2");
  if (sigma_frac <= 0.0)
    throw InvalidArgumentError("config: sigma_frac must be > 0");
  if (blur_sigma <= 0.0)
    throw InvalidArgumentError("config: blur_sigma must be > 0");
  if (!(canny_low > 0.0 && canny_low < canny_high && canny_high <= 1.0))
    throw InvalidArgumentError("config: need 0 < canny_low < canny_high <= 1");
  if (per_anchor < 1)
    throw InvalidArgumentError("config: per_anchor must be >= 1");
  if (seeds.empty()) throw InvalidArgumentError("config: seeds must be nonempty");
  cda_mode_from_string(mode);
  if (saliency != "uniform" && saliency != "center" && saliency != "edge" &&
      saliency.rfind("file:", 0) != 0)
    throw InvalidArgumentError("config: unknown saliency source '" + saliency +
                               "'");
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");

  PipelineConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "grid") cfg.grid = value.get<int>();
      else if (key == "tensor") cfg.tensor = value.get<int>();
      else if (key == "mu") cfg.mu = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "iterations") cfg.iterations = value.get<int>();
      else if (key == "edge_source") cfg.edge_source = value.get<std::string>();
      else if (key == "saliency") cfg.saliency = value.get<std::string>();
      else if (key == "sigma_frac") cfg.sigma_frac = value.get<double>();
      else if (key == "blur_sigma") cfg.blur_sigma = value.get<double>();
      else if (key == "canny_low") cfg.canny_low = value.get<double>();
      else if (key == "canny_high") cfg.canny_high = value.get<double>();
      else if (key == "per_anchor") cfg.per_anchor = value.get<int>();
      else if (key == "seeds") cfg.seeds = value.get<std::vector<uint64_t>>();
      else if (key == "mode") cfg.mode = value.get<std::string>();
      else if (key == "free_classes") cfg.free_classes = value.get<bool>();
      else if (key == "output") cfg.output = value.get<std::string>();
      else throw ParseError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["grid"] = cfg.grid;
  j["tensor"] = cfg.tensor;
  j["mu"] = cfg.mu;
  j["beta"] = cfg.beta;
  j["iterations"] = cfg.iterations;
  j["edge_source"] = cfg.edge_source;
  j["saliency"] = cfg.saliency;
  j["sigma_frac"] = cfg.sigma_frac;
  j["blur_sigma"] = cfg.blur_sigma;
  j["canny_low"] = cfg.canny_low;
  j["canny_high"] = cfg.canny_high;
  j["per_anchor"] = cfg.per_anchor;
  j["seeds"] = cfg.seeds;
  j["mode"] = cfg.mode;
  j["free_classes"] = cfg.free_classes;
  j["output"] = cfg.output;
  return j.dump();
}

GrayImage load_gray_at_grid(const std::string& path, int grid) {
  return resize_bilinear(to_grayscale(load_image(path)), grid, grid);
}

SaliencyMap make_saliency(const PipelineConfig& cfg, const GrayImage& gray,
                          const std::string& id) {
  if (cfg.saliency == "uniform") return uniform_saliency(gray.width, gray.height);
  if (cfg.saliency == "center")
    return center_bias_saliency(gray.width, gray.height, cfg.sigma_frac);
  if (cfg.saliency == "edge") return edge_saliency(gray, cfg.blur_sigma);
  if (cfg.saliency.rfind("file:", 0) == 0) {
    const fs::path dir = cfg.saliency.substr(5);
    for (const char* ext : {".png", ".fcf"}) {
      const fs::path candidate = dir / (id + ext);
      if (fs::exists(candidate))
        return load_saliency(candidate.string(), gray.width, gray.height);
    }
    throw FileNotFoundError((dir / (id + ".png")).string());
  }
  throw InvalidArgumentError("unknown saliency source '" + cfg.saliency + "'");
}

GradientPair make_forces(const GrayImage& gray, const PipelineConfig& cfg) {
  const EdgeSource source = edge_source_from_string(cfg.edge_source);
  if (source == EdgeSource::Canny)
    return central_gradients(canny_edges(gray, cfg.canny_low, cfg.canny_high));
  return edge_force_field(gray, source);
}

StreamPair solve_streams(const GrayImage& gray, const SaliencyMap& sal,
                         const PipelineConfig& cfg) {
  const GvfParams params = cfg.gvf_params();
  const GradientPair forces = make_forces(gray, cfg);
  const GradientPair sgrad = saliency_gradient(sal);
  return {gvf_baseline(forces.fx, forces.fy, params),
          gvf_saliency(forces.fx, forces.fy, sgrad.fx, sgrad.fy, params)};
}

std::vector<double> image_descriptor(const GrayImage& gray,
                                     const SaliencyMap& sal,
                                     const PipelineConfig& cfg) {
  const StreamPair streams = solve_streams(gray, sal, cfg);
  return descriptor(streams.baseline, streams.enhanced);
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  size_t workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("FLOWCOMP_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) workers = static_cast<size_t>(parsed);
  }
  workers = std::max<size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

std::vector<std::string> list_image_files(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw FileNotFoundError(dir);
  std::vector<std::string> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end(),
            [](const std::string& a, const std::string& b) {
              return fs::path(a).filename().string() <
                     fs::path(b).filename().string();
            });
  return files;
}

std::string image_id(const std::string& path) {
  return fs::path(path).stem().string();
}

}  // namespace flowcomp
