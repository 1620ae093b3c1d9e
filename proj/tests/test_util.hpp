#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "flowcomp/field.hpp"
#include "flowcomp/image.hpp"

namespace testutil {

inline std::string data_dir() { return FLOWCOMP_TEST_DATA_DIR; }

inline std::string data_path(const std::string& rel) {
  return (std::filesystem::path(FLOWCOMP_TEST_DATA_DIR) / rel).string();
}

/// Scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("flowcomp_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

private:
  std::filesystem::path path_;
};

inline flowcomp::ScalarField make_field(
    int w, int h, const std::function<double(int, int)>& fn) {
  flowcomp::ScalarField f(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.at(x, y) = fn(x, y);
  return f;
}

inline flowcomp::GrayImage make_gray(
    int w, int h, const std::function<double(int, int)>& fn) {
  flowcomp::GrayImage g;
  static_cast<flowcomp::ScalarField&>(g) = make_field(w, h, fn);
  return g;
}

inline flowcomp::ScalarField random_field(int w, int h, unsigned seed,
                                          double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  return make_field(w, h, [&](int, int) { return dist(rng); });
}

inline double max_abs_diff(const flowcomp::ScalarField& a,
                           const flowcomp::ScalarField& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace testutil
