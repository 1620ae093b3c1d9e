#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flowcomp/errors.hpp"
#include "flowcomp/flowfeat.hpp"
#include "flowcomp/saliency.hpp"
#include "test_util.hpp"

using namespace flowcomp;
using testutil::make_field;
using testutil::make_gray;
using testutil::max_abs_diff;

namespace {

FlowField make_flow(int w, int h,
                    const std::function<double(int, int)>& fu,
                    const std::function<double(int, int)>& fv) {
  return {make_field(w, h, fu), make_field(w, h, fv)};
}

FlowField random_flow(int w, int h, unsigned seed) {
  return {testutil::random_field(w, h, seed),
          testutil::random_field(w, h, seed + 1000)};
}

// ---- independent descriptor oracle ------------------------------------
// Recomputes every entry with separate code: explicit block pooling,
// explicit finite differences with spacing, two-pass statistics.

std::vector<std::vector<double>> pool_ref(const ScalarField& f, int s) {
  const int w = f.width / s, h = f.height / s;
  std::vector<std::vector<double>> out(h, std::vector<double>(w, 0.0));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = 0; dy < s; ++dy)
        for (int dx = 0; dx < s; ++dx) acc += f.at(x * s + dx, y * s + dy);
      out[y][x] = acc / (s * s);
    }
  return out;
}

double dref_x(const std::vector<std::vector<double>>& a, int x, int y, double spacing) {
  const int w = static_cast<int>(a[0].size());
  if (x == 0) return (a[y][1] - a[y][0]) / spacing;
  if (x == w - 1) return (a[y][w - 1] - a[y][w - 2]) / spacing;
  return (a[y][x + 1] - a[y][x - 1]) / (2.0 * spacing);
}

double dref_y(const std::vector<std::vector<double>>& a, int x, int y, double spacing) {
  const int h = static_cast<int>(a.size());
  if (y == 0) return (a[1][x] - a[0][x]) / spacing;
  if (y == h - 1) return (a[h - 1][x] - a[h - 2][x]) / spacing;
  return (a[y + 1][x] - a[y - 1][x]) / (2.0 * spacing);
}

struct RefStats {
  double mean, stddev, pos, neg;
};

RefStats stats_ref(const std::vector<double>& xs) {
  RefStats r{0, 0, 0, 0};
  for (double v : xs) r.mean += v;
  r.mean /= xs.size();
  double sq = 0;
  for (double v : xs) {
    sq += (v - r.mean) * (v - r.mean);
    if (v > 0) r.pos += 1;
    if (v < 0) r.neg += 1;
  }
  r.stddev = std::sqrt(sq / xs.size());
  r.pos /= xs.size();
  r.neg /= xs.size();
  return r;
}

std::vector<double> descriptor_ref(const FlowField& base, const FlowField& sal) {
  std::vector<double> out;
  for (const FlowField* flow : {&base, &sal}) {
    for (int s : {1, 2, 4}) {
      const auto pu = pool_ref(flow->u, s);
      const auto pv = pool_ref(flow->v, s);
      const int w = static_cast<int>(pu[0].size());
      const int h = static_cast<int>(pu.size());
      std::vector<std::vector<double>> div(h, std::vector<double>(w)),
          curl(h, std::vector<double>(w)), mag(h, std::vector<double>(w));
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          div[y][x] = dref_x(pu, x, y, s) + dref_y(pv, x, y, s);
          curl[y][x] = dref_x(pv, x, y, s) - dref_y(pu, x, y, s);
          mag[y][x] = std::sqrt(pu[y][x] * pu[y][x] + pv[y][x] * pv[y][x]);
        }
      for (int gy = 0; gy < 4; ++gy)
        for (int gx = 0; gx < 4; ++gx) {
          for (const auto* f : {&div, &curl, &mag}) {
            std::vector<double> cell;
            for (int y = gy * h / 4; y < (gy + 1) * h / 4; ++y)
              for (int x = gx * w / 4; x < (gx + 1) * w / 4; ++x)
                cell.push_back((*f)[y][x]);
            const RefStats st = stats_ref(cell);
            out.push_back(st.mean);
            out.push_back(st.stddev);
          }
        }
    }
    // scale-1 flow statistics
    const auto pu = pool_ref(flow->u, 1);
    const auto pv = pool_ref(flow->v, 1);
    const int w = static_cast<int>(pu[0].size());
    const int h = static_cast<int>(pu.size());
    std::vector<double> dv, cv, mv;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        dv.push_back(dref_x(pu, x, y, 1) + dref_y(pv, x, y, 1));
        cv.push_back(dref_x(pv, x, y, 1) - dref_y(pu, x, y, 1));
        mv.push_back(std::sqrt(pu[y][x] * pu[y][x] + pv[y][x] * pv[y][x]));
      }
    for (const auto* xs : {&dv, &cv, &mv}) {
      const RefStats st = stats_ref(*xs);
      out.push_back(st.mean);
      out.push_back(st.stddev);
      out.push_back(st.pos);
      out.push_back(st.neg);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("divergence identities") {
  const FlowField expand = make_flow(8, 8, [](int x, int) { return double(x); },
                                     [](int, int y) { return double(y); });
  const ScalarField d = divergence(expand);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x)
      CHECK(d.at(x, y) == doctest::Approx(2.0).epsilon(1e-12));

  const FlowField rot = make_flow(8, 8, [](int, int y) { return -double(y); },
                                  [](int x, int) { return double(x); });
  const ScalarField dr = divergence(rot);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x) CHECK(dr.at(x, y) == doctest::Approx(0.0).epsilon(1e-12));

  const FlowField constant{ScalarField(6, 6, 1.3), ScalarField(6, 6, -0.4)};
  for (double v : divergence(constant).data) CHECK(v == 0.0);

  CHECK_THROWS_AS(divergence(FlowField{ScalarField(2, 6), ScalarField(2, 6)}),
                  InvalidArgumentError);
}

TEST_CASE("curl identities") {
  const FlowField rot = make_flow(8, 8, [](int, int y) { return -double(y); },
                                  [](int x, int) { return double(x); });
  const ScalarField c = curl(rot);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x) CHECK(c.at(x, y) == doctest::Approx(2.0).epsilon(1e-12));

  const FlowField expand = make_flow(8, 8, [](int x, int) { return double(x); },
                                     [](int, int y) { return double(y); });
  const ScalarField ce = curl(expand);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x) CHECK(ce.at(x, y) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("curl of an image gradient field vanishes on a smooth bump") {
  const GrayImage bump = make_gray(32, 32, [](int x, int y) {
    return std::exp(-((x - 15.5) * (x - 15.5) + (y - 15.5) * (y - 15.5)) / 40.0);
  });
  const GradientPair g = central_gradients(bump);
  const ScalarField c = curl(FlowField{g.fx, g.fy});
  for (int y = 1; y < 31; ++y)
    for (int x = 1; x < 31; ++x) CHECK(std::abs(c.at(x, y)) <= 1e-6);
}

TEST_CASE("divergence and curl are exact on affine flows") {
  const double a = 0.7, b = -0.3, c = 0.11, d = 0.45, e = -1.2, f = 0.9;
  const FlowField affine =
      make_flow(9, 7, [&](int x, int y) { return a * x + b * y + c; },
                [&](int x, int y) { return d * x + e * y + f; });
  const ScalarField dv = divergence(affine);
  const ScalarField cl = curl(affine);
  for (int y = 1; y < 6; ++y)
    for (int x = 1; x < 8; ++x) {
      CHECK(dv.at(x, y) == doctest::Approx(a + e).epsilon(1e-12));
      CHECK(cl.at(x, y) == doctest::Approx(d - b).epsilon(1e-12));
    }
}

TEST_CASE("magnitude basics and rotation invariance") {
  const FlowField f345{ScalarField(4, 4, 3.0), ScalarField(4, 4, 4.0)};
  for (double v : magnitude(f345).data) CHECK(v == 5.0);

  const FlowField zero{ScalarField(4, 4, 0.0), ScalarField(4, 4, 0.0)};
  for (double v : magnitude(zero).data) CHECK(v == 0.0);

  const FlowField ones{ScalarField(4, 4, 1.0), ScalarField(4, 4, 1.0)};
  for (double v : magnitude(ones).data)
    CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const FlowField r = random_flow(6, 6, 7);
  const double theta = 0.83;
  FlowField rotated{ScalarField(6, 6), ScalarField(6, 6)};
  for (size_t i = 0; i < r.u.data.size(); ++i) {
    rotated.u.data[i] = std::cos(theta) * r.u.data[i] - std::sin(theta) * r.v.data[i];
    rotated.v.data[i] = std::sin(theta) * r.u.data[i] + std::cos(theta) * r.v.data[i];
  }
  CHECK(max_abs_diff(magnitude(r), magnitude(rotated)) < 1e-12);
}

TEST_CASE("multiscale_features: identity at scale 1, constants, linear flow") {
  const FlowField flow = random_flow(8, 8, 19);
  const auto scales = multiscale_features(flow);
  REQUIRE(scales[0].scale == 1);
  CHECK(max_abs_diff(scales[0].div, divergence(flow)) == 0.0);
  CHECK(max_abs_diff(scales[0].curl, curl(flow)) == 0.0);
  CHECK(max_abs_diff(scales[0].mag, magnitude(flow)) == 0.0);

  const FlowField constant{ScalarField(8, 8, 0.6), ScalarField(8, 8, -0.8)};
  for (const ScaleFeatures& sf : multiscale_features(constant)) {
    for (double v : sf.div.data) CHECK(v == 0.0);
    for (double v : sf.curl.data) CHECK(v == 0.0);
    for (double v : sf.mag.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Pooling preserves linearity; derivatives in original-grid units keep
  // the divergence at 2 on every scale.
  const FlowField linear = make_flow(16, 16, [](int x, int) { return double(x); },
                                     [](int, int y) { return double(y); });
  for (const ScaleFeatures& sf : multiscale_features(linear)) {
    const int w = sf.div.width, h = sf.div.height;
    for (int y = 1; y < h - 1; ++y)
      for (int x = 1; x < w - 1; ++x)
        CHECK(sf.div.at(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(multiscale_features(random_flow(6, 6, 2)), InvalidArgumentError);
}

TEST_CASE("flow_statistics: zero flow, linear flow, magnitude sign") {
  const FlowField zero{ScalarField(8, 8, 0.0), ScalarField(8, 8, 0.0)};
  for (double v : flow_statistics(zero).to_array()) CHECK(v == 0.0);

  const FlowField linear = make_flow(8, 8, [](int x, int) { return double(x); },
                                     [](int, int y) { return double(y); });
  const FlowStats st = flow_statistics(linear);
  CHECK(st.div_mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(st.div_std < 1e-9);
  CHECK(st.div_pos == 1.0);
  CHECK(st.div_neg == 0.0);

  const FlowStats rst = flow_statistics(random_flow(8, 8, 23));
  CHECK(rst.mag_neg == 0.0);
  CHECK(rst.mag_pos > 0.0);
}

TEST_CASE("descriptor: zero flows, stream order, length") {
  const FlowField zero{ScalarField(16, 16, 0.0), ScalarField(16, 16, 0.0)};
  const std::vector<double> z = descriptor(zero, zero);
  REQUIRE(z.size() == 600);
  for (double v : z) CHECK(v == 0.0);

  const FlowField a = random_flow(16, 16, 31);
  const FlowField b = random_flow(16, 16, 37);
  const std::vector<double> ab = descriptor(a, b);
  const std::vector<double> ba = descriptor(b, a);
  REQUIRE(ab.size() == 600);
  for (int i = 0; i < 300; ++i) {
    CHECK(ab[i] == ba[300 + i]);
    CHECK(ab[300 + i] == ba[i]);
  }

  // Too small for the coarsest scale to cover the 4x4 grid.
  const FlowField small = random_flow(8, 8, 39);
  CHECK_THROWS_AS(descriptor(small, small), InvalidArgumentError);
}

TEST_CASE("descriptor matches the independent per-entry oracle") {
  for (unsigned seed : {41u, 57u}) {
    const FlowField base = random_flow(16, 16, seed);
    const FlowField sal = random_flow(16, 16, seed + 500);
    const std::vector<double> got = descriptor(base, sal);
    const std::vector<double> want = descriptor_ref(base, sal);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
  // Uneven 4x4 partitions (56/4 pooled at scale 4 gives 14 samples) agree too.
  const FlowField base56 = random_flow(56, 56, 71);
  const FlowField sal56 = random_flow(56, 56, 72);
  const std::vector<double> got = descriptor(base56, sal56);
  const std::vector<double> want = descriptor_ref(base56, sal56);
  for (size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("descriptor is deterministic") {
  const FlowField base = random_flow(16, 16, 81);
  const FlowField sal = random_flow(16, 16, 82);
  CHECK(descriptor(base, sal) == descriptor(base, sal));
}

TEST_CASE("descriptor distance separates line orientations") {
  // Full pipeline on synthetic line compositions: horizontal-horizontal
  // pairs must be closer than horizontal-vertical pairs in at least 90% of
  // random instances. Instances vary in jittered line position around the
  // thirds anchor, thickness, contrast and background noise.
  const int n = 20, size = 32;
  GvfParams params;

  auto lines_image = [&](unsigned seed, bool horizontal) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> jitter(-2, 2);
    std::uniform_int_distribution<int> thickness(1, 2);
    std::uniform_real_distribution<double> fg(0.6, 0.95);
    std::uniform_real_distribution<double> bg(0.1, 0.25);
    std::normal_distribution<double> noise(0.0, 0.01);
    const double back = bg(rng);
    GrayImage img = make_gray(size, size, [&](int, int) { return back; });
    const int p = size / 3 + jitter(rng);
    const int t0 = thickness(rng);
    const double bright = fg(rng);
    for (int dt = 0; dt < t0; ++dt)
      for (int t = 0; t < size; ++t) {
        if (horizontal)
          img.at(t, p + dt) = bright;
        else
          img.at(p + dt, t) = bright;
      }
    for (double& v : img.data) v = std::clamp(v + noise(rng), 0.0, 1.0);
    return img;
  };
  auto embed = [&](const GrayImage& img) {
    const GradientPair f = central_gradients(img);
    const GradientPair s = saliency_gradient(edge_saliency(img));
    return descriptor(gvf_baseline(f.fx, f.fy, params),
                      gvf_saliency(f.fx, f.fy, s.fx, s.fy, params));
  };
  auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
  };

  std::vector<std::vector<double>> hs, vs;
  for (int i = 0; i < n; ++i) {
    hs.push_back(embed(lines_image(1000 + i, true)));
    vs.push_back(embed(lines_image(2000 + i, false)));
  }
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    const double d_hh = dist(hs[i], hs[(i + 1) % n]);
    const double d_hv = dist(hs[i], vs[i]);
    if (d_hh < d_hv) ++ok;
  }
  CHECK(ok >= 18);  // >= 90% of pairs
}

TEST_CASE("descriptor CSV rows use shortest round-trip formatting") {
  testutil::TempDir tmp("csv");
  write_descriptor_csv({{"img1", {0.5, -0.0, 1.0 / 3.0}}, {"img2", {2.0, 1e-17, -4.25}}},
                       tmp.file("d.csv"));
  const std::string text = testutil::read_file(tmp.file("d.csv"));
  CHECK(text == "img1,0.5,0,0.3333333333333333\nimg2,2,1e-17,-4.25\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-0.0) == "0");
}
