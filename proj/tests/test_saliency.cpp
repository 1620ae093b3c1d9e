#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flowcomp/errors.hpp"
#include "flowcomp/image_io.hpp"
#include "flowcomp/saliency.hpp"
#include "test_util.hpp"

using namespace flowcomp;
using testutil::make_gray;
using testutil::max_abs_diff;

TEST_CASE("uniform_saliency is constant 0.5 with zero gradient") {
  const SaliencyMap s = uniform_saliency(4, 4);
  REQUIRE(s.width == 4);
  REQUIRE(s.height == 4);
  for (double v : s.data) CHECK(v == 0.5);
  CHECK(field_min(s) == 0.5);
  CHECK(field_max(s) == 0.5);

  const GradientPair g = saliency_gradient(s);
  for (double v : g.fx.data) CHECK(v == 0.0);
  for (double v : g.fy.data) CHECK(v == 0.0);

  CHECK_THROWS_AS(uniform_saliency(1, 4), InvalidArgumentError);
}

TEST_CASE("center_bias_saliency evaluates the Gaussian formula") {
  // Odd grid: center sample at zero distance.
  const SaliencyMap odd = center_bias_saliency(5, 5);
  CHECK(odd.at(2, 2) == 1.0);

  // sigma_frac 0.2 on a 5x5 grid gives sigma = 1: the samples one step from
  // the center sit exactly at distance sigma.
  const SaliencyMap unit = center_bias_saliency(5, 5, 0.2);
  CHECK(unit.at(3, 2) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(unit.at(2, 1) == doctest::Approx(0.6065306597126334).epsilon(1e-12));

  // Frozen corner value: (4,4), sigma_frac 0.3 -> sigma 1.2, d^2 = 4.5.
  const SaliencyMap even = center_bias_saliency(4, 4, 0.3);
  CHECK(even.at(0, 0) == doctest::Approx(0.2096113871510978).epsilon(1e-12));

  CHECK_THROWS_AS(center_bias_saliency(4, 4, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(center_bias_saliency(4, 4, -1.0), InvalidArgumentError);
}

TEST_CASE("center_bias_saliency is flip symmetric and within [0,1]") {
  for (const auto [w, h] : {std::pair{5, 7}, {6, 4}, {9, 9}}) {
    const SaliencyMap s = center_bias_saliency(w, h);
    CHECK(max_abs_diff(s, flip_horizontal(s)) < 1e-12);
    CHECK(max_abs_diff(s, flip_vertical(s)) < 1e-12);
    CHECK(field_min(s) >= 0.0);
    CHECK(field_max(s) <= 1.0);
  }
}

TEST_CASE("edge_saliency: constant image, edge localization, pipeline oracle") {
  const GrayImage flat = make_gray(10, 10, [](int, int) { return 0.6; });
  for (double v : edge_saliency(flat).data) CHECK(v == 0.0);

  // Single vertical step away from the border: argmax column sits on the
  // step columns and the map is in [0,1].
  const GrayImage step =
      make_gray(32, 24, [](int x, int) { return x < 16 ? 0.1 : 0.9; });
  const SaliencyMap s = edge_saliency(step);
  CHECK(field_min(s) >= 0.0);
  CHECK(field_max(s) == 1.0);
  const auto arg = std::max_element(s.data.begin(), s.data.end()) - s.data.begin();
  const int arg_col = static_cast<int>(arg) % 32;
  CHECK(arg_col >= 15);
  CHECK(arg_col <= 16);

  // Oracle: the map is exactly the composition of the tested primitives.
  const ScalarField want =
      minmax_normalize(gaussian_blur(sobel_edges(step), 2.0, 6));
  CHECK(max_abs_diff(s, want) == 0.0);
}

TEST_CASE("edge_saliency argmax translates with the edge") {
  auto edge_at = [](int k) {
    return make_gray(40, 16, [k](int x, int) { return x < k ? 0.1 : 0.9; });
  };
  auto argmax_col = [](const SaliencyMap& s) {
    const auto arg = std::max_element(s.data.begin(), s.data.end()) - s.data.begin();
    return static_cast<int>(arg) % s.width;
  };
  const int base = argmax_col(edge_saliency(edge_at(14)));
  const int moved = argmax_col(edge_saliency(edge_at(19)));
  CHECK(moved - base == 5);
}

TEST_CASE("load_saliency handles PNG and raw float sources") {
  testutil::TempDir tmp("sal");

  write_gray_png(ScalarField(6, 6, 1.0), tmp.file("white.png"));
  for (const auto [w, h] : {std::pair{6, 6}, {12, 8}, {3, 3}}) {
    const SaliencyMap s = load_saliency(tmp.file("white.png"), w, h);
    CHECK(s.width == w);
    CHECK(s.height == h);
    for (double v : s.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Raw floats already in [0,1]: preserved exactly at equal size.
  const ScalarField in_range = testutil::random_field(7, 7, 9, 0.0, 1.0);
  write_fcf_scalar(in_range, tmp.file("inrange.fcf"));
  const SaliencyMap same = load_saliency(tmp.file("inrange.fcf"), 7, 7);
  for (size_t i = 0; i < same.data.size(); ++i)
    CHECK(same.data[i] == static_cast<double>(static_cast<float>(in_range.data[i])));

  // Raw floats in [0,10]: min-max brings them back to v/10.
  ScalarField wide(11, 2);
  for (int x = 0; x < 11; ++x) {
    wide.at(x, 0) = x;
    wide.at(x, 1) = x;
  }
  write_fcf_scalar(wide, tmp.file("wide.fcf"));
  const SaliencyMap scaled = load_saliency(tmp.file("wide.fcf"), 11, 2);
  for (int x = 0; x < 11; ++x)
    CHECK(scaled.at(x, 0) == doctest::Approx(x / 10.0).epsilon(1e-12));

  CHECK_THROWS_AS(load_saliency(tmp.file("absent.fcf"), 8, 8), FileNotFoundError);
  testutil::write_file(tmp.file("junk.fcf"), "ZZZZ not a header");
  CHECK_THROWS_AS(load_saliency(tmp.file("junk.fcf"), 8, 8), CorruptDataError);
  write_fcf_scalar(in_range, tmp.file("ok.fcf"));
  CHECK_THROWS_AS(load_saliency(tmp.file("ok.fcf"), 1, 8), InvalidArgumentError);
}

TEST_CASE("saliency_gradient: uniform, ramp, center-bias antisymmetry") {
  const GradientPair zero = saliency_gradient(uniform_saliency(8, 8));
  for (double v : zero.fx.data) CHECK(v == 0.0);

  SaliencyMap ramp;
  static_cast<ScalarField&>(ramp) =
      testutil::make_field(9, 5, [](int x, int) { return x / 8.0; });
  const GradientPair g = saliency_gradient(ramp);
  for (double v : g.fx.data) CHECK(v == doctest::Approx(1.0 / 8).epsilon(1e-12));
  for (double v : g.fy.data) CHECK(v == 0.0);

  // The Gaussian's x-derivative is antisymmetric about the vertical center line.
  const SaliencyMap bias = center_bias_saliency(11, 9);
  const GradientPair gb = saliency_gradient(bias);
  for (int y = 1; y < 8; ++y)
    for (int x = 1; x < 10; ++x)
      CHECK(gb.fx.at(x, y) ==
            doctest::Approx(-gb.fx.at(10 - x, y)).epsilon(1e-9));

  SaliencyMap tiny;
  static_cast<ScalarField&>(tiny) = ScalarField(2, 2, 0.5);
  CHECK_THROWS_AS(saliency_gradient(tiny), InvalidArgumentError);
}
