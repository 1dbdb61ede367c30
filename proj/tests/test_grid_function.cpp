#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "maxcurv/grid_function.hpp"

using namespace maxcurv;

TEST_CASE("lp norm of a single-cell indicator") {
  GridFunction g(MeasuredBox({0.0, 0.0}, {1.0, 1.0}), {4, 4});
  const std::vector<int> idx{1, 2};
  g[g.flat_index(idx)] = 1.0;
  const double cell = g.cell_measure();
  for (double p : {1.0, 2.0, 3.5}) CHECK(g.lp_norm(p) == doctest::Approx(std::pow(cell, 1.0 / p)));
  CHECK(g.lp_norm(INFINITY) == 1.0);
}

TEST_CASE("lp norm scales homogeneously") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GridFunction g(MeasuredBox({0.0}, {2.0}), {32});
  for (auto& v : g.values()) v = unif(rng);
  GridFunction h = g;
  const double c = -3.25;
  for (auto& v : h.values()) v *= c;
  for (double p : {1.0, 2.0, 7.0})
    CHECK(h.lp_norm(p) == doctest::Approx(std::abs(c) * g.lp_norm(p)).epsilon(1e-12));
}

TEST_CASE("nested Holder on a probability box") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  GridFunction g(MeasuredBox({0.0, 0.0}, {1.0, 1.0}), {8, 8});
  for (auto& v : g.values()) v = unif(rng);
  double prev = g.lp_norm(1.0);
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    const double cur = g.lp_norm(p);
    CHECK(prev <= cur + 1e-12);
    prev = cur;
  }
  CHECK(prev <= g.lp_norm(INFINITY) + 1e-12);
}

TEST_CASE("value_at: constants, interpolation and compact support") {
  const MeasuredBox box({0.0, 0.0}, {1.0, 1.0});
  const auto ones = GridFunction::constant(box, {8, 8}, 1.0);
  const std::vector<double> inside{0.37, 0.81}, outside{1.01, 0.5};
  CHECK(ones.value_at(inside) == 1.0);
  CHECK(ones.value_at(outside) == 0.0);

  // Linear data is reproduced exactly between cell centers.
  auto lin = GridFunction::from_function(box, {16, 16},
                                         [](std::span<const double> x) { return 2.0 * x[0] - x[1]; });
  const std::vector<double> y{0.40625, 0.53125};  // both cell centers
  CHECK(lin.value_at(y) == doctest::Approx(2.0 * y[0] - y[1]).epsilon(1e-12));
  const std::vector<double> mid{0.4375, 0.5};  // between centers
  CHECK(lin.value_at(mid) == doctest::Approx(2.0 * mid[0] - mid[1]).epsilon(1e-12));
}

TEST_CASE("binary and csv round trips") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  GridFunction g(MeasuredBox({-0.5, 0.25}, {1.5, 0.75}), {6, 9});
  for (auto& v : g.values()) v = unif(rng);

  const std::string bin = "/tmp/maxcurv_test_grid.bin";
  g.save_binary(bin);
  CHECK(GridFunction::load_binary(bin) == g);
  std::remove(bin.c_str());

  const std::string csv = "/tmp/maxcurv_test_grid.csv";
  g.save_csv(csv);
  const auto back = GridFunction::load_csv(csv);
  REQUIRE(back.resolution() == g.resolution());
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    CHECK(back[i] == doctest::Approx(g[i]).epsilon(1e-15));
  std::remove(csv.c_str());
}

TEST_CASE("invariants of the layout") {
  GridFunction g(MeasuredBox({0.0, 0.0, 0.0}, {1.0, 2.0, 4.0}), {2, 3, 4});
  CHECK(g.cell_count() == 24);
  CHECK(g.cell_measure() == doctest::Approx(8.0 / 24.0));
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const auto idx = g.unflatten(i);
    CHECK(g.flat_index(idx) == i);
  }
  CHECK_THROWS_AS(GridFunction(MeasuredBox({0.0}, {1.0}), {0}), std::invalid_argument);
  CHECK_THROWS_AS(g.lp_norm(0.5), std::invalid_argument);
}
