#include <cmath>
#include <random>

#include "doctest.h"
#include "maxcurv/delta_grid.hpp"

using namespace maxcurv;

namespace {

Dilation random_dilation(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(1, 7), den(1, 3);
  switch (rng() % 3) {
    case 0: return Dilation::isotropic(2);
    case 1: return Dilation::normalize({Rational(1), Rational(num(rng), den(rng)) + Rational(1)});
    default: return Dilation::normalize({Rational(1), Rational(2)});
  }
}

std::vector<int> random_shift(std::mt19937_64& rng, int n) {
  std::vector<int> s(n);
  for (auto& v : s) v = static_cast<int>(rng() % 3);
  return s;
}

}  // namespace

TEST_CASE("realized box matches the shifted-grid formula at even exponents") {
  // k = 0 has ceil(k b_j) = 0 (even), so the sign convention reproduces the
  // plain (i + s/3, i + 1 + s/3) cell.
  const auto dil = Dilation::isotropic(2);
  const DeltaCube cube(dil, 0, {2, -1}, {1, 2});
  CHECK(cube.lower(0) == doctest::Approx(2.0 + 1.0 / 3.0).epsilon(1e-15));
  CHECK(cube.upper(0) == doctest::Approx(3.0 + 1.0 / 3.0).epsilon(1e-15));
  CHECK(cube.lower(1) == doctest::Approx(-1.0 + 2.0 / 3.0).epsilon(1e-15));
  CHECK(cube.side(0) == 1.0);
  CHECK(cube.volume() == 1.0);
}

TEST_CASE("side lengths are bit-exact powers of two") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dil = random_dilation(rng);
    const long long k = static_cast<long long>(rng() % 13) - 6;
    const DeltaCube cube(dil, k, {0, 0}, random_shift(rng, 2));
    for (int j = 0; j < 2; ++j)
      CHECK(cube.side(j) == std::ldexp(1.0, static_cast<int>(dil.ceil_kb(k, j))));
  }
}

TEST_CASE("grid_cube_containing: spec examples") {
  const auto iso = Dilation::isotropic(2);
  {
    const std::vector<double> x{0.5, 0.5};
    const auto cube = DeltaCube::containing(x, 0, {0, 0}, iso);
    CHECK(cube.position() == std::vector<long long>{0, 0});
    CHECK(cube.contains_point(x));
  }
  {
    const std::vector<double> x{0.0, 0.0};
    const auto cube = DeltaCube::containing(x, 0, {1, 0}, iso);
    CHECK(cube.position() == std::vector<long long>{-1, 0});
    // Interval arithmetic check in exact thirds units: the cell is
    // (i + 1/3, i + 4/3) = (-2/3, 1/3), which contains 0.
    CHECK(cube.edge_thirds(0) == -2);
    CHECK(compare_scaled(cube.edge_thirds(0), cube.side_exponent(0), 0, 0) <= 0);
    CHECK(compare_scaled(0, 0, cube.edge_thirds(0) + 3, cube.side_exponent(0)) < 0);
    CHECK(cube.contains_point(x));
  }
}

TEST_CASE("containment is idempotent at the center") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-40.0, 40.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto dil = random_dilation(rng);
    const long long k = static_cast<long long>(rng() % 9) - 4;
    const auto shift = random_shift(rng, 2);
    const std::vector<double> x{unif(rng), unif(rng)};
    const auto cube = DeltaCube::containing(x, k, shift, dil);
    CHECK(cube.contains_point(x));
    const auto again = DeltaCube::containing(cube.center(), k, shift, dil);
    CHECK(again == cube);
  }
}

TEST_CASE("exactly one cube of the grid contains a point") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(-20.0, 20.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto dil = random_dilation(rng);
    const long long k = static_cast<long long>(rng() % 7) - 3;
    const auto shift = random_shift(rng, 2);
    const std::vector<double> x{unif(rng), unif(rng)};
    const auto cube = DeltaCube::containing(x, k, shift, dil);
    CHECK(cube.contains_point(x));
    // Neighbors in each direction must not contain x.
    for (int j = 0; j < 2; ++j)
      for (long long step : {-1, 1}) {
        auto pos = cube.position();
        pos[j] += step;
        const DeltaCube other(dil, k, pos, shift);
        CHECK(!other.contains_point(x));
        CHECK(cube.disjoint_from(other));
      }
  }
}

TEST_CASE("nestedness: cubes of one shifted grid are disjoint or nested") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long long> pos(-50, 50);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto dil = random_dilation(rng);
    const auto shift = random_shift(rng, 2);
    const long long k1 = static_cast<long long>(rng() % 9) - 4;
    const long long k2 = static_cast<long long>(rng() % 9) - 4;
    const DeltaCube a(dil, k1, {pos(rng) % 8, pos(rng) % 8}, shift);
    const DeltaCube b(dil, k2, {pos(rng) % 8, pos(rng) % 8}, shift);
    const bool disjoint = a.disjoint_from(b);
    const bool a_in_b = b.contains_cube(a);
    const bool b_in_a = a.contains_cube(b);
    CHECK((disjoint || a_in_b || b_in_a));
    if (disjoint) CHECK(!(a_in_b && b_in_a));
  }
}

TEST_CASE("children partition the parent") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long long> pos(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dil = random_dilation(rng);
    const long long k = static_cast<long long>(rng() % 7) - 3;
    const DeltaCube cube(dil, k, {pos(rng), pos(rng)}, random_shift(rng, 2));
    const auto kids = cube.children();
    double vol = 0.0;
    for (const auto& kid : kids) {
      CHECK(cube.contains_cube(kid));
      CHECK(kid.parent() == cube);
      vol += kid.volume();
    }
    CHECK(vol == doctest::Approx(cube.volume()).epsilon(1e-12));
    for (std::size_t i = 0; i < kids.size(); ++i)
      for (std::size_t j = i + 1; j < kids.size(); ++j) CHECK(kids[i].disjoint_from(kids[j]));
  }
}

TEST_CASE("one-third cover partitions the cube exactly") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long long> pos(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto dil = random_dilation(rng);
    const long long k = static_cast<long long>(rng() % 7) - 3;
    const DeltaCube cube(dil, k, {pos(rng), pos(rng)}, random_shift(rng, 2));
    const auto pieces = one_third_cover(cube);
    CHECK(pieces.size() == 9);

    // Exact tiling per coordinate, in integer thirds units: the pieces'
    // intervals are [T + gamma + 1, T + gamma + 2) for gamma in {-1, 0, 1},
    // which tile [T, T + 3).
    double vol = 0.0;
    for (const auto& piece : pieces) {
      vol += piece.piece.volume();
      for (int j = 0; j < 2; ++j) {
        const long long t_host = piece.host.edge_thirds(j);
        CHECK(t_host == cube.edge_thirds(j) + piece.gamma[j]);
        CHECK(piece.host.side_exponent(j) == cube.side_exponent(j));
        // The piece is the central third of its host cube.
        CHECK(piece.piece.lower[j] ==
              doctest::Approx(piece.host.lower(j) + piece.host.side(j) / 3.0).epsilon(1e-14));
        CHECK(piece.piece.side(j) == doctest::Approx(piece.host.side(j) / 3.0).epsilon(1e-14));
      }
    }
    CHECK(vol == doctest::Approx(cube.volume()).epsilon(1e-12));
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j)
        CHECK(!pieces[i].piece.intersects(pieces[j].piece));
  }
}

TEST_CASE("one-third cover in one dimension gives the three thirds") {
  const auto dil = Dilation::isotropic(1);
  const DeltaCube cube(dil, 0, {0}, {0});  // [0, 1)
  const auto pieces = one_third_cover(cube);
  REQUIRE(pieces.size() == 3);
  CHECK(pieces[0].gamma == std::vector<int>{-1});
  CHECK(pieces[0].piece.lower[0] == doctest::Approx(0.0));
  CHECK(pieces[0].piece.upper[0] == doctest::Approx(1.0 / 3.0));
  CHECK(pieces[1].piece.lower[0] == doctest::Approx(1.0 / 3.0));
  CHECK(pieces[2].piece.upper[0] == doctest::Approx(1.0));
  // Each piece's host belongs to a shifted grid with s in {0, 1/3, 2/3}.
  for (const auto& piece : pieces) {
    CHECK(piece.host.shift_thirds()[0] >= 0);
    CHECK(piece.host.shift_thirds()[0] <= 2);
  }
}

TEST_CASE("measured box basics") {
  const MeasuredBox box({0.0, 0.0}, {2.0, 3.0});
  CHECK(box.volume() == 6.0);
  const std::vector<double> inside{1.0, 2.9}, outside{2.0, 1.0};
  CHECK(box.contains(inside));
  CHECK(!box.contains(outside));  // half-open
  CHECK_THROWS_AS(MeasuredBox({0.0}, {-1.0}), std::invalid_argument);
}

TEST_CASE("half-open boundary: edge points belong to the upper cube") {
  const auto iso = Dilation::isotropic(2);
  const std::vector<double> x{1.0, 0.25};
  const auto cube = DeltaCube::containing(x, 0, {0, 0}, iso);
  CHECK(cube.position() == std::vector<long long>{1, 0});
  CHECK(cube.contains_point(x));
  const DeltaCube below(iso, 0, {0, 0}, {0, 0});
  CHECK(!below.contains_point(x));
}
