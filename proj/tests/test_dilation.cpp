#include <cmath>
#include <random>

#include "doctest.h"
#include "maxcurv/dilation.hpp"

using namespace maxcurv;

TEST_CASE("normalize keeps already-normalized exponents") {
  const auto d = Dilation::normalize({Rational(1), Rational(2)});
  CHECK(d.normalized(0) == Rational(1));
  CHECK(d.normalized(1) == Rational(2));
}

TEST_CASE("normalize divides by the minimum") {
  const auto d = Dilation::normalize({Rational(2), Rational(4), Rational(6)});
  CHECK(d.normalized(0) == Rational(1));
  CHECK(d.normalized(1) == Rational(2));
  CHECK(d.normalized(2) == Rational(3));
  CHECK(d.reparam_exponent_value() == 2.0);
}

TEST_CASE("homogeneous dilation is a fixed point of normalization") {
  for (long long deg : {2, 3, 5}) {
    const auto d = Dilation::homogeneous(deg);
    CHECK(d.normalized(0) == Rational(1));
    CHECK(d.normalized(1) == Rational(deg));
  }
}

TEST_CASE("normalization invariants on random rational exponents") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long long> num(1, 40), den(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> a;
    const int n = 2 + static_cast<int>(rng() % 2);
    for (int j = 0; j < n; ++j) a.emplace_back(num(rng), den(rng));
    const auto d = Dilation::normalize(a);
    Rational min_b = d.normalized(0);
    for (int j = 0; j < n; ++j) {
      CHECK(d.normalized(j) >= Rational(1));
      if (d.normalized(j) < min_b) min_b = d.normalized(j);
    }
    CHECK(min_b == Rational(1));
  }
}

TEST_CASE("normalize rejects bad input") {
  CHECK_THROWS_AS(Dilation::normalize({}), std::invalid_argument);
  CHECK_THROWS_AS(Dilation::normalize({Rational(1), Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(Dilation::normalize({Rational(-1, 2)}), std::invalid_argument);
}

TEST_CASE("cube side lengths") {
  const auto d12 = Dilation::normalize({Rational(1), Rational(2)});
  auto s = d12.cube_side_lengths(3);
  CHECK(s[0] == 8.0);
  CHECK(s[1] == 64.0);

  const auto d32 = Dilation::normalize({Rational(1), Rational(3, 2)});
  s = d32.cube_side_lengths(-2);
  CHECK(s[0] == 0.25);
  CHECK(s[1] == 0.125);
  s = d32.cube_side_lengths(1);
  CHECK(s[0] == 2.0);
  CHECK(s[1] == 4.0);
}

TEST_CASE("scale_from_side recovers the scale index") {
  const auto d12 = Dilation::normalize({Rational(1), Rational(2)});
  CHECK(d12.scale_from_side(8.0, 0) == 3);
  CHECK(d12.scale_from_side(64.0, 1) == 3);

  const auto d32 = Dilation::normalize({Rational(1), Rational(3, 2)});
  const auto none = d32.scale_from_side(2.0, 1);
  CHECK(!none.has_value());
  // Independent oracle: exhaustive scan of k in [-64, 64].
  int hits = 0;
  for (long long k = kMinScale; k <= kMaxScale; ++k)
    if (d32.ceil_kb(k, 1) == 1) ++hits;
  CHECK(hits == 0);

  CHECK_THROWS_AS(d12.scale_from_side(3.0, 0), std::invalid_argument);
}

TEST_CASE("separation of scales makes scale_from_side injective") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> num(1, 9), den(1, 4), kk(-20, 20);
  for (int trial = 0; trial < 500; ++trial) {
    const Rational extra(num(rng), den(rng));
    const auto d = Dilation::normalize({Rational(1), Rational(1) + extra});
    const long long k = kk(rng), k2 = kk(rng);
    if (k == k2) continue;
    CHECK(d.ceil_kb(k, 1) != d.ceil_kb(k2, 1));
  }
}

TEST_CASE("scale range is clamped") {
  const auto d = Dilation::isotropic(2);
  CHECK_THROWS_AS(d.ceil_kb(65, 0), std::domain_error);
  CHECK_THROWS_AS(d.cube_side_lengths(-65), std::domain_error);
}

TEST_CASE("real-exponent fallback normalizes with a guard") {
  const auto d = Dilation::normalize_real({0.7, 0.7 * M_PI});
  CHECK(d.normalized_value(0) == 1.0);
  CHECK(d.normalized_value(1) == doctest::Approx(M_PI));
  CHECK(d.ceil_kb(2, 1) == 7);  // ceil(2 pi) = 7
  CHECK(d.ceil_kb(-1, 1) == -3);
}

TEST_CASE("rho_delta") {
  const auto d12 = Dilation::normalize({Rational(1), Rational(2)});
  const std::vector<double> x{0.0, 0.0}, y{3.0, 4.0};
  CHECK(rho_delta(x, x, d12) == 0.0);
  CHECK(rho_delta(x, y, d12) == doctest::Approx(3.0));
  CHECK(rho_delta(x, y, d12) == rho_delta(y, x, d12));

  const auto iso = Dilation::isotropic(2);
  CHECK(rho_delta(x, y, iso) == doctest::Approx(4.0));  // l_infinity

  const std::vector<double> z{1.0};
  CHECK_THROWS_AS(rho_delta(x, z, d12), std::invalid_argument);
}

TEST_CASE("rho_delta quasi-triangle inequality") {
  const auto d = Dilation::normalize({Rational(1), Rational(2), Rational(3)});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(3), b(3), c(3);
    for (int j = 0; j < 3; ++j) {
      a[j] = unif(rng);
      b[j] = unif(rng);
      c[j] = unif(rng);
    }
    const double lhs = rho_delta(a, c, d);
    const double rhs = rho_delta(a, b, d) + rho_delta(b, c, d);
    CHECK(lhs <= 2.0 * rhs + 1e-12);
  }
}

TEST_CASE("dilate_point") {
  const auto d = Dilation::normalize({Rational(1), Rational(2)});
  const std::vector<double> p{1.0, 1.0};
  CHECK(dilate_point(d, 1.0, p) == p);
  const auto q = dilate_point(d, 2.0, p);
  CHECK(q[0] == 2.0);
  CHECK(q[1] == 4.0);
  CHECK_THROWS_AS(dilate_point(d, 0.0, p), std::domain_error);

  // Group law: dilate(t) after dilate(s) equals dilate(t s).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = unif(rng), s = unif(rng);
    const auto one = dilate_point(d, t, dilate_point(d, s, p));
    const auto two = dilate_point(d, t * s, p);
    CHECK(one[0] == doctest::Approx(two[0]).epsilon(1e-12));
    CHECK(one[1] == doctest::Approx(two[1]).epsilon(1e-12));
  }
}
