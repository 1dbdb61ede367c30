#include <cmath>

#include "doctest.h"
#include "maxcurv/geometry.hpp"

using namespace maxcurv;

namespace {
SurfaceSpec homogeneous(int d) {
  return SurfaceSpec(SurfaceFamily::homogeneous_curve, d, 1, 0.0, {1.0}, Dilation::homogeneous(d));
}
}  // namespace

TEST_CASE("surface_point: curve families") {
  CHECK(homogeneous(2).point(1.0) == std::vector<double>{1.0, 1.0});

  const SurfaceSpec half(SurfaceFamily::finite_type_curve, 2, 1, 0.0, {0.5},
                         Dilation::isotropic(2));
  const auto p = half.point(2.0);
  CHECK(p[0] == 2.0);
  CHECK(p[1] == doctest::Approx(2.0));  // 2^2 * (1/2)

  const SurfaceSpec offset(SurfaceFamily::finite_type_curve, 2, 1, 5.0, {1.0},
                           Dilation::isotropic(2));
  const auto q = offset.point(0.0);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == 5.0);
}

TEST_CASE("surface_point: surface families depend on the last coordinate") {
  const SurfaceSpec fts(SurfaceFamily::finite_type_surface, 2, 1, 1.5, {1.0},
                        Dilation::isotropic(3));
  const std::array<double, 2> x{0.25, 0.5};
  const auto p = fts.point(std::span<const double>(x));
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == doctest::Approx(1.5 + 0.25));

  const SurfaceSpec deg(SurfaceFamily::degenerate_surface, 3, 1, 0.0, {2.0},
                        Dilation::normalize({Rational(1), Rational(1), Rational(3)}));
  const auto r = deg.point(std::span<const double>(x));
  CHECK(r[2] == doctest::Approx(2.0 * 0.125));
}

TEST_CASE("family / dilation consistency is validated") {
  CHECK_THROWS_AS(SurfaceSpec(SurfaceFamily::homogeneous_curve, 2, 1, 0.0, {1.0},
                              Dilation::isotropic(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SurfaceSpec(SurfaceFamily::finite_type_curve, 2, 1, 0.0, {1.0},
                              Dilation::homogeneous(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SurfaceSpec(SurfaceFamily::degenerate_surface, 3, 1, 0.0, {1.0},
                              Dilation::isotropic(3)),
                  std::invalid_argument);
  CHECK_NOTHROW(SurfaceSpec(SurfaceFamily::degenerate_surface, 3, 1, 0.0, {1.0},
                            Dilation::normalize({Rational(1), Rational(1), Rational(3)})));
}

TEST_CASE("phi jet conditions are checked on the coefficients") {
  // phi(0) must be nonzero.
  CHECK_THROWS_AS(SurfaceSpec(SurfaceFamily::finite_type_curve, 2, 1, 0.0, {0.0, 1.0},
                              Dilation::isotropic(2)),
                  std::invalid_argument);
  // m = 2 demands phi'(0) = 0 and phi''(0) != 0.
  CHECK_THROWS_AS(SurfaceSpec(SurfaceFamily::finite_type_curve, 2, 2, 0.0, {1.0, 0.5},
                              Dilation::isotropic(2)),
                  std::invalid_argument);
  CHECK_NOTHROW(SurfaceSpec(SurfaceFamily::finite_type_curve, 2, 2, 0.0, {1.0, 0.0, 3.0},
                            Dilation::isotropic(2)));
  // Constant truncations represent the unperturbed curve for any m.
  CHECK_NOTHROW(SurfaceSpec(SurfaceFamily::finite_type_curve, 2, 3, 0.0, {0.5},
                            Dilation::isotropic(2)));
}

TEST_CASE("stationary point") {
  for (int d : {2, 3, 5}) {
    const auto sp = stationary_point(static_cast<double>(d), d);
    CHECK(sp.x_c == doctest::Approx(1.0));
    CHECK(sp.in_support);
  }
  const auto sp = stationary_point(4.0, 2);
  CHECK(sp.x_c == doctest::Approx(2.0));
  CHECK(sp.in_support);
  const auto out = stationary_point(0.75, 3);
  CHECK(out.x_c == doctest::Approx(0.5));
  CHECK(!out.in_support);
  CHECK_THROWS_AS(stationary_point(-1.0, 2), std::domain_error);

  // d/dx (-s x + x^d) vanishes at x_c to machine precision.
  for (double s : {2.5, 3.0, 7.0}) {
    for (int d : {2, 3, 4}) {
      const double xc = stationary_point(s, d).x_c;
      CHECK(std::abs(-s + d * std::pow(xc, d - 1)) <= 1e-12 * s);
    }
  }
}

TEST_CASE("phase value") {
  const std::array<double, 2> xi1{-2.0, 1.0};
  CHECK(phase_value(xi1, 1.0, 2) == doctest::Approx(1.0));
  const std::array<double, 2> xi2{-3.0, 1.0};
  CHECK(phase_value(xi2, 2.0, 3) == doctest::Approx(4.0));

  // Homogeneity of degree 1 in xi.
  for (double lam : {0.5, 2.0, 7.5}) {
    const std::array<double, 2> scaled{lam * xi1[0], lam * xi1[1]};
    CHECK(phase_value(scaled, 1.0, 2) == doctest::Approx(lam * phase_value(xi1, 1.0, 2)));
  }
  const std::array<double, 2> bad{2.0, 1.0};
  CHECK_THROWS_AS(phase_value(bad, 1.0, 2), std::domain_error);
}

TEST_CASE("spec JSON round trip") {
  const SurfaceSpec spec(SurfaceFamily::finite_type_curve, 3, 2, 1.25, {1.0, 0.0, -0.5},
                         Dilation::normalize({Rational(1), Rational(3, 2)}), 0.25);
  const auto j = spec.to_json();
  const auto back = SurfaceSpec::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.family() == spec.family());
  CHECK(back.type_order() == 3);
  CHECK(back.offset() == 1.25);
  CHECK(back.dilation().normalized(1) == Rational(3, 2));
}

TEST_CASE("cutoff profiles") {
  const auto bump = Cutoff::bump(0.5, {0.0});
  CHECK(bump(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump(0.5) == 0.0);
  CHECK(bump(0.51) == 0.0);
  CHECK(bump(-0.49) > 0.0);

  const auto ind = Cutoff::unit_indicator(1);
  CHECK(ind(0.0) == 1.0);
  CHECK(ind(0.999) == 1.0);
  CHECK(ind(1.0) == 0.0);
  CHECK(ind(-0.001) == 0.0);
  CHECK(ind.integral() == 1.0);

  // Bump mass: support integral of exp(-1/(1-u^2)) is about 0.443994 per
  // unit radius.
  CHECK(Cutoff::bump(1.0, {0.0}).integral() == doctest::Approx(0.44399381616).epsilon(1e-6));
  CHECK(Cutoff::bump(0.5, {0.0}).integral() == doctest::Approx(0.5 * 0.44399381616).epsilon(1e-6));
}
