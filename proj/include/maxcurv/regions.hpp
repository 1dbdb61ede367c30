#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxcurv/rational.hpp"

namespace maxcurv {

/// A point (1/p, 1/q) with both coordinates rational in [0, 1].
struct ExponentPoint {
  Rational inv_p;
  Rational inv_q;

  ExponentPoint(Rational x, Rational y);

  friend bool operator==(const ExponentPoint& a, const ExponentPoint& b) {
    return a.inv_p == b.inv_p && a.inv_q == b.inv_q;
  }
};

/// One half-plane constraint a*(1/p) + b*(1/q) {<, <=} c.
struct HalfPlane {
  Rational a;
  Rational b;
  Rational c;
  bool strict = true;

  bool holds(const ExponentPoint& pt) const {
    const Rational lhs = a * pt.inv_p + b * pt.inv_q;
    return strict ? lhs < c : lhs <= c;
  }
};

/// An exponent region: intersection of half planes inside [0,1]^2, united
/// with finitely many exceptional points.
struct Region {
  std::string name;
  std::vector<HalfPlane> constraints;
  std::vector<ExponentPoint> exceptional;
};

enum class DeltaRegion { delta0, delta1, delta2, delta3 };

DeltaRegion delta_from_name(const std::string& name);
std::string delta_name(DeltaRegion which);

/// The regions Delta_0 .. Delta_3 (d is ignored by Delta_0).
Region delta_region(DeltaRegion which, int d);

bool in_region(const Region& region, const ExponentPoint& pt);
bool in_region(DeltaRegion which, int d, const ExponentPoint& pt);

/// L' = {(1/p, 1/q') : (1/p, 1 - 1/q') in L}.
Region dual_region(const Region& region);

enum class RegionOrder { equal, proper_subset, proper_superset, incomparable };

std::string order_name(RegionOrder order);

struct RegionComparison {
  RegionOrder order;
  /// A point of A \ B, when nonempty (similarly B \ A).
  std::optional<ExponentPoint> witness_in_a_only;
  std::optional<ExponentPoint> witness_in_b_only;
};

/// Exact comparison of two regions. The symbolic route decides emptiness of
/// the set differences by Fourier-Motzkin elimination with strictness
/// tracking; a rational grid scan at denominator sample_denominator
/// cross-checks the verdict and supplies small witnesses.
RegionComparison compare_regions(const Region& a, const Region& b, int sample_denominator = 120);

/// Boundary polylines of the region constraints clipped to [0,1]^2, for
/// CSV export (pairs of segment endpoints per constraint).
struct BoundarySegment {
  std::string constraint;
  double x0, y0, x1, y1;
};
std::vector<BoundarySegment> boundary_segments(const Region& region);

}  // namespace maxcurv
