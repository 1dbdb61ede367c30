#include "maxcurv/regions.hpp"

#include <stdexcept>

namespace maxcurv {

ExponentPoint::ExponentPoint(Rational x, Rational y) : inv_p(x), inv_q(y) {
  if (inv_p < Rational(0) || inv_p > Rational(1) || inv_q < Rational(0) || inv_q > Rational(1))
    throw std::invalid_argument("ExponentPoint: coordinates must lie in [0, 1]");
}

DeltaRegion delta_from_name(const std::string& name) {
  if (name == "delta0") return DeltaRegion::delta0;
  if (name == "delta1") return DeltaRegion::delta1;
  if (name == "delta2") return DeltaRegion::delta2;
  if (name == "delta3") return DeltaRegion::delta3;
  throw std::invalid_argument("unknown region: " + name);
}

std::string delta_name(DeltaRegion which) {
  switch (which) {
    case DeltaRegion::delta0: return "delta0";
    case DeltaRegion::delta1: return "delta1";
    case DeltaRegion::delta2: return "delta2";
    case DeltaRegion::delta3: return "delta3";
  }
  throw std::logic_error("delta_name: bad region");
}

Region delta_region(DeltaRegion which, int d) {
  if (which != DeltaRegion::delta0 && d < 2)
    throw std::invalid_argument("delta_region: d must be >= 2");
  Region r;
  r.name = delta_name(which);
  const HalfPlane lower_diag{Rational(1, 2), Rational(-1), Rational(0), true};  // 1/(2p) < 1/q
  const HalfPlane upper_diag{Rational(-1), Rational(1), Rational(0), false};    // 1/q <= 1/p
  r.constraints.push_back(lower_diag);
  r.constraints.push_back(upper_diag);
  switch (which) {
    case DeltaRegion::delta0:
      r.constraints.push_back({Rational(3), Rational(-1), Rational(1), true});  // 1/q > 3/p - 1
      break;
    case DeltaRegion::delta1:
      r.constraints.push_back({Rational(3), Rational(-1), Rational(1), true});
      r.constraints.push_back({Rational(1), Rational(-1), Rational(1, d + 1), true});
      break;
    case DeltaRegion::delta2:
      r.constraints.push_back({Rational(d + 1), Rational(-1), Rational(1), true});
      break;
    case DeltaRegion::delta3:
      r.constraints.push_back({Rational(2), Rational(-1), Rational(1), true});
      r.constraints.push_back({Rational(1), Rational(-1), Rational(1, d + 1), true});
      break;
  }
  r.exceptional.emplace_back(Rational(0), Rational(0));
  if (which == DeltaRegion::delta3) r.exceptional.emplace_back(Rational(1), Rational(1));
  return r;
}

bool in_region(const Region& region, const ExponentPoint& pt) {
  bool all = true;
  for (const auto& h : region.constraints)
    if (!h.holds(pt)) {
      all = false;
      break;
    }
  if (all) return true;
  for (const auto& e : region.exceptional)
    if (e == pt) return true;
  return false;
}

bool in_region(DeltaRegion which, int d, const ExponentPoint& pt) {
  return in_region(delta_region(which, d), pt);
}

Region dual_region(const Region& region) {
  Region out;
  out.name = region.name + "_dual";
  for (const auto& h : region.constraints)
    out.constraints.push_back({h.a, -h.b, h.c - h.b, h.strict});
  for (const auto& e : region.exceptional)
    out.exceptional.emplace_back(e.inv_p, Rational(1) - e.inv_q);
  return out;
}

std::string order_name(RegionOrder order) {
  switch (order) {
    case RegionOrder::equal: return "equal";
    case RegionOrder::proper_subset: return "proper_subset";
    case RegionOrder::proper_superset: return "proper_superset";
    case RegionOrder::incomparable: return "incomparable";
  }
  throw std::logic_error("order_name: bad order");
}

namespace {

struct Bound {
  Rational value;
  bool strict;
  bool present = false;
};

void tighten_upper(Bound& b, const Rational& v, bool strict) {
  if (!b.present) {
    b = Bound{v, strict, true};
  } else if (v < b.value) {
    b.value = v;
    b.strict = strict;
  } else if (v == b.value) {
    b.strict = b.strict || strict;
  }
}

void tighten_lower(Bound& b, const Rational& v, bool strict) {
  if (!b.present) {
    b = Bound{v, strict, true};
  } else if (v > b.value) {
    b.value = v;
    b.strict = strict;
  } else if (v == b.value) {
    b.strict = b.strict || strict;
  }
}

/// Candidate values inside an interval (lo, hi) with given end strictness.
std::vector<Rational> interval_candidates(const Bound& lo, const Bound& hi) {
  std::vector<Rational> out;
  if (lo.value > hi.value) return out;
  if (lo.value == hi.value) {
    if (!lo.strict && !hi.strict) out.push_back(lo.value);
    return out;
  }
  if (!lo.strict) out.push_back(lo.value);
  if (!hi.strict) out.push_back(hi.value);
  const Rational span = hi.value - lo.value;
  out.push_back(lo.value + span * Rational(1, 2));
  out.push_back(lo.value + span * Rational(1, 4));
  out.push_back(lo.value + span * Rational(3, 4));
  out.push_back(lo.value + span * Rational(1, 7));
  out.push_back(lo.value + span * Rational(6, 7));
  return out;
}

/// Exact feasibility of a system of half planes in [0,1]^2 via
/// Fourier-Motzkin elimination of y; returns candidate solution points.
std::vector<ExponentPoint> solve_system(std::vector<HalfPlane> sys) {
  // Box constraints.
  sys.push_back({Rational(1), Rational(0), Rational(1), false});    // x <= 1
  sys.push_back({Rational(-1), Rational(0), Rational(0), false});   // x >= 0
  sys.push_back({Rational(0), Rational(1), Rational(1), false});    // y <= 1
  sys.push_back({Rational(0), Rational(-1), Rational(0), false});   // y >= 0

  struct YBound {
    Rational a, c;  // y bound (c - a x) / |b| after normalization
    Rational babs;
    bool strict;
  };
  std::vector<YBound> uppers, lowers;          // y <= / >= (c - a x) / b
  std::vector<HalfPlane> x_constraints;        // b == 0
  for (const auto& h : sys) {
    if (h.b == Rational(0))
      x_constraints.push_back(h);
    else if (h.b > Rational(0))
      uppers.push_back({h.a, h.c, h.b, h.strict});
    else
      lowers.push_back({-h.a, -h.c, -h.b, h.strict});
  }
  // Eliminate y: every lower <= every upper gives a constraint on x.
  for (const auto& lo : lowers)
    for (const auto& up : uppers) {
      // (c_l - a_l x)/b_l <= (c_u - a_u x)/b_u with b_l, b_u > 0
      const Rational coeff = up.a * lo.babs - lo.a * up.babs;  // coeff * x <= rhs
      const Rational rhs = up.c * lo.babs - lo.c * up.babs;
      x_constraints.push_back({coeff, Rational(0), rhs, lo.strict || up.strict});
    }
  // 1D feasibility in x. Constraint form: a x <= / < c.
  Bound xlo, xhi;
  for (const auto& h : x_constraints) {
    if (h.a == Rational(0)) {
      const bool ok = h.strict ? Rational(0) < h.c : Rational(0) <= h.c;
      if (!ok) return {};
      continue;
    }
    const Rational edge = h.c / h.a;
    if (h.a > Rational(0))
      tighten_upper(xhi, edge, h.strict);
    else
      tighten_lower(xlo, edge, h.strict);
  }
  std::vector<ExponentPoint> candidates;
  for (const Rational& x : interval_candidates(xlo, xhi)) {
    Bound ylo, yhi;
    bool bad = false;
    for (const auto& up : uppers) tighten_upper(yhi, (up.c - up.a * x) / up.babs, up.strict);
    for (const auto& lo : lowers) tighten_lower(ylo, (lo.c - lo.a * x) / lo.babs, lo.strict);
    for (const auto& h : x_constraints) {
      const Rational lhs = h.a * x;
      if (!(h.strict ? lhs < h.c : lhs <= h.c)) bad = true;
    }
    if (bad) continue;
    for (const Rational& y : interval_candidates(ylo, yhi)) {
      bool ok = true;
      for (const auto& h : sys) {
        const Rational lhs = h.a * x + h.b * y;
        if (!(h.strict ? lhs < h.c : lhs <= h.c)) {
          ok = false;
          break;
        }
      }
      if (ok) candidates.emplace_back(x, y);
    }
  }
  return candidates;
}

HalfPlane negate(const HalfPlane& h) {
  // not(a x + b y < c)  is  -a x - b y <= -c;  not(<=) is strict.
  return HalfPlane{-h.a, -h.b, -h.c, !h.strict};
}

/// A point of A \ B, via the symbolic route.
std::optional<ExponentPoint> difference_witness(const Region& a, const Region& b) {
  for (const auto& h : b.constraints) {
    std::vector<HalfPlane> sys = a.constraints;
    sys.push_back(negate(h));
    for (const auto& pt : solve_system(std::move(sys)))
      if (in_region(a, pt) && !in_region(b, pt)) return pt;
  }
  for (const auto& e : a.exceptional)
    if (!in_region(b, e)) return e;
  return std::nullopt;
}

std::optional<ExponentPoint> scan_witness(const Region& a, const Region& b, int den) {
  for (long long i = 0; i <= den; ++i)
    for (long long j = 0; j <= den; ++j) {
      const ExponentPoint pt(Rational(i, den), Rational(j, den));
      if (in_region(a, pt) && !in_region(b, pt)) return pt;
    }
  return std::nullopt;
}

}  // namespace

RegionComparison compare_regions(const Region& a, const Region& b, int sample_denominator) {
  if (sample_denominator < 1) throw std::invalid_argument("compare_regions: samples must be >= 1");
  auto ab = difference_witness(a, b);
  auto ba = difference_witness(b, a);
  // The rational grid scan is a safety net for the symbolic verdict.
  if (!ab) {
    if (auto s = scan_witness(a, b, sample_denominator))
      throw std::logic_error("compare_regions: symbolic route missed a witness in A \\ B");
  }
  if (!ba) {
    if (auto s = scan_witness(b, a, sample_denominator))
      throw std::logic_error("compare_regions: symbolic route missed a witness in B \\ A");
  }
  RegionComparison out;
  out.witness_in_a_only = ab;
  out.witness_in_b_only = ba;
  if (!ab && !ba)
    out.order = RegionOrder::equal;
  else if (!ab)
    out.order = RegionOrder::proper_subset;
  else if (!ba)
    out.order = RegionOrder::proper_superset;
  else
    out.order = RegionOrder::incomparable;
  return out;
}

std::vector<BoundarySegment> boundary_segments(const Region& region) {
  std::vector<BoundarySegment> out;
  for (const auto& h : region.constraints) {
    // Clip a x + b y = c to the unit square.
    std::vector<std::pair<double, double>> pts;
    const double a = h.a.value(), b = h.b.value(), c = h.c.value();
    auto push_if_valid = [&](double x, double y) {
      if (x < -1e-12 || x > 1 + 1e-12 || y < -1e-12 || y > 1 + 1e-12) return;
      for (auto& p : pts)
        if (std::abs(p.first - x) < 1e-12 && std::abs(p.second - y) < 1e-12) return;
      pts.emplace_back(x, y);
    };
    if (b != 0.0) {
      push_if_valid(0.0, c / b);
      push_if_valid(1.0, (c - a) / b);
    }
    if (a != 0.0) {
      push_if_valid(c / a, 0.0);
      push_if_valid((c - b) / a, 1.0);
    }
    if (pts.size() >= 2) {
      const std::string label = h.a.str() + "*x+" + h.b.str() + "*y" + (h.strict ? "<" : "<=") +
                                h.c.str();
      out.push_back({label, pts[0].first, pts[0].second, pts[1].first, pts[1].second});
    }
  }
  return out;
}

}  // namespace maxcurv
