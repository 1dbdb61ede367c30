#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "maxcurv/averaging.hpp"
#include "maxcurv/fit.hpp"
#include "maxcurv/geometry.hpp"
#include "maxcurv/grid_function.hpp"
#include "maxcurv/regions.hpp"

namespace maxcurv {

enum class ExampleTag { S1, S2, S3, S4, S5 };

ExampleTag tag_from_name(const std::string& name);
std::string tag_name(ExampleTag tag);

struct TiltedRect {
  std::array<double, 2> center;
  std::array<double, 2> e1, e2;  // orthonormal axes
  double h1 = 0, h2 = 0;         // half-widths along e1, e2

  bool contains(double x, double y) const {
    const double u = (x - center[0]) * e1[0] + (y - center[1]) * e1[1];
    const double v = (x - center[0]) * e2[0] + (y - center[1]) * e2[1];
    return std::abs(u) <= h1 && std::abs(v) <= h2;
  }
  double area() const { return 4.0 * h1 * h2; }
};

/// A point of the evaluation domain with its quadrature weight and the
/// t-window in which the averaging operator is refined around the witness.
struct NormSample {
  std::array<double, 2> y;
  double weight;
  double t_lo, t_hi;
};

/// A point where the proof's pointwise lower bound is asserted.
struct WitnessSite {
  std::array<double, 2> y;
  double t;
};

struct ExampleOptions {
  int thin_cells = 8;      // cells across the thinnest extent of the set
  int margin_cells = 2;    // rasterization padding absorbed by the 5% tolerance
  int coarse_t = 17;       // coarse [1,2] sampling for the maximal function
  int window_t = 25;       // refined samples inside each witness window
  int norm_x_samples = 512;
  int witness_x_samples = 4096;
  int max_witnesses = 120;
};

struct Example {
  ExampleTag tag;
  int k = 0;
  int d = 2;
  SurfaceSpec spec;       // curve (x, x^d + c) with isotropic dilation
  Cutoff cutoff;          // eta = 1_{[0,1]}
  GridFunction indicator; // rasterized 1_S (padded by margin_cells cells)
  double exact_volume = 0.0;  // |S| before padding
  double lower_bound = 0.0;   // proof's pointwise bound on the domain
  std::array<double, 2> x_window{0.0, 1.0};  // where the integrand can live

  std::vector<NormSample> norm_samples;     // tiles the evaluation domain
  std::vector<WitnessSite> witnesses;       // spaced t_i family
  std::vector<TiltedRect> disjoint_family;  // D_{t_i}, pairwise disjoint

  // Predicted exponents of 2^k: lhs = lhs_const + lhs_inv_q / q,
  // rhs = rhs_inv_p / p.
  double lhs_const = 0.0;
  double lhs_inv_q = 0.0;
  double rhs_inv_p = 0.0;

  double predicted_lhs_slope(double q) const { return lhs_const + lhs_inv_q / q; }
  double predicted_rhs_slope(double p) const { return rhs_inv_p / p; }
};

Example build_example(ExampleTag tag, int k, int d, const ExampleOptions& opts = {});

/// The necessary condition C1..C5 attached to the family, as a half plane
/// in (1/p, 1/q) that bounded operators must satisfy.
HalfPlane predicted_condition(ExampleTag tag, int d);

/// True iff the point violates the family's condition, i.e. the family
/// certifies unboundedness there.
bool check_sharpness(ExampleTag tag, int d, const ExponentPoint& pt);

/// || M(1_S) ||_{L^q(D)} via the example's domain tiling.
double measure_lhs_norm(const Example& ex, double q, const ExampleOptions& opts = {});

struct ScalingRow {
  int k;
  double lhs_norm;
  double rhs_norm;
};

struct ScalingResult {
  ExampleTag tag;
  int d;
  double p, q;
  std::vector<ScalingRow> rows;
  LineFit lhs_fit;  // log2 lhs vs k
  LineFit rhs_fit;
  double predicted_lhs = 0.0;
  double predicted_rhs = 0.0;
};

ScalingResult measure_scaling(ExampleTag tag, int d, double p, double q, std::span<const int> ks,
                              const ExampleOptions& opts = {});

/// Smallest lower-bound margin over all witness sites: min over sites of
/// (measured average at the witness t) / lower_bound.
double witness_margin(const Example& ex, const ExampleOptions& opts = {});

}  // namespace maxcurv
