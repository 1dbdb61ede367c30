#include "maxcurv/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxcurv/parallel.hpp"

namespace maxcurv {

ExampleTag tag_from_name(const std::string& name) {
  if (name == "S1" || name == "s1") return ExampleTag::S1;
  if (name == "S2" || name == "s2") return ExampleTag::S2;
  if (name == "S3" || name == "s3") return ExampleTag::S3;
  if (name == "S4" || name == "s4") return ExampleTag::S4;
  if (name == "S5" || name == "s5") return ExampleTag::S5;
  throw std::invalid_argument("unknown example family: " + name);
}

std::string tag_name(ExampleTag tag) {
  switch (tag) {
    case ExampleTag::S1: return "S1";
    case ExampleTag::S2: return "S2";
    case ExampleTag::S3: return "S3";
    case ExampleTag::S4: return "S4";
    case ExampleTag::S5: return "S5";
  }
  throw std::logic_error("tag_name: bad tag");
}

namespace {

double pw2(int e) { return std::ldexp(1.0, e); }

SurfaceSpec example_curve(int d, double c) {
  return SurfaceSpec(SurfaceFamily::finite_type_curve, d, 1, c, {1.0}, Dilation::isotropic(2), 1.0);
}

GridFunction ones_box(double lx, double ux, double ly, double uy, int rx, int ry, int margin) {
  const double cx = (ux - lx) / rx, cy = (uy - ly) / ry;
  MeasuredBox box({lx - margin * cx, ly - margin * cy}, {ux + margin * cx, uy + margin * cy});
  return GridFunction::constant(box, {rx + 2 * margin, ry + 2 * margin}, 1.0);
}

/// Uniform midpoint samples of an axis box domain, with per-sample t-window.
void box_samples(Example& ex, const MeasuredBox& domain, int nx, int ny,
                 const std::function<std::array<double, 2>(const std::array<double, 2>&)>& window) {
  const double wx = domain.side(0) / nx, wy = domain.side(1) / ny;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      NormSample s;
      s.y = {domain.lower[0] + (i + 0.5) * wx, domain.lower[1] + (j + 0.5) * wy};
      s.weight = wx * wy;
      const auto tw = window(s.y);
      s.t_lo = tw[0];
      s.t_hi = tw[1];
      ex.norm_samples.push_back(s);
    }
}

void build_s1(Example& ex, int k, int d, const ExampleOptions& opts) {
  ex.indicator = ones_box(-1.0, 1.0, -pw2(k), pw2(k), 16, 128, opts.margin_cells);
  ex.exact_volume = 4.0 * pw2(k);
  ex.lower_bound = 1.0;
  ex.x_window = {0.0, 1.0};
  ex.lhs_const = 0.0;
  ex.lhs_inv_q = 1.0;
  ex.rhs_inv_p = 1.0;
  MeasuredBox domain({0.0, 0.0}, {1.0, pw2(k)});
  box_samples(ex, domain, 8, 64, [](const std::array<double, 2>&) {
    return std::array<double, 2>{1.0, 1.0};
  });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 12; ++j)
      ex.witnesses.push_back({{(i + 0.5) / 4.0, (j + 0.5) * pw2(k) / 12.0}, 1.0});
  (void)d;
}

void build_s2(Example& ex, int k, int d, const ExampleOptions& opts) {
  const double r = pw2(-k);
  const int thin = std::max(opts.thin_cells, 16);
  const double cell = r / thin;
  const double lo = -1.0 - 4.0 * r, hi = 4.0 * r;
  const int res = static_cast<int>(std::ceil((hi - lo) / cell));
  GridFunction f(MeasuredBox({lo, lo}, {lo + res * cell, lo + res * cell}),
                 {res, res});
  // Paint the r-neighborhood of the curve {(-x, -x^d)}. One cell diagonal of
  // padding keeps the witness integrand clear of the interpolation ramp while
  // inflating the tube area as little as possible (the endcap disks already
  // steepen the volume fit at small k).
  const double paint = r + cell * std::sqrt(2.0) * 1.01;
  const int reach = static_cast<int>(std::ceil(paint / cell)) + 1;
  const int curve_samples = static_cast<int>(std::ceil(2.0 / (cell / 3.0)));
  for (int s = 0; s <= curve_samples; ++s) {
    const double x = static_cast<double>(s) / curve_samples;
    const double px = -x, py = -std::pow(x, d);
    const int ci = static_cast<int>(std::floor((px - f.box().lower[0]) / cell));
    const int cj = static_cast<int>(std::floor((py - f.box().lower[1]) / cell));
    for (int i = std::max(0, ci - reach); i <= std::min(res - 1, ci + reach); ++i)
      for (int j = std::max(0, cj - reach); j <= std::min(res - 1, cj + reach); ++j) {
        const double gx = f.box().lower[0] + (i + 0.5) * cell;
        const double gy = f.box().lower[1] + (j + 0.5) * cell;
        if ((gx - px) * (gx - px) + (gy - py) * (gy - py) <= paint * paint) {
          const std::array<int, 2> idx{i, j};
          f[f.flat_index(idx)] = 1.0;
        }
      }
  }
  ex.indicator = std::move(f);
  double count = 0;
  for (double v : ex.indicator.values()) count += v;
  ex.exact_volume = count * ex.indicator.cell_measure();
  ex.lower_bound = 1.0;
  ex.x_window = {0.0, 1.0};
  ex.lhs_const = 0.0;
  ex.lhs_inv_q = -2.0;
  ex.rhs_inv_p = -1.0;
  // Disk B(0, r): midpoint lattice restricted to the disk.
  const int n = 12;
  const double w = 2.0 * r / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::array<double, 2> y{-r + (i + 0.5) * w, -r + (j + 0.5) * w};
      if (y[0] * y[0] + y[1] * y[1] > r * r) continue;
      ex.norm_samples.push_back({y, w * w, 1.0, std::min(2.0, 1.0 + 4.0 * r)});
      if (ex.witnesses.size() < 25 && (i + j) % 3 == 0) ex.witnesses.push_back({y, 1.0});
    }
}

void build_s3(Example& ex, int k, int d, const ExampleOptions& opts) {
  const double sx = pw2(-k), sy = pw2(-d * k);
  ex.indicator = ones_box(-sx, sx, -sy, sy, 16, 16, opts.margin_cells);
  ex.exact_volume = 4.0 * sx * sy;
  ex.lower_bound = sx;
  ex.x_window = {0.0, std::min(1.0, 4.0 * sx)};
  ex.lhs_const = -1.0;
  ex.lhs_inv_q = -(d + 1.0);
  ex.rhs_inv_p = -(d + 1.0);
  MeasuredBox domain({0.0, 0.0}, {sx, sy});
  box_samples(ex, domain, 8, 8, [&](const std::array<double, 2>&) {
    return std::array<double, 2>{1.0, std::min(2.0, 1.0 + 4.0 * sx)};
  });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      ex.witnesses.push_back({{(i + 0.5) * sx / 4.0, (j + 0.5) * sy / 4.0}, 1.0});
}

void build_s4(Example& ex, int k, int d, const ExampleOptions& opts) {
  const double norm = std::sqrt(static_cast<double>(d) * d + 1.0);
  const std::array<double, 2> e1{-1.0 / norm, -d / norm};
  const std::array<double, 2> e2{-d / norm, 1.0 / norm};
  const double h1 = 20.0 * pw2(-k), h2 = 20.0 * pw2(-2 * k);
  TiltedRect s4{{0.0, 0.0}, e1, e2, h1, h2};

  const double cell = 2.0 * h2 / opts.thin_cells;
  const double pad = opts.margin_cells * cell;
  const double ext_x = h1 * std::abs(e1[0]) + h2 * std::abs(e2[0]) + 2.0 * pad;
  const double ext_y = h1 * std::abs(e1[1]) + h2 * std::abs(e2[1]) + 2.0 * pad;
  const int rx = static_cast<int>(std::ceil(2.0 * ext_x / cell));
  const int ry = static_cast<int>(std::ceil(2.0 * ext_y / cell));
  TiltedRect padded = s4;
  padded.h1 += pad;
  padded.h2 += pad;
  GridFunction f(MeasuredBox({-ext_x, -ext_y}, {-ext_x + rx * cell, -ext_y + ry * cell}), {rx, ry});
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    const auto y = f.cell_center(c);
    if (padded.contains(y[0], y[1])) f[c] = 1.0;
  }
  ex.indicator = std::move(f);
  ex.exact_volume = s4.area();
  ex.lower_bound = pw2(-k) / norm;
  ex.x_window = {std::max(0.0, 1.0 - 32.0 * pw2(-k)), 1.0};
  ex.lhs_const = -1.0;
  ex.lhs_inv_q = -1.0;
  ex.rhs_inv_p = -3.0;

  // Fine tiling of the ribbon swept by D_t, t in [1, 2]: the step makes
  // consecutive rectangles touch in their e2 projection.
  const double tile_step = 2.0 * norm / (d - 1.0) * pw2(-2 * k);
  const double wwin = 3.0 * tile_step;
  for (double t = 1.0; t <= 2.0; t += tile_step) {
    TiltedRect dt{{t, t}, e1, e2, pw2(-k), pw2(-2 * k)};
    const int nu = 5, nv = 2;
    for (int a = 0; a < nu; ++a)
      for (int b = 0; b < nv; ++b) {
        const double u = dt.h1 * (-1.0 + (2.0 * a + 1.0) / nu);
        const double v = dt.h2 * (-1.0 + (2.0 * b + 1.0) / nv);
        NormSample s;
        s.y = {dt.center[0] + u * e1[0] + v * e2[0], dt.center[1] + u * e1[1] + v * e2[1]};
        s.weight = dt.area() / (nu * nv);
        s.t_lo = std::max(1.0, t - wwin);
        s.t_hi = std::min(2.0, t + wwin);
        ex.norm_samples.push_back(s);
      }
  }

  // The proof's discrete family: spacing 100 * 2^{-2k}, pairwise disjoint.
  const double spacing = 100.0 * pw2(-2 * k);
  for (double t = 1.0; t <= 2.0; t += spacing) {
    TiltedRect dt{{t, t}, e1, e2, pw2(-k), pw2(-2 * k)};
    ex.disjoint_family.push_back(dt);
    if (static_cast<int>(ex.witnesses.size()) + 3 <= opts.max_witnesses) {
      for (double u : {-0.6, 0.0, 0.6}) {
        WitnessSite site;
        site.y = {dt.center[0] + u * dt.h1 * e1[0], dt.center[1] + u * dt.h1 * e1[1]};
        site.t = t;
        ex.witnesses.push_back(site);
      }
    }
  }
}

void build_s5(Example& ex, int k, int d, const ExampleOptions& opts) {
  const double sx = 10.0 * pw2(-k), sy = 10.0 * pw2(-d * k);
  ex.indicator = ones_box(-sx, sx, -sy, sy, 16, 16, opts.margin_cells);
  ex.exact_volume = 4.0 * sx * sy;
  ex.lower_bound = 0.5 * pw2(-k);
  ex.x_window = {0.0, std::min(1.0, 1.2 * sx)};
  ex.lhs_const = -1.0;
  ex.lhs_inv_q = -1.0;
  ex.rhs_inv_p = -(d + 1.0);

  const double depth = pw2(-d * k);
  MeasuredBox domain({0.0, 1.0}, {pw2(-k), 2.0});
  box_samples(ex, domain, 4, 128, [&](const std::array<double, 2>& y) {
    return std::array<double, 2>{std::max(1.0, y[1] - 10.0 * depth),
                                 std::min(2.0, y[1] + 2.0 * depth)};
  });

  const double spacing = 100.0 * depth;
  for (double t = 1.0; t <= 2.0 - spacing * 0.01; t += spacing) {
    const double cap = std::pow(t, 1.0 - d) * depth;
    TiltedRect dt{{0.5 * pw2(-k), t + 0.5 * cap}, {1.0, 0.0}, {0.0, 1.0}, 0.5 * pw2(-k), 0.5 * cap};
    ex.disjoint_family.push_back(dt);
    if (static_cast<int>(ex.witnesses.size()) + 2 <= opts.max_witnesses) {
      ex.witnesses.push_back({{0.3 * pw2(-k), t + 0.3 * cap}, t});
      ex.witnesses.push_back({{0.7 * pw2(-k), t + 0.6 * cap}, t});
    }
  }
}

}  // namespace

Example build_example(ExampleTag tag, int k, int d, const ExampleOptions& opts) {
  if (k < 1) throw std::invalid_argument("build_example: k must be >= 1");
  if (d < 2) throw std::invalid_argument("build_example: d must be >= 2");
  // The thinnest rasterized scale must stay resolvable.
  const int hardest = tag == ExampleTag::S4 ? 2 * k : (tag == ExampleTag::S3 || tag == ExampleTag::S5 ? d * k : k);
  if (hardest > 40) throw std::invalid_argument("build_example: k too large for the resolution");

  const double c = tag == ExampleTag::S5 ? 1.0 : 0.0;
  Example ex{tag,  k,   d,   example_curve(d, c), Cutoff::unit_indicator(1), GridFunction{},
             0.0,  0.0, {0.0, 1.0}, {}, {}, {}, 0.0, 0.0, 0.0};
  switch (tag) {
    case ExampleTag::S1: build_s1(ex, k, d, opts); break;
    case ExampleTag::S2: build_s2(ex, k, d, opts); break;
    case ExampleTag::S3: build_s3(ex, k, d, opts); break;
    case ExampleTag::S4: build_s4(ex, k, d, opts); break;
    case ExampleTag::S5: build_s5(ex, k, d, opts); break;
  }
  return ex;
}

HalfPlane predicted_condition(ExampleTag tag, int d) {
  switch (tag) {
    case ExampleTag::S1:  // C1: 1/q <= 1/p
      return HalfPlane{Rational(-1), Rational(1), Rational(0), false};
    case ExampleTag::S2:  // C2: 1/q >= 1/(2p)
      return HalfPlane{Rational(1, 2), Rational(-1), Rational(0), false};
    case ExampleTag::S3:  // C3: (d+1)/p - (d+1)/q - 1 <= 0
      return HalfPlane{Rational(d + 1), Rational(-(d + 1)), Rational(1), false};
    case ExampleTag::S4:  // C4: 1/q >= 3/p - 1
      return HalfPlane{Rational(3), Rational(-1), Rational(1), false};
    case ExampleTag::S5:  // C5: 1/q >= (d+1)/p - 1
      return HalfPlane{Rational(d + 1), Rational(-1), Rational(1), false};
  }
  throw std::logic_error("predicted_condition: bad tag");
}

bool check_sharpness(ExampleTag tag, int d, const ExponentPoint& pt) {
  return !predicted_condition(tag, d).holds(pt);
}

namespace {

std::vector<double> sample_times(const NormSample& s, const ExampleOptions& opts) {
  std::vector<double> ts;
  ts.reserve(opts.coarse_t + opts.window_t);
  for (int i = 0; i < opts.coarse_t; ++i)
    ts.push_back(1.0 + static_cast<double>(i) / (opts.coarse_t - 1));
  if (s.t_hi > s.t_lo) {
    for (int i = 0; i < opts.window_t; ++i)
      ts.push_back(s.t_lo + (s.t_hi - s.t_lo) * i / (opts.window_t - 1));
  } else {
    ts.push_back(s.t_lo);
  }
  return ts;
}

}  // namespace

double measure_lhs_norm(const Example& ex, double q, const ExampleOptions& opts) {
  if (!(q >= 1.0)) throw std::invalid_argument("measure_lhs_norm: q must be >= 1");
  std::vector<double> contrib(ex.norm_samples.size());
  parallel_for(ex.norm_samples.size(), [&](std::size_t i) {
    const auto& s = ex.norm_samples[i];
    double best = 0.0;
    for (double t : sample_times(s, opts)) {
      const double v = std::abs(average_window(ex.spec, ex.cutoff, ex.indicator, t, s.y,
                                               ex.x_window[0], ex.x_window[1],
                                               opts.norm_x_samples));
      best = std::max(best, v);
    }
    contrib[i] = std::pow(best, q) * s.weight;
  });
  double acc = 0.0;
  for (double cv : contrib) acc += cv;
  return std::pow(acc, 1.0 / q);
}

double witness_margin(const Example& ex, const ExampleOptions& opts) {
  if (ex.witnesses.empty()) throw std::logic_error("witness_margin: no witness sites");
  std::vector<double> margin(ex.witnesses.size());
  parallel_for(ex.witnesses.size(), [&](std::size_t i) {
    const auto& site = ex.witnesses[i];
    const double v = average_window(ex.spec, ex.cutoff, ex.indicator, site.t, site.y,
                                    ex.x_window[0], ex.x_window[1], opts.witness_x_samples);
    margin[i] = v / ex.lower_bound;
  });
  return *std::min_element(margin.begin(), margin.end());
}

ScalingResult measure_scaling(ExampleTag tag, int d, double p, double q, std::span<const int> ks,
                              const ExampleOptions& opts) {
  if (ks.size() < 3) throw std::invalid_argument("measure_scaling: need >= 3 scale indices");
  ScalingResult out;
  out.tag = tag;
  out.d = d;
  out.p = p;
  out.q = q;
  std::vector<double> xs, lhs_log, rhs_log;
  for (int k : ks) {
    const Example ex = build_example(tag, k, d, opts);
    ScalingRow row;
    row.k = k;
    row.lhs_norm = measure_lhs_norm(ex, q, opts);
    row.rhs_norm = ex.indicator.lp_norm(p);
    out.rows.push_back(row);
    xs.push_back(static_cast<double>(k));
    lhs_log.push_back(std::log2(row.lhs_norm));
    rhs_log.push_back(std::log2(row.rhs_norm));
    out.predicted_lhs = ex.predicted_lhs_slope(q);
    out.predicted_rhs = ex.predicted_rhs_slope(p);
  }
  out.lhs_fit = fit_line(xs, lhs_log);
  out.rhs_fit = fit_line(xs, rhs_log);
  return out;
}

}  // namespace maxcurv
