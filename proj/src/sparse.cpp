#include "maxcurv/sparse.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "maxcurv/parallel.hpp"

namespace maxcurv {

namespace {

struct AxisOverlap {
  int lo = 0;
  int hi = -1;  // inclusive; empty when hi < lo
  std::vector<double> weight;
};

AxisOverlap axis_overlap(double cell, double box_lo, int res, double lo, double hi) {
  AxisOverlap out;
  if (hi <= box_lo || lo >= box_lo + cell * res) return out;
  const double rel_lo = std::max(0.0, (lo - box_lo) / cell);
  const double rel_hi = std::min(static_cast<double>(res), (hi - box_lo) / cell);
  out.lo = std::min(res - 1, static_cast<int>(std::floor(rel_lo)));
  out.hi = std::max(out.lo, std::min(res - 1, static_cast<int>(std::ceil(rel_hi)) - 1));
  out.weight.resize(out.hi - out.lo + 1, 0.0);
  for (int i = out.lo; i <= out.hi; ++i) {
    const double a = std::max(rel_lo, static_cast<double>(i));
    const double b = std::min(rel_hi, static_cast<double>(i + 1));
    out.weight[i - out.lo] = std::max(0.0, b - a) * cell;
  }
  return out;
}

}  // namespace

double box_integral_abs_pow(const GridFunction& f, const MeasuredBox& region, double p) {
  const int n = f.dim();
  std::vector<AxisOverlap> ov(n);
  for (int j = 0; j < n; ++j) {
    ov[j] = axis_overlap(f.cell_side(j), f.box().lower[j], f.resolution()[j], region.lower[j],
                         region.upper[j]);
    if (ov[j].hi < ov[j].lo) return 0.0;
  }
  double acc = 0.0;
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = ov[j].lo;
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) w *= ov[j].weight[idx[j] - ov[j].lo];
    if (w > 0.0) acc += std::pow(std::abs(f[f.flat_index(idx)]), p) * w;
    int j = n - 1;
    while (j >= 0 && ++idx[j] > ov[j].hi) {
      idx[j] = ov[j].lo;
      --j;
    }
    if (j < 0) break;
  }
  return acc;
}

double average_pq(const GridFunction& f, const MeasuredBox& region, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("average_pq: p must be >= 1");
  if (!region.intersects(f.box()))
    throw std::invalid_argument("average_pq: cube disjoint from the grid");
  return std::pow(box_integral_abs_pow(f, region, p) / region.volume(), 1.0 / p);
}

double average_pq(const GridFunction& f, const DeltaCube& cube, double p) {
  return average_pq(f, cube.box(), p);
}

namespace {

/// True when no further descent can reveal new stopping cubes: the region
/// misses the grid, meets at most one cell per axis, or sits below the cell
/// scale entirely (selection granularity is the grid cell; f carries no
/// structure below it).
bool within_single_cell(const GridFunction& f, const MeasuredBox& region) {
  bool sub_cell = true;
  for (int j = 0; j < f.dim(); ++j)
    if (region.side(j) > f.cell_side(j)) sub_cell = false;
  if (sub_cell) return true;
  for (int j = 0; j < f.dim(); ++j) {
    const double cell = f.cell_side(j);
    const double rel_lo = (region.lower[j] - f.box().lower[j]) / cell;
    const double rel_hi = (region.upper[j] - f.box().lower[j]) / cell;
    if (rel_hi <= 0.0 || rel_lo >= f.resolution()[j]) return true;
    const int i_lo = std::max(0, static_cast<int>(std::floor(rel_lo)));
    const int i_hi =
        std::min(f.resolution()[j] - 1, static_cast<int>(std::ceil(rel_hi)) - 1);
    if (i_hi > i_lo) return false;
  }
  return true;
}

struct Selector {
  const GridFunction& f;
  const GridFunction& g;
  double p, qprime, C;
  int max_depth = 16;
  long long root_scale = 0;
  SparseCollection out;

  bool stops(const DeltaCube& cube, double f_thresh, double g_thresh) const {
    const MeasuredBox box = cube.box();
    if (!box.intersects(f.box()) && !box.intersects(g.box())) return false;
    const double af =
        std::pow(box_integral_abs_pow(f, box, p) / box.volume(), 1.0 / p);
    const double ag =
        std::pow(box_integral_abs_pow(g, box, qprime) / box.volume(), 1.0 / qprime);
    // A vanished reference average means the function vanishes on the whole
    // current root, so no descendant average can exceed it; boundary-sliver
    // roundoff must not beat an exact zero.
    const bool f_stop = f_thresh > 0.0 && af > C * f_thresh;
    const bool g_stop = g_thresh > 0.0 && ag > C * g_thresh;
    return f_stop || g_stop;
  }

  /// Finds the maximal stopping descendants of `cube` relative to the
  /// thresholds, appending selected nodes; returns their total volume.
  double collect_stopping(const DeltaCube& cube, double f_thresh, double g_thresh,
                          std::vector<std::size_t>& selected) {
    double vol = 0.0;
    if (within_single_cell(f, cube.box()) && within_single_cell(g, cube.box())) return 0.0;
    if (root_scale - (cube.scale() - 1) > max_depth)
      throw std::runtime_error("select_sparse: max_depth exceeded before selection settled");
    for (const auto& child : cube.children()) {
      if (stops(child, f_thresh, g_thresh)) {
        selected.push_back(build_node(child));
        vol += child.volume();
      } else {
        vol += collect_stopping(child, f_thresh, g_thresh, selected);
      }
    }
    return vol;
  }

  std::size_t build_node(const DeltaCube& cube) {
    const std::size_t index = out.nodes.size();
    out.nodes.push_back(SparseNode{cube, {}, cube.volume()});
    const MeasuredBox box = cube.box();
    const double af = std::pow(box_integral_abs_pow(f, box, p) / box.volume(), 1.0 / p);
    const double ag =
        std::pow(box_integral_abs_pow(g, box, qprime) / box.volume(), 1.0 / qprime);
    std::vector<std::size_t> selected;
    const double child_vol = collect_stopping(cube, af, ag, selected);
    out.nodes[index].children = std::move(selected);
    out.nodes[index].witness_volume = cube.volume() - child_vol;
    return index;
  }
};

}  // namespace

SparseCollection select_sparse(const GridFunction& f, const GridFunction& g, const DeltaCube& q0,
                               double p, double qprime, double C, int max_depth) {
  if (!(p >= 1.0) || !(qprime >= 1.0))
    throw std::invalid_argument("select_sparse: exponents must be >= 1");
  if (!(std::pow(C, -p) + std::pow(C, -qprime) <= 0.25))
    throw std::invalid_argument("select_sparse: C too small (needs C^-p + C^-q' <= 1/4)");
  Selector sel{f, g, p, qprime, C, max_depth, q0.scale(), {}};
  sel.build_node(q0);
  sel.out.avg_f_root = average_pq(f, q0, p);
  sel.out.avg_g_root = average_pq(g, q0, qprime);
  if (!sparseness_certificate(sel.out))
    throw std::logic_error("select_sparse: sparseness certificate failed");
  return sel.out;
}

bool sparseness_certificate(const SparseCollection& s) {
  for (const auto& node : s.nodes) {
    if (!(node.witness_volume > 0.25 * node.cube.volume())) return false;
    // Witnesses are cube-minus-children regions: disjointness across nodes
    // follows when the children of each node are pairwise disjoint cubes.
    for (std::size_t a = 0; a < node.children.size(); ++a)
      for (std::size_t b = a + 1; b < node.children.size(); ++b)
        if (!s.nodes[node.children[a]].cube.disjoint_from(s.nodes[node.children[b]].cube))
          return false;
    for (std::size_t c : node.children)
      if (!node.cube.contains_cube(s.nodes[c].cube)) return false;
  }
  return true;
}

double stopping_children_volume(const SparseCollection& s) {
  double vol = 0.0;
  if (s.nodes.empty()) return vol;
  for (std::size_t c : s.nodes[0].children) vol += s.nodes[c].cube.volume();
  return vol;
}

namespace {

struct CellRange {
  std::vector<int> lo, hi;  // inclusive
};

/// Exact cell range of a cell-aligned cube; throws if edges miss the lattice.
CellRange aligned_cell_range(const GridFunction& f, const MeasuredBox& region) {
  CellRange out;
  out.lo.resize(f.dim());
  out.hi.resize(f.dim());
  for (int j = 0; j < f.dim(); ++j) {
    const double cell = f.cell_side(j);
    const double rel_lo = (region.lower[j] - f.box().lower[j]) / cell;
    const double rel_hi = (region.upper[j] - f.box().lower[j]) / cell;
    const double snap_lo = std::round(rel_lo);
    const double snap_hi = std::round(rel_hi);
    if (std::abs(rel_lo - snap_lo) > 1e-9 || std::abs(rel_hi - snap_hi) > 1e-9)
      throw std::invalid_argument(
          "cz_decompose: grid resolution must subdivide the finest cube scale");
    out.lo[j] = std::max(0, static_cast<int>(snap_lo));
    out.hi[j] = std::min(f.resolution()[j] - 1, static_cast<int>(snap_hi) - 1);
    if (out.hi[j] < out.lo[j]) throw std::invalid_argument("cz_decompose: cube outside the grid");
  }
  return out;
}

void for_each_cell(const CellRange& r, const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> idx(r.lo);
  for (;;) {
    fn(idx);
    int j = static_cast<int>(idx.size()) - 1;
    while (j >= 0 && ++idx[j] > r.hi[j]) {
      idx[j] = r.lo[j];
      --j;
    }
    if (j < 0) break;
  }
}

void collect_bad_cubes(const GridFunction& f, const DeltaCube& cube, double p, double threshold,
                       long long root_scale, int max_depth, std::vector<DeltaCube>& bad) {
  if (within_single_cell(f, cube.box())) return;
  if (root_scale - (cube.scale() - 1) > max_depth)
    throw std::runtime_error("cz_decompose: max_depth exceeded before selection settled");
  for (const auto& child : cube.children()) {
    const MeasuredBox box = child.box();
    if (!box.intersects(f.box())) continue;
    const double avg = std::pow(box_integral_abs_pow(f, box, p) / box.volume(), 1.0 / p);
    if (avg > threshold)
      bad.push_back(child);
    else
      collect_bad_cubes(f, child, p, threshold, root_scale, max_depth, bad);
  }
}

}  // namespace

CZDecomposition cz_decompose(const GridFunction& f, const DeltaCube& q0, double p, double C,
                             int max_depth) {
  if (!(p >= 1.0)) throw std::invalid_argument("cz_decompose: p must be >= 1");
  if (!(C > 1.0)) throw std::invalid_argument("cz_decompose: C must exceed 1");
  CZDecomposition out;
  out.threshold = C * average_pq(f, q0, p);
  collect_bad_cubes(f, q0, p, out.threshold, q0.scale(), max_depth, out.bad_cubes);
  out.good = f;
  for (const auto& cube : out.bad_cubes) {
    const CellRange range = aligned_cell_range(f, cube.box());
    double mass = 0.0, vol = 0.0;
    for_each_cell(range, [&](std::span<const int> idx) {
      mass += f[f.flat_index(idx)] * f.cell_measure();
      vol += f.cell_measure();
    });
    const double mean = mass / vol;
    std::vector<double> lo(f.dim()), hi(f.dim());
    std::vector<int> res(f.dim());
    for (int j = 0; j < f.dim(); ++j) {
      lo[j] = f.box().lower[j] + range.lo[j] * f.cell_side(j);
      hi[j] = f.box().lower[j] + (range.hi[j] + 1) * f.cell_side(j);
      res[j] = range.hi[j] - range.lo[j] + 1;
    }
    GridFunction part(MeasuredBox(lo, hi), res);
    for_each_cell(range, [&](std::span<const int> idx) {
      std::vector<int> local(idx.begin(), idx.end());
      for (int j = 0; j < f.dim(); ++j) local[j] -= range.lo[j];
      const std::size_t src = f.flat_index(idx);
      double b = f[src] - mean;
      double good_val = f[src] - b;
      // Nudge so the reconstruction f = f_inf + b_P is exact in doubles.
      for (int tries = 0; tries < 4 && good_val + b != f[src]; ++tries)
        good_val = std::nextafter(good_val, f[src] - b > good_val ? 1e308 : -1e308);
      part[part.flat_index(local)] = b;
      out.good[src] = good_val;
    });
    out.bad_parts.push_back(std::move(part));
  }
  return out;
}

double sparse_form(const SparseCollection& s, const GridFunction& f, const GridFunction& g,
                   double p, double qprime) {
  if (!(p >= 1.0) || !(qprime >= 1.0))
    throw std::invalid_argument("sparse_form: exponents must be >= 1");
  double acc = 0.0;
  for (const auto& node : s.nodes) {
    const MeasuredBox box = node.cube.box();
    const double vol = box.volume();
    const double af = std::pow(box_integral_abs_pow(f, box, p) / vol, 1.0 / p);
    const double ag = std::pow(box_integral_abs_pow(g, box, qprime) / vol, 1.0 / qprime);
    acc += vol * af * ag;
  }
  return acc;
}

nlohmann::json sparse_to_json(const SparseCollection& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& node : s.nodes) {
    nlohmann::json c;
    c["k"] = node.cube.scale();
    c["position"] = node.cube.position();
    std::vector<std::string> shift;
    for (int t : node.cube.shift_thirds()) shift.push_back(t == 0 ? "0" : (t == 1 ? "1/3" : "2/3"));
    c["shift"] = shift;
    c["witness_volume_fraction"] = node.witness_volume / node.cube.volume();
    arr.push_back(c);
  }
  return arr;
}

namespace {

/// Smallest cube of the shifted grid containing the hull, if one exists.
/// Grid boundaries through the hull persist at every scale (the reason for
/// the one-third trick), so some shifts legitimately have no covering cube.
std::optional<DeltaCube> covering_root(const MeasuredBox& hull, const std::vector<int>& shift,
                                       const Dilation& dil) {
  std::vector<double> center(hull.dim());
  for (int j = 0; j < hull.dim(); ++j) center[j] = 0.5 * (hull.lower[j] + hull.upper[j]);
  for (long long k = -16; k <= 40; ++k) {
    DeltaCube cube = DeltaCube::containing(center, k, shift, dil);
    bool covers = true;
    for (int j = 0; j < hull.dim(); ++j)
      if (cube.lower(j) > hull.lower[j] || cube.upper(j) < hull.upper[j]) covers = false;
    if (covers) return cube;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> all_shifts(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  for (;;) {
    out.push_back(cur);
    int j = n - 1;
    while (j >= 0 && ++cur[j] == 3) cur[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

DominationCase run_case(const std::string& label, const SurfaceSpec& spec, const Cutoff& cutoff,
                        const GridFunction& f, const GridFunction& g, double p, double qprime,
                        const DominationOptions& opts, nlohmann::json* selection_out) {
  DominationCase out;
  out.label = label;
  // <M f, g> on g's grid.
  const int m = support_shift(spec, cutoff);
  const auto ts = TimeSampling::dyadic_blocks(opts.k_min, opts.k_max, opts.per_block, m);
  AverageTable table(spec, cutoff, ts.samples, opts.eval);
  std::vector<double> mf(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t i) {
    const auto y = g.cell_center(i);
    mf[i] = table.max_at(f, y);
  });
  double inner = 0.0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) inner += mf[i] * g[i] * g.cell_measure();
  out.inner_product = inner;

  const MeasuredBox hull = f.box().hull(g.box());
  double best = 0.0;
  bool any_root = false;
  for (const auto& shift : all_shifts(f.dim())) {
    const auto root = covering_root(hull, shift, spec.dilation());
    if (!root) continue;
    any_root = true;
    const auto sel = select_sparse(f, g, *root, p, qprime, opts.C, opts.max_depth);
    const double lambda = sparse_form(sel, f, g, p, qprime);
    if (lambda > best) {
      best = lambda;
      if (selection_out) *selection_out = sparse_to_json(sel);
    }
  }
  if (!any_root) throw std::runtime_error("verify_sparse_domination: no shifted grid covers the data");
  out.best_lambda = best;
  out.ratio = best > 0.0 ? inner / best : 0.0;
  return out;
}

}  // namespace

DominationReport verify_sparse_domination(const SurfaceSpec& spec, const Cutoff& cutoff,
                                          const GridFunction& f, const GridFunction& g, double p,
                                          double qprime, const DominationOptions& opts) {
  for (double v : f.values())
    if (v < 0) throw std::invalid_argument("verify_sparse_domination: f must be nonnegative");
  for (double v : g.values())
    if (v < 0) throw std::invalid_argument("verify_sparse_domination: g must be nonnegative");
  DominationReport report;
  report.base = run_case("base", spec, cutoff, f, g, p, qprime, opts, &report.selection);

  std::mt19937_64 rng(opts.seed);
  auto rescale = [&](const GridFunction& h, int j) {
    std::vector<double> lo(h.dim()), hi(h.dim());
    for (int c = 0; c < h.dim(); ++c) {
      const double factor = std::pow(std::ldexp(1.0, -j), spec.dilation().exponent_value(c));
      lo[c] = h.box().lower[c] * factor;
      hi[c] = h.box().upper[c] * factor;
    }
    GridFunction out(MeasuredBox(lo, hi), h.resolution());
    out.values() = h.values();
    return out;
  };
  for (int j = 1; j <= opts.rescalings; ++j) {
    DominationOptions sub = opts;
    sub.k_min = opts.k_min - j;
    sub.k_max = opts.k_max - j;
    report.family.push_back(run_case("rescale_2^" + std::to_string(j), spec, cutoff, rescale(f, j),
                                     rescale(g, j), p, qprime, sub, nullptr));
  }
  auto translate = [&](const GridFunction& h, const std::vector<double>& v) {
    std::vector<double> lo(h.box().lower), hi(h.box().upper);
    for (int c = 0; c < h.dim(); ++c) {
      lo[c] += v[c];
      hi[c] += v[c];
    }
    GridFunction out(MeasuredBox(lo, hi), h.resolution());
    out.values() = h.values();
    return out;
  };
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int i = 0; i < opts.translations; ++i) {
    std::vector<double> v(f.dim());
    for (auto& c : v) c = unif(rng);
    report.family.push_back(run_case("translate_" + std::to_string(i), spec, cutoff,
                                     translate(f, v), translate(g, v), p, qprime, opts, nullptr));
  }
  double lo = report.base.ratio, hi = report.base.ratio;
  for (const auto& c : report.family) {
    if (c.ratio > 0.0) {
      lo = std::min(lo, c.ratio);
      hi = std::max(hi, c.ratio);
    }
  }
  report.stability_factor = lo > 0.0 ? hi / lo : 1.0;
  return report;
}

}  // namespace maxcurv
