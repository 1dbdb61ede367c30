#include "maxcurv/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "maxcurv/parallel.hpp"
#include "maxcurv/sparse.hpp"

namespace maxcurv {

Weight::Weight(GridFunction g, Dilation d) : data(std::move(g)), dilation(std::move(d)) {
  for (double v : data.values())
    if (!(v > 0.0)) throw std::invalid_argument("Weight: values must be strictly positive");
}

Weight constant_weight(const MeasuredBox& box, const std::vector<int>& res, const Dilation& dil,
                       double value) {
  return Weight(GridFunction::constant(box, res, value), dil);
}

Weight two_valued_split(const MeasuredBox& box, const std::vector<int>& res, const Dilation& dil,
                        double value_lo, double value_hi) {
  const double mid = 0.5 * (box.lower[0] + box.upper[0]);
  GridFunction g = GridFunction::from_function(box, res, [&](std::span<const double> x) {
    return x[0] < mid ? value_lo : value_hi;
  });
  return Weight(std::move(g), dil);
}

Weight clipped_power_weight(const MeasuredBox& box, const std::vector<int>& res,
                            const Dilation& dil, double gamma) {
  GridFunction g = GridFunction::from_function(box, res, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double v = std::pow(std::sqrt(r2), gamma);
    return std::min(4.0, std::max(0.25, v));
  });
  return Weight(std::move(g), dil);
}

std::vector<DeltaCube> cubes_in_window(const MeasuredBox& box, long long k_min, long long k_max,
                                       const std::vector<int>& shift_thirds, const Dilation& dil) {
  if (k_min > k_max) throw std::invalid_argument("cubes_in_window: empty scale window");
  std::vector<DeltaCube> out;
  for (long long k = k_min; k <= k_max; ++k) {
    const DeltaCube lo_cube = DeltaCube::containing(box.lower, k, shift_thirds, dil);
    std::vector<long long> lo_pos = lo_cube.position();
    std::vector<long long> counts(box.dim());
    std::size_t total = 1;
    for (int j = 0; j < box.dim(); ++j) {
      const double side = lo_cube.side(j);
      counts[j] = static_cast<long long>(std::ceil((box.upper[j] - lo_cube.lower(j)) / side));
      counts[j] = std::max<long long>(1, counts[j]);
      total *= static_cast<std::size_t>(counts[j]);
      if (total > 2'000'000) throw std::runtime_error("cubes_in_window: family too large");
    }
    std::vector<long long> idx(box.dim(), 0);
    for (;;) {
      std::vector<long long> pos(lo_pos);
      for (int j = 0; j < box.dim(); ++j) pos[j] += idx[j];
      DeltaCube cube(dil, k, std::move(pos), shift_thirds);
      if (cube.box().intersects(box)) out.push_back(cube);
      int j = box.dim() - 1;
      while (j >= 0 && ++idx[j] == counts[j]) idx[j--] = 0;
      if (j < 0) break;
    }
  }
  return out;
}

namespace {

/// Average of w^s over the part of the cube inside the weight's box.
double power_average(const GridFunction& w, const MeasuredBox& cube, double s) {
  const int n = w.dim();
  double acc = 0.0, vol = 0.0;
  std::vector<int> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    const double cell = w.cell_side(j);
    const double rel_lo = (cube.lower[j] - w.box().lower[j]) / cell;
    const double rel_hi = (cube.upper[j] - w.box().lower[j]) / cell;
    if (rel_hi <= 0.0 || rel_lo >= w.resolution()[j])
      throw std::invalid_argument("weights: cube does not meet the weight's box");
    lo[j] = std::max(0, static_cast<int>(std::floor(rel_lo)));
    hi[j] = std::min(w.resolution()[j] - 1, static_cast<int>(std::ceil(rel_hi)) - 1);
  }
  std::vector<int> idx(lo);
  for (;;) {
    double overlap = 1.0;
    for (int j = 0; j < n; ++j) {
      const double cell = w.cell_side(j);
      const double a = std::max(cube.lower[j], w.box().lower[j] + idx[j] * cell);
      const double b = std::min(cube.upper[j], w.box().lower[j] + (idx[j] + 1) * cell);
      overlap *= std::max(0.0, b - a);
    }
    if (overlap > 0.0) {
      acc += std::pow(w[w.flat_index(idx)], s) * overlap;
      vol += overlap;
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] > hi[j]) {
      idx[j] = lo[j];
      --j;
    }
    if (j < 0) break;
  }
  if (vol <= 0.0) throw std::invalid_argument("weights: cube does not meet the weight's box");
  return acc / vol;
}

}  // namespace

double ap_characteristic(const Weight& w, double p, std::span<const DeltaCube> cubes) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_characteristic: p must exceed 1");
  if (cubes.empty()) throw std::invalid_argument("ap_characteristic: empty cube family");
  const double dual = 1.0 - p / (p - 1.0);  // 1 - p'
  double best = 0.0;
  for (const auto& cube : cubes) {
    const MeasuredBox box = cube.box();
    if (!box.intersects(w.data.box())) continue;
    const double mean = power_average(w.data, box, 1.0);
    const double dual_mean = power_average(w.data, box, dual);
    best = std::max(best, mean * std::pow(dual_mean, p - 1.0));
  }
  return best;
}

double rh_characteristic(const Weight& w, double p, std::span<const DeltaCube> cubes) {
  if (!(p > 1.0)) throw std::invalid_argument("rh_characteristic: p must exceed 1");
  if (cubes.empty()) throw std::invalid_argument("rh_characteristic: empty cube family");
  double best = 0.0;
  for (const auto& cube : cubes) {
    const MeasuredBox box = cube.box();
    if (!box.intersects(w.data.box())) continue;
    const double mean = power_average(w.data, box, 1.0);
    const double p_mean = std::pow(power_average(w.data, box, p), 1.0 / p);
    best = std::max(best, p_mean / mean);
  }
  return best;
}

double alpha_exponent(double p, double q, double r) {
  if (!(p < r && r < q)) throw std::invalid_argument("alpha_exponent: requires p < r < q");
  return std::max(1.0 / (r - p), (q - 1.0) / (q - r));
}

namespace {

GridFunction global_max_field(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                              int k_min, int k_max, int per_block, const EvalOptions& opts) {
  const int m = support_shift(spec, cutoff);
  const auto ts = TimeSampling::dyadic_blocks(k_min, k_max, per_block, m);
  AverageTable table(spec, cutoff, ts.samples, opts);
  GridFunction field(f.box(), f.resolution());
  parallel_for(field.cell_count(), [&](std::size_t i) {
    const auto y = field.cell_center(i);
    field[i] = table.max_at(f, y);
  });
  return field;
}

}  // namespace

double weighted_norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                           const Weight& w, double r, int k_min, int k_max, int per_block,
                           const EvalOptions& opts) {
  if (!(r >= 1.0)) throw std::invalid_argument("weighted_norm_ratio: r must be >= 1");
  const double denom = f.weighted_lp_norm(r, w.data);
  if (denom == 0.0) throw std::domain_error("weighted_norm_ratio: f is identically zero");
  const auto field = global_max_field(spec, cutoff, f, k_min, k_max, per_block, opts);
  return field.weighted_lp_norm(r, w.data) / denom;
}

double unweighted_norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                             double r, int k_min, int k_max, int per_block,
                             const EvalOptions& opts) {
  if (!(r >= 1.0)) throw std::invalid_argument("unweighted_norm_ratio: r must be >= 1");
  const double denom = f.lp_norm(r);
  if (denom == 0.0) throw std::domain_error("unweighted_norm_ratio: f is identically zero");
  const auto field = global_max_field(spec, cutoff, f, k_min, k_max, per_block, opts);
  return field.lp_norm(r) / denom;
}

}  // namespace maxcurv
