#include "maxcurv/averaging.hpp"

#include <cmath>
#include <stdexcept>

#include "maxcurv/parallel.hpp"

namespace maxcurv {

TimeSampling TimeSampling::dense(int count) {
  if (count < 1) throw std::invalid_argument("TimeSampling: empty sampling");
  TimeSampling ts;
  ts.mode = Mode::dense;
  ts.samples.resize(count);
  for (int i = 0; i < count; ++i)
    ts.samples[i] = count == 1 ? 1.0 : 1.0 + static_cast<double>(i) / (count - 1);
  return ts;
}

TimeSampling TimeSampling::dense_from(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("TimeSampling: empty sampling");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= 1.0 && samples[i] <= 2.0))
      throw std::invalid_argument("TimeSampling: dense samples must lie in [1, 2]");
    if (i > 0 && samples[i] < samples[i - 1])
      throw std::invalid_argument("TimeSampling: samples must be sorted");
  }
  TimeSampling ts;
  ts.mode = Mode::dense;
  ts.samples = std::move(samples);
  return ts;
}

TimeSampling TimeSampling::dyadic_blocks(int k_min, int k_max, int per_block, int m) {
  if (k_min > k_max || per_block < 1) throw std::invalid_argument("TimeSampling: bad block range");
  TimeSampling ts;
  ts.mode = Mode::dyadic_blocks;
  for (int k = k_min; k <= k_max; ++k) {
    const double lo = std::ldexp(1.0, k - m - 1);
    const double hi = std::ldexp(1.0, k - m);
    for (int i = 0; i < per_block; ++i)
      ts.samples.push_back(per_block == 1 ? hi : lo + (hi - lo) * i / (per_block - 1));
  }
  return ts;
}

namespace {

void check_grid(const GridFunction& f) {
  for (int r : f.resolution())
    if (r < 2) throw std::invalid_argument("average: degenerate grid (resolution < 2 on an axis)");
}

}  // namespace

double average_window(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                      double t, std::span<const double> y, double a, double b, int n_samples) {
  if (!(t > 0)) throw std::domain_error("average: t must be positive");
  check_grid(f);
  if (spec.parameter_dim() != 1)
    throw std::invalid_argument("average_window: curves only");
  const auto sup = cutoff.support(0);
  a = std::max(a, sup[0]);
  b = std::min(b, sup[1]);
  if (!(a < b)) return 0.0;
  const double h = (b - a) / n_samples;
  const int n = spec.ambient_dim();
  std::vector<double> arg(n);
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = a + (i + 0.5) * h;
    const double eta = cutoff(x);
    if (eta == 0.0) continue;
    const auto gamma = spec.point(x);
    for (int j = 0; j < n; ++j)
      arg[j] = y[j] - std::pow(t, spec.dilation().exponent_value(j)) * gamma[j];
    acc += f.value_at(arg) * eta;
  }
  return acc * h;
}

double average(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f, double t,
               std::span<const double> y, const EvalOptions& opts) {
  if (spec.parameter_dim() == 1) {
    const auto sup = cutoff.support(0);
    return average_window(spec, cutoff, f, t, y, sup[0], sup[1], opts.x_samples);
  }
  if (!(t > 0)) throw std::domain_error("average: t must be positive");
  check_grid(f);
  const auto s0 = cutoff.support(0);
  const auto s1 = cutoff.support(1);
  const int ns = opts.x_samples_2d;
  const double h0 = (s0[1] - s0[0]) / ns;
  const double h1 = (s1[1] - s1[0]) / ns;
  const int n = spec.ambient_dim();
  std::vector<double> arg(n);
  double acc = 0.0;
  for (int i = 0; i < ns; ++i) {
    for (int l = 0; l < ns; ++l) {
      const std::array<double, 2> x{s0[0] + (i + 0.5) * h0, s1[0] + (l + 0.5) * h1};
      const double eta = cutoff(std::span<const double>(x));
      if (eta == 0.0) continue;
      const auto gamma = spec.point(std::span<const double>(x));
      for (int j = 0; j < n; ++j)
        arg[j] = y[j] - std::pow(t, spec.dilation().exponent_value(j)) * gamma[j];
      acc += f.value_at(arg) * eta;
    }
  }
  return acc * h0 * h1;
}

double max_over_times(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                      std::span<const double> y, std::span<const double> times,
                      const EvalOptions& opts) {
  if (times.empty()) throw std::invalid_argument("max_over_times: empty sampling");
  double best = 0.0;
  for (double t : times) best = std::max(best, std::abs(average(spec, cutoff, f, t, y, opts)));
  return best;
}

double local_max(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                 std::span<const double> y, const TimeSampling& ts, const EvalOptions& opts) {
  if (ts.mode != TimeSampling::Mode::dense)
    throw std::invalid_argument("local_max: requires a dense sampling of [1, 2]");
  return max_over_times(spec, cutoff, f, y, ts.samples, opts);
}

int support_shift(const SurfaceSpec& spec, const Cutoff& cutoff) {
  // Largest |Gamma_j| over supp eta, probed on a fine parameter lattice.
  const int n = spec.ambient_dim();
  std::vector<double> radius(n, 0.0);
  const int probes = 2048;
  if (spec.parameter_dim() == 1) {
    const auto sup = cutoff.support(0);
    for (int i = 0; i <= probes; ++i) {
      const double x = sup[0] + (sup[1] - sup[0]) * i / probes;
      if (cutoff(x) == 0.0 && i != 0 && i != probes) continue;
      const auto p = spec.point(x);
      for (int j = 0; j < n; ++j) radius[j] = std::max(radius[j], std::abs(p[j]));
    }
  } else {
    const auto s0 = cutoff.support(0);
    const auto s1 = cutoff.support(1);
    const int pr = 128;
    for (int i = 0; i <= pr; ++i)
      for (int l = 0; l <= pr; ++l) {
        const std::array<double, 2> x{s0[0] + (s0[1] - s0[0]) * i / pr,
                                      s1[0] + (s1[1] - s1[0]) * l / pr};
        const auto p = spec.point(std::span<const double>(x));
        for (int j = 0; j < n; ++j) radius[j] = std::max(radius[j], std::abs(p[j]));
      }
  }
  // Need 2^{(k-m) b_j} R_j <= 2^{ceil(k b_j) - 2} for all k; since
  // ceil(k b_j) >= k b_j it is enough that m b_j >= 2 + log2 R_j.
  int m = 0;
  for (int j = 0; j < n; ++j) {
    if (radius[j] <= 0.0) continue;
    const double need = (2.0 + std::log2(radius[j])) / spec.dilation().normalized_value(j);
    m = std::max(m, static_cast<int>(std::ceil(need)));
  }
  return m;
}

double global_max(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                  std::span<const double> y, int k_min, int k_max, int per_block,
                  const EvalOptions& opts) {
  const int m = support_shift(spec, cutoff);
  const auto ts = TimeSampling::dyadic_blocks(k_min, k_max, per_block, m);
  return max_over_times(spec, cutoff, f, y, ts.samples, opts);
}

AverageTable::AverageTable(const SurfaceSpec& spec, const Cutoff& cutoff,
                           std::span<const double> times, const EvalOptions& opts) {
  ambient_ = spec.ambient_dim();
  std::vector<std::vector<double>> gammas;  // quadrature points on the surface
  if (spec.parameter_dim() == 1) {
    const auto sup = cutoff.support(0);
    const double h = (sup[1] - sup[0]) / opts.x_samples;
    for (int i = 0; i < opts.x_samples; ++i) {
      const double x = sup[0] + (i + 0.5) * h;
      const double eta = cutoff(x);
      if (eta == 0.0) continue;
      gammas.push_back(spec.point(x));
      weights_.push_back(eta * h);
    }
  } else {
    const auto s0 = cutoff.support(0);
    const auto s1 = cutoff.support(1);
    const int ns = opts.x_samples_2d;
    const double h0 = (s0[1] - s0[0]) / ns, h1 = (s1[1] - s1[0]) / ns;
    for (int i = 0; i < ns; ++i)
      for (int l = 0; l < ns; ++l) {
        const std::array<double, 2> x{s0[0] + (i + 0.5) * h0, s1[0] + (l + 0.5) * h1};
        const double eta = cutoff(std::span<const double>(x));
        if (eta == 0.0) continue;
        gammas.push_back(spec.point(std::span<const double>(x)));
        weights_.push_back(eta * h0 * h1);
      }
  }
  offsets_.resize(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    auto& table = offsets_[ti];
    table.resize(gammas.size() * ambient_);
    for (std::size_t i = 0; i < gammas.size(); ++i)
      for (int j = 0; j < ambient_; ++j)
        table[i * ambient_ + j] =
            std::pow(times[ti], spec.dilation().exponent_value(j)) * gammas[i][j];
  }
}

double AverageTable::average_at(const GridFunction& f, std::span<const double> y,
                                std::size_t t_index) const {
  const auto& table = offsets_[t_index];
  const std::size_t count = weights_.size();
  double acc = 0.0;
  double arg[3];
  for (std::size_t i = 0; i < count; ++i) {
    for (int j = 0; j < ambient_; ++j) arg[j] = y[j] - table[i * ambient_ + j];
    acc += f.value_at(std::span<const double>(arg, ambient_)) * weights_[i];
  }
  return acc;
}

double AverageTable::max_at(const GridFunction& f, std::span<const double> y) const {
  double best = 0.0;
  for (std::size_t ti = 0; ti < offsets_.size(); ++ti)
    best = std::max(best, std::abs(average_at(f, y, ti)));
  return best;
}

GridFunction local_max_field(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                             const TimeSampling& ts, const MeasuredBox& eval_box,
                             const std::vector<int>& eval_resolution, const EvalOptions& opts) {
  check_grid(f);
  AverageTable table(spec, cutoff, ts.samples, opts);
  GridFunction out(eval_box, eval_resolution);
  auto body = [&](std::size_t i) {
    const auto y = out.cell_center(i);
    out[i] = table.max_at(f, y);
  };
  if (opts.parallel)
    parallel_for(out.cell_count(), body);
  else
    for (std::size_t i = 0; i < out.cell_count(); ++i) body(i);
  return out;
}

double norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f, double p,
                  double q, const TimeSampling& ts, const MeasuredBox& eval_box,
                  const std::vector<int>& eval_resolution, const EvalOptions& opts) {
  const double denom = f.lp_norm(p);
  if (denom == 0.0) throw std::domain_error("norm_ratio: f is identically zero");
  const auto field = local_max_field(spec, cutoff, f, ts, eval_box, eval_resolution, opts);
  return field.lp_norm(q) / denom;
}

double continuity_diff_norm(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                            std::span<const double> z, double q, const TimeSampling& ts,
                            const MeasuredBox& eval_box, const std::vector<int>& eval_resolution,
                            const EvalOptions& opts) {
  check_grid(f);
  AverageTable table(spec, cutoff, ts.samples, opts);
  GridFunction out(eval_box, eval_resolution);
  auto body = [&](std::size_t i) {
    auto y = out.cell_center(i);
    std::vector<double> yz(y);
    for (std::size_t j = 0; j < yz.size(); ++j) yz[j] += z[j];
    double best = 0.0;
    for (std::size_t ti = 0; ti < table.time_count(); ++ti)
      best = std::max(best, std::abs(table.average_at(f, yz, ti) - table.average_at(f, y, ti)));
    out[i] = best;
  };
  if (opts.parallel)
    parallel_for(out.cell_count(), body);
  else
    for (std::size_t i = 0; i < out.cell_count(); ++i) body(i);
  return out.lp_norm(q);
}

bool transference_lower(const SurfaceSpec& spec, const GridFunction& f, std::span<const double> y,
                        const TimeSampling& ts, const EvalOptions& opts, double tol) {
  if (spec.family() != SurfaceFamily::homogeneous_curve)
    throw std::invalid_argument("transference_lower: homogeneous curves only");
  const auto cutoff = Cutoff::unit_indicator(1);
  const double tf = std::abs(average(spec, cutoff, f, 1.0, y, opts));
  const double lm = local_max(spec, cutoff, f, y, ts, opts);
  return tf <= lm + tol;
}

}  // namespace maxcurv
