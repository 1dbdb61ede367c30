#pragma once

#include <optional>
#include <span>
#include <vector>

#include "maxcurv/geometry.hpp"
#include "maxcurv/grid_function.hpp"

namespace maxcurv {

/// Sampling of the dilation parameter t.
struct TimeSampling {
  enum class Mode { dense, dyadic_blocks };

  Mode mode = Mode::dense;
  std::vector<double> samples;

  /// count uniformly spaced samples covering [1, 2] (endpoints included).
  /// The sup over t is realized as a max over such a sampling; 513 samples
  /// (2^9 per unit interval) is the default working density.
  static TimeSampling dense(int count = 513);
  /// Explicit sorted samples in [1, 2].
  static TimeSampling dense_from(std::vector<double> samples);
  /// per_block samples of [2^{k-m-1}, 2^{k-m}] for k in [k_min, k_max].
  static TimeSampling dyadic_blocks(int k_min, int k_max, int per_block, int m);
};

struct EvalOptions {
  int x_samples = 256;     // quadrature points for 1-parameter averages
  int x_samples_2d = 48;   // per-axis points for 2-parameter averages
  bool parallel = true;
};

/// A_t f(y) = integral of f(y - delta_t Gamma(x)) eta(x) dx.
double average(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f, double t,
               std::span<const double> y, const EvalOptions& opts = {});

/// Same average with the x-integration restricted to [a, b] (still cut by
/// eta); curves only. Quadrature resolution chosen by the caller.
double average_window(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                      double t, std::span<const double> y, double a, double b, int n_samples);

/// max over the sampled t of |A_t f(y)|.
double max_over_times(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                      std::span<const double> y, std::span<const double> times,
                      const EvalOptions& opts = {});

/// sup_{1 <= t <= 2} |A_t f(y)| over a dense sampling.
double local_max(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                 std::span<const double> y, const TimeSampling& ts, const EvalOptions& opts = {});

/// The block-shift exponent m: smallest integer with delta_t(Gamma(supp eta))
/// inside a quarter of the scale-k cube sides for every t in every block.
int support_shift(const SurfaceSpec& spec, const Cutoff& cutoff);

/// sup over the dyadic blocks [2^{k-m-1}, 2^{k-m}], k_min <= k <= k_max,
/// each block sampled densely with per_block points.
double global_max(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                  std::span<const double> y, int k_min, int k_max, int per_block = 256,
                  const EvalOptions& opts = {});

/// Precomputed quadrature offsets: local_max over a whole evaluation grid
/// reuses delta_t(Gamma(x_i)) across all y.
class AverageTable {
 public:
  AverageTable(const SurfaceSpec& spec, const Cutoff& cutoff, std::span<const double> times,
               const EvalOptions& opts = {});

  double average_at(const GridFunction& f, std::span<const double> y, std::size_t t_index) const;
  double max_at(const GridFunction& f, std::span<const double> y) const;
  std::size_t time_count() const { return offsets_.size(); }

 private:
  int ambient_ = 0;
  std::vector<std::vector<double>> offsets_;  // per t: packed ambient-dim offsets
  std::vector<double> weights_;               // eta(x_i) * cell
};

/// ||local_max f||_{L^q(eval grid)} / ||f||_{L^p}.
double norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f, double p,
                  double q, const TimeSampling& ts, const MeasuredBox& eval_box,
                  const std::vector<int>& eval_resolution, const EvalOptions& opts = {});

/// Evaluates y -> local_max(f)(y) into a GridFunction on eval_box.
GridFunction local_max_field(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                             const TimeSampling& ts, const MeasuredBox& eval_box,
                             const std::vector<int>& eval_resolution, const EvalOptions& opts = {});

/// || sup_t |A_t f(. + z) - A_t f(.)| ||_{L^q(eval grid)}.
double continuity_diff_norm(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                            std::span<const double> z, double q, const TimeSampling& ts,
                            const MeasuredBox& eval_box, const std::vector<int>& eval_resolution,
                            const EvalOptions& opts = {});

/// Homogeneous-curve transfer inequality |T f(y)| <= sup_{t in [1,2]} |A_t f(y)|
/// with T the unit-interval convolution along (x, x^d); checked at y up to
/// the quadrature tolerance.
bool transference_lower(const SurfaceSpec& spec, const GridFunction& f, std::span<const double> y,
                        const TimeSampling& ts, const EvalOptions& opts = {}, double tol = 1e-9);

}  // namespace maxcurv
