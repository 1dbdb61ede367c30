#pragma once

#include <span>
#include <vector>

#include "maxcurv/averaging.hpp"
#include "maxcurv/delta_grid.hpp"
#include "maxcurv/grid_function.hpp"

namespace maxcurv {

/// A positive weight sampled on a grid, carrying the governing dilation.
struct Weight {
  GridFunction data;
  Dilation dilation;

  Weight(GridFunction g, Dilation d);
};

/// Built-in weight families for the CLI.
Weight constant_weight(const MeasuredBox& box, const std::vector<int>& res, const Dilation& dil,
                       double value = 1.0);
/// Axis-0 split: value_lo on the lower half, value_hi on the upper half.
Weight two_valued_split(const MeasuredBox& box, const std::vector<int>& res, const Dilation& dil,
                        double value_lo, double value_hi);
/// |x|^gamma clipped to [1/4, 4].
Weight clipped_power_weight(const MeasuredBox& box, const std::vector<int>& res,
                            const Dilation& dil, double gamma);

/// Cubes of the shifted grid intersecting the box, for scales in
/// [k_min, k_max]; the truncated family behind both characteristics.
std::vector<DeltaCube> cubes_in_window(const MeasuredBox& box, long long k_min, long long k_max,
                                       const std::vector<int>& shift_thirds, const Dilation& dil);

/// [w]_{A_p} over the supplied cube family: max of <w>_Q <w^{1-p'}>_Q^{p-1}.
double ap_characteristic(const Weight& w, double p, std::span<const DeltaCube> cubes);

/// [w]_{RH_p} over the family: max of <w>_{Q,p} / <w>_Q.
double rh_characteristic(const Weight& w, double p, std::span<const DeltaCube> cubes);

/// alpha = max(1/(r-p), (q-1)/(q-r)) for p < r < q.
double alpha_exponent(double p, double q, double r);

/// ||global_max f||_{L^r(w)} / ||f||_{L^r(w)}, both on f's grid (which must
/// coincide with the weight's grid).
double weighted_norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                           const Weight& w, double r, int k_min, int k_max, int per_block = 64,
                           const EvalOptions& opts = {});

/// The unweighted ratio computed along the identical evaluation path.
double unweighted_norm_ratio(const SurfaceSpec& spec, const Cutoff& cutoff, const GridFunction& f,
                             double r, int k_min, int k_max, int per_block = 64,
                             const EvalOptions& opts = {});

}  // namespace maxcurv
