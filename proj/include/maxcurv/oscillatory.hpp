#pragma once

#include <complex>
#include <span>
#include <vector>

#include "maxcurv/fit.hpp"
#include "maxcurv/geometry.hpp"

namespace maxcurv {

struct FourierResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

/// dmu_hat(xi) = integral of e^{-i xi . Gamma(x)} eta(x) dx, by adaptive
/// Gauss-Kronrod panels seeded so the phase varies by at most ~pi/2 per
/// panel. Sets converged = false when the estimated absolute error stays
/// above tol at the panel budget (the achieved estimate is reported).
FourierResult measure_fourier(const SurfaceSpec& spec, const Cutoff& cutoff,
                              std::span<const double> xi, double tol);

/// Least-squares slope of log|dmu_hat(lambda omega)| against log lambda.
LineFit fourier_decay_slope(const SurfaceSpec& spec, const Cutoff& cutoff,
                            std::span<const double> omega, std::span<const double> lambdas,
                            double tol);

/// Slope of the per-lambda worst case over n_directions unit directions
/// (half circle for curves, half sphere for surfaces).
LineFit worst_direction_decay(const SurfaceSpec& spec, const Cutoff& cutoff, int n_directions,
                              std::span<const double> lambdas, double tol);

}  // namespace maxcurv
