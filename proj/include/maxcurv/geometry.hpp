#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "maxcurv/dilation.hpp"

#include "json.hpp"

namespace maxcurv {

enum class SurfaceFamily {
  finite_type_curve,        // (x, x^d phi(x) + c), needs d b_1 != b_2
  homogeneous_curve,        // (x, x^d), normalized dilation (1, d)
  perturbed_homogeneous,    // (x, x^d phi(x)), normalized dilation (1, d)
  non_vanishing_surface,    // (x1, x2, x2^2 phi(x2)), needs 2 b_2 != b_3
  finite_type_surface,      // (x1, x2, c + x2^d phi(x2)), needs d b_2 != b_3
  degenerate_surface,       // (x1, x2, x2^d phi(x2)), needs d b_2 == b_3
};

std::string family_name(SurfaceFamily f);
SurfaceFamily family_from_name(const std::string& name);

/// A parametrized curve or surface with its type order d, perturbation
/// order m, offset c and polynomial truncation of phi. The surface models
/// depend on the last parameter coordinate only; that is the direction all
/// jet conditions constrain.
class SurfaceSpec {
 public:
  SurfaceSpec(SurfaceFamily family, int d, int m, double c, std::vector<double> phi_coeffs,
              Dilation dilation, double support_radius = 0.125);

  SurfaceFamily family() const { return family_; }
  int type_order() const { return d_; }
  int perturbation_order() const { return m_; }
  double offset() const { return c_; }
  const std::vector<double>& phi_coefficients() const { return phi_; }
  const Dilation& dilation() const { return dil_; }
  double support_radius() const { return support_radius_; }

  int ambient_dim() const;    // 2 for curves, 3 for surfaces
  int parameter_dim() const;  // 1 or 2

  double phi(double x) const;

  /// Gamma(x): the point of the surface at parameter x.
  std::vector<double> point(std::span<const double> x) const;
  /// Curve shorthand for parameter_dim() == 1.
  std::vector<double> point(double x) const;

  nlohmann::json to_json() const;
  static SurfaceSpec from_json(const nlohmann::json& j);

 private:
  void validate() const;

  SurfaceFamily family_;
  int d_;
  int m_;
  double c_;
  std::vector<double> phi_;
  Dilation dil_;
  double support_radius_;
};

enum class CutoffProfile { smooth_bump, indicator };

/// The localization eta: either the standard compactly supported bump
/// exp(-1/(1-u^2)) rescaled to the support radius, or the model indicator
/// occupying [center, center + radius) per coordinate.
class Cutoff {
 public:
  Cutoff(CutoffProfile profile, double radius, std::vector<double> center);

  static Cutoff bump(double radius, std::vector<double> center);
  static Cutoff unit_indicator(int param_dim);  // 1_{[0,1]^k}

  CutoffProfile profile() const { return profile_; }
  double radius() const { return radius_; }
  const std::vector<double>& center() const { return center_; }
  int dim() const { return static_cast<int>(center_.size()); }

  double operator()(std::span<const double> x) const;
  double operator()(double x) const;

  /// Support interval in coordinate j.
  std::array<double, 2> support(int j) const;

  /// integral of eta over its support (cached quadrature for the bump).
  double integral() const;

 private:
  CutoffProfile profile_;
  double radius_;
  std::vector<double> center_;
  mutable double integral_cache_ = -1.0;
};

/// Critical point x_c = (s/d)^{1/(d-1)} of Phi(s, x) = -s x + x^d, plus
/// whether it lies in the model support [1, 2] (s in [d, d 2^{d-1}]).
struct StationaryPoint {
  double x_c;
  bool in_support;
};
StationaryPoint stationary_point(double s, int d);

/// Stationary phase value (d-1) t xi_2 (-xi_1 / (d xi_2))^{d/(d-1)}.
double phase_value(std::span<const double, 2> xi, double t, int d);

}  // namespace maxcurv
