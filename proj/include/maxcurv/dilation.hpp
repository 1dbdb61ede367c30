#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "maxcurv/rational.hpp"

namespace maxcurv {

/// Scale indices are clamped to this range so that every side length
/// 2^ceil(k*b_j) stays comfortably inside double precision.
inline constexpr long long kMinScale = -64;
inline constexpr long long kMaxScale = 64;

/// Non-isotropic dilation exponents (a_1,...,a_n) together with the
/// normalized form b_j = a_j / min_i a_i >= 1, min_j b_j = 1.
///
/// Exponents given as rationals are kept exact so ceil(k*b_j) carries no
/// floating-point hazard; real-valued exponents fall back to doubles with a
/// 2^-40 guard before the ceiling.
class Dilation {
 public:
  static Dilation normalize(std::vector<Rational> a);
  static Dilation normalize_real(std::vector<double> a);

  /// Convenience: isotropic (1,...,1) in n coordinates.
  static Dilation isotropic(int n);
  /// Convenience: normalized homogeneous-curve dilation (1, d).
  static Dilation homogeneous(long long d);

  int dim() const { return static_cast<int>(b_real_.size()); }
  bool exact() const { return exact_; }

  /// Original exponent a_j (exact mode only).
  const Rational& exponent(int j) const { return a_rat_.at(j); }
  double exponent_value(int j) const { return a_real_.at(j); }

  /// Normalized exponent b_j (exact mode only).
  const Rational& normalized(int j) const { return b_rat_.at(j); }
  double normalized_value(int j) const { return b_real_.at(j); }

  /// The reparametrization exponent a_{j0} = min_j a_j (t -> t^{a_{j0}}).
  double reparam_exponent_value() const { return reparam_real_; }

  /// Exact ceil(k * b_j); throws if k is outside the supported scale range.
  long long ceil_kb(long long k, int j) const;

  /// Side lengths (2^ceil(k b_1), ..., 2^ceil(k b_n)).
  std::vector<double> cube_side_lengths(long long k) const;

  /// The unique k with 2^ceil(k b_j) == side, if any. Throws on non-dyadic side.
  std::optional<long long> scale_from_side(double side, int j) const;

  friend bool operator==(const Dilation& x, const Dilation& y) {
    return x.exact_ == y.exact_ && x.b_rat_ == y.b_rat_ && x.b_real_ == y.b_real_;
  }

 private:
  bool exact_ = true;
  std::vector<Rational> a_rat_;
  std::vector<Rational> b_rat_;
  std::vector<double> a_real_;
  std::vector<double> b_real_;
  double reparam_real_ = 1.0;
};

/// The quasi-metric rho_delta(x, y) = max_j |x_j - y_j|^{1/b_j}.
double rho_delta(std::span<const double> x, std::span<const double> y, const Dilation& d);

/// delta_t(p) = (t^{a_1} p_1, ..., t^{a_n} p_n) with the original exponents.
std::vector<double> dilate_point(const Dilation& d, double t, std::span<const double> p);

}  // namespace maxcurv
