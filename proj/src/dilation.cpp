#include "maxcurv/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace maxcurv {

namespace {
constexpr double kCeilGuard = 0x1p-40;
}

Dilation Dilation::normalize(std::vector<Rational> a) {
  if (a.empty()) throw std::invalid_argument("Dilation: empty exponent vector");
  for (const auto& aj : a)
    if (aj <= Rational(0)) throw std::invalid_argument("Dilation: exponents must be positive");
  Rational amin = a[0];
  for (const auto& aj : a) amin = std::min(amin, aj, [](const Rational& x, const Rational& y) { return x < y; });
  Dilation d;
  d.exact_ = true;
  d.a_rat_ = a;
  d.b_rat_.reserve(a.size());
  for (const auto& aj : a) d.b_rat_.push_back(aj / amin);
  for (const auto& aj : a) d.a_real_.push_back(aj.value());
  for (const auto& bj : d.b_rat_) d.b_real_.push_back(bj.value());
  d.reparam_real_ = amin.value();
  return d;
}

Dilation Dilation::normalize_real(std::vector<double> a) {
  if (a.empty()) throw std::invalid_argument("Dilation: empty exponent vector");
  for (double aj : a)
    if (!(aj > 0.0)) throw std::invalid_argument("Dilation: exponents must be positive");
  const double amin = *std::min_element(a.begin(), a.end());
  Dilation d;
  d.exact_ = false;
  d.a_real_ = a;
  for (double aj : a) d.b_real_.push_back(aj / amin);
  // The minimum normalizes to 1 exactly even with rounding.
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] == amin) d.b_real_[j] = 1.0;
  d.reparam_real_ = amin;
  return d;
}

Dilation Dilation::isotropic(int n) {
  return normalize(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)));
}

Dilation Dilation::homogeneous(long long d) {
  return normalize({Rational(1), Rational(d)});
}

long long Dilation::ceil_kb(long long k, int j) const {
  if (k < kMinScale || k > kMaxScale)
    throw std::domain_error("Dilation: scale index outside supported range [-64, 64]");
  if (exact_) {
    const Rational& b = b_rat_.at(j);
    return Rational(k * b.num(), b.den()).ceil();
  }
  const double x = static_cast<double>(k) * b_real_.at(j);
  return static_cast<long long>(std::ceil(x - kCeilGuard));
}

std::vector<double> Dilation::cube_side_lengths(long long k) const {
  std::vector<double> out(b_real_.size());
  for (int j = 0; j < dim(); ++j) out[j] = std::ldexp(1.0, static_cast<int>(ceil_kb(k, j)));
  return out;
}

std::optional<long long> Dilation::scale_from_side(double side, int j) const {
  int exp = 0;
  const double mant = std::frexp(side, &exp);
  if (!(side > 0.0) || mant != 0.5)
    throw std::invalid_argument("scale_from_side: side length must be a dyadic power");
  const long long m = exp - 1;  // side == 2^m
  // ceil(k b_j) == m  <=>  m-1 < k b_j <= m, so k = floor(m / b_j) is the
  // only candidate (separation of scales makes the solution unique).
  long long cand;
  if (exact_) {
    const Rational& b = b_rat_.at(j);
    cand = Rational(m * b.den(), b.num()).floor();
  } else {
    cand = static_cast<long long>(std::floor(static_cast<double>(m) / b_real_.at(j) + kCeilGuard));
  }
  for (long long k = cand - 1; k <= cand + 1; ++k) {
    if (k < kMinScale || k > kMaxScale) continue;
    if (ceil_kb(k, j) == m) return k;
  }
  return std::nullopt;
}

double rho_delta(std::span<const double> x, std::span<const double> y, const Dilation& d) {
  if (x.size() != y.size() || static_cast<int>(x.size()) != d.dim())
    throw std::invalid_argument("rho_delta: dimension mismatch");
  double best = 0.0;
  for (int j = 0; j < d.dim(); ++j) {
    const double v = std::pow(std::abs(x[j] - y[j]), 1.0 / d.normalized_value(j));
    best = std::max(best, v);
  }
  return best;
}

std::vector<double> dilate_point(const Dilation& d, double t, std::span<const double> p) {
  if (!(t > 0.0)) throw std::domain_error("dilate_point: t must be positive");
  if (static_cast<int>(p.size()) != d.dim())
    throw std::invalid_argument("dilate_point: dimension mismatch");
  std::vector<double> out(p.size());
  for (int j = 0; j < d.dim(); ++j) out[j] = std::pow(t, d.exponent_value(j)) * p[j];
  return out;
}

}  // namespace maxcurv
