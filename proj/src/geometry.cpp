#include "maxcurv/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace maxcurv {

std::string family_name(SurfaceFamily f) {
  switch (f) {
    case SurfaceFamily::finite_type_curve: return "finite_type_curve";
    case SurfaceFamily::homogeneous_curve: return "homogeneous_curve";
    case SurfaceFamily::perturbed_homogeneous: return "perturbed_homogeneous";
    case SurfaceFamily::non_vanishing_surface: return "non_vanishing_surface";
    case SurfaceFamily::finite_type_surface: return "finite_type_surface";
    case SurfaceFamily::degenerate_surface: return "degenerate_surface";
  }
  throw std::logic_error("family_name: unknown family");
}

SurfaceFamily family_from_name(const std::string& name) {
  if (name == "finite_type_curve" || name == "finite-type") return SurfaceFamily::finite_type_curve;
  if (name == "homogeneous_curve" || name == "homogeneous") return SurfaceFamily::homogeneous_curve;
  if (name == "perturbed_homogeneous" || name == "perturbed")
    return SurfaceFamily::perturbed_homogeneous;
  if (name == "non_vanishing_surface") return SurfaceFamily::non_vanishing_surface;
  if (name == "finite_type_surface") return SurfaceFamily::finite_type_surface;
  if (name == "degenerate_surface") return SurfaceFamily::degenerate_surface;
  throw std::invalid_argument("unknown surface family: " + name);
}

SurfaceSpec::SurfaceSpec(SurfaceFamily family, int d, int m, double c, std::vector<double> phi_coeffs,
                         Dilation dilation, double support_radius)
    : family_(family), d_(d), m_(m), c_(c), phi_(std::move(phi_coeffs)), dil_(std::move(dilation)),
      support_radius_(support_radius) {
  validate();
}

int SurfaceSpec::ambient_dim() const {
  switch (family_) {
    case SurfaceFamily::finite_type_curve:
    case SurfaceFamily::homogeneous_curve:
    case SurfaceFamily::perturbed_homogeneous: return 2;
    default: return 3;
  }
}

int SurfaceSpec::parameter_dim() const { return ambient_dim() - 1; }

double SurfaceSpec::phi(double x) const {
  double acc = 0.0;
  for (auto it = phi_.rbegin(); it != phi_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool essentially_constant(const std::vector<double>& coeffs) {
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) return false;
  return true;
}

}  // namespace

void SurfaceSpec::validate() const {
  if (d_ < 2) throw std::invalid_argument("SurfaceSpec: type order d must be >= 2");
  if (m_ < 1) throw std::invalid_argument("SurfaceSpec: perturbation order m must be >= 1");
  if (!(support_radius_ > 0)) throw std::invalid_argument("SurfaceSpec: support radius must be > 0");
  if (dil_.dim() != ambient_dim())
    throw std::invalid_argument("SurfaceSpec: dilation dimension must equal the ambient dimension");

  const bool uses_phi = family_ != SurfaceFamily::homogeneous_curve;
  if (uses_phi) {
    if (phi_.empty() || phi_[0] == 0.0)
      throw std::invalid_argument("SurfaceSpec: phi(0) must be nonzero");
    // Jet conditions at 0: phi^(j)(0) = 0 for 1 <= j <= m-1, phi^(m)(0) != 0.
    // A constant truncation is accepted as the unperturbed representative.
    if (!essentially_constant(phi_)) {
      for (int j = 1; j < m_ && j < static_cast<int>(phi_.size()); ++j)
        if (factorial(j) * phi_[j] != 0.0)
          throw std::invalid_argument("SurfaceSpec: phi^(j)(0) must vanish for 1 <= j <= m-1");
      if (static_cast<int>(phi_.size()) <= m_ || phi_[m_] == 0.0)
        throw std::invalid_argument("SurfaceSpec: phi^(m)(0) must be nonzero");
    }
  }

  auto b_eq = [this](int j, long long mult, int jj) {
    if (dil_.exact()) return Rational(mult) * dil_.normalized(j) == dil_.normalized(jj);
    return mult * dil_.normalized_value(j) == dil_.normalized_value(jj);
  };
  switch (family_) {
    case SurfaceFamily::homogeneous_curve:
      if (!b_eq(0, d_, 1) || dil_.normalized_value(0) != 1.0)
        throw std::invalid_argument("SurfaceSpec: homogeneous curve needs normalized exponents (1, d)");
      break;
    case SurfaceFamily::perturbed_homogeneous:
      if (!b_eq(0, d_, 1) || dil_.normalized_value(0) != 1.0)
        throw std::invalid_argument("SurfaceSpec: perturbed curve needs normalized exponents (1, d)");
      break;
    case SurfaceFamily::finite_type_curve:
      if (b_eq(0, d_, 1))
        throw std::invalid_argument("SurfaceSpec: finite type curve requires d b_1 != b_2");
      break;
    case SurfaceFamily::non_vanishing_surface:
      if (b_eq(1, 2, 2))
        throw std::invalid_argument("SurfaceSpec: non-vanishing surface requires 2 b_2 != b_3");
      break;
    case SurfaceFamily::finite_type_surface:
      if (b_eq(1, d_, 2))
        throw std::invalid_argument("SurfaceSpec: finite type surface requires d b_2 != b_3");
      break;
    case SurfaceFamily::degenerate_surface:
      if (!b_eq(1, d_, 2))
        throw std::invalid_argument("SurfaceSpec: degenerate surface requires d b_2 == b_3");
      break;
  }
}

std::vector<double> SurfaceSpec::point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != parameter_dim())
    throw std::invalid_argument("SurfaceSpec::point: parameter dimension mismatch");
  for (double xj : x)
    if (std::abs(xj) > 64.0)
      throw std::domain_error("SurfaceSpec::point: parameter outside the truncation domain");
  switch (family_) {
    case SurfaceFamily::finite_type_curve: {
      const double t = x[0];
      return {t, std::pow(t, d_) * phi(t) + c_};
    }
    case SurfaceFamily::homogeneous_curve: {
      const double t = x[0];
      return {t, std::pow(t, d_)};
    }
    case SurfaceFamily::perturbed_homogeneous: {
      const double t = x[0];
      return {t, std::pow(t, d_) * phi(t)};
    }
    case SurfaceFamily::non_vanishing_surface:
      return {x[0], x[1], x[1] * x[1] * phi(x[1])};
    case SurfaceFamily::finite_type_surface:
      return {x[0], x[1], c_ + std::pow(x[1], d_) * phi(x[1])};
    case SurfaceFamily::degenerate_surface:
      return {x[0], x[1], std::pow(x[1], d_) * phi(x[1])};
  }
  throw std::logic_error("SurfaceSpec::point: unknown family");
}

std::vector<double> SurfaceSpec::point(double x) const {
  const std::array<double, 1> xs{x};
  return point(std::span<const double>(xs));
}

nlohmann::json SurfaceSpec::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  j["d"] = d_;
  j["m"] = m_;
  j["c"] = c_;
  j["phi_coeffs"] = phi_;
  std::vector<std::string> exps;
  for (int i = 0; i < dil_.dim(); ++i) {
    if (dil_.exact())
      exps.push_back(dil_.exponent(i).str());
    else
      exps.push_back(std::to_string(dil_.exponent_value(i)));
  }
  j["exponents"] = exps;
  j["support_radius"] = support_radius_;
  return j;
}

SurfaceSpec SurfaceSpec::from_json(const nlohmann::json& j) {
  std::vector<Rational> exps;
  bool exact = true;
  std::vector<double> exps_real;
  for (const auto& e : j.at("exponents")) {
    if (e.is_string()) {
      const std::string s = e.get<std::string>();
      if (s.find('.') != std::string::npos) {
        exact = false;
        exps_real.push_back(std::stod(s));
      } else {
        exps.push_back(Rational::parse(s));
        exps_real.push_back(exps.back().value());
      }
    } else if (e.is_number_integer()) {
      exps.push_back(Rational(e.get<long long>()));
      exps_real.push_back(exps.back().value());
    } else {
      exact = false;
      exps_real.push_back(e.get<double>());
    }
  }
  Dilation dil = exact ? Dilation::normalize(exps) : Dilation::normalize_real(exps_real);
  return SurfaceSpec(family_from_name(j.at("family").get<std::string>()), j.at("d").get<int>(),
                     j.at("m").get<int>(), j.at("c").get<double>(),
                     j.at("phi_coeffs").get<std::vector<double>>(), std::move(dil),
                     j.value("support_radius", 0.125));
}

Cutoff::Cutoff(CutoffProfile profile, double radius, std::vector<double> center)
    : profile_(profile), radius_(radius), center_(std::move(center)) {
  if (!(radius_ > 0)) throw std::invalid_argument("Cutoff: radius must be positive");
  if (center_.empty()) throw std::invalid_argument("Cutoff: empty center");
}

Cutoff Cutoff::bump(double radius, std::vector<double> center) {
  return Cutoff(CutoffProfile::smooth_bump, radius, std::move(center));
}

Cutoff Cutoff::unit_indicator(int param_dim) {
  return Cutoff(CutoffProfile::indicator, 1.0, std::vector<double>(param_dim, 0.0));
}

namespace {
double bump_profile(double u) {
  const double s = 1.0 - u * u;
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}
}  // namespace

double Cutoff::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("Cutoff: dimension mismatch");
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) {
    if (profile_ == CutoffProfile::smooth_bump) {
      v *= bump_profile((x[j] - center_[j]) / radius_);
    } else {
      if (!(center_[j] <= x[j] && x[j] < center_[j] + radius_)) return 0.0;
    }
    if (v == 0.0) return 0.0;
  }
  return v;
}

double Cutoff::operator()(double x) const {
  const std::array<double, 1> xs{x};
  return (*this)(std::span<const double>(xs));
}

std::array<double, 2> Cutoff::support(int j) const {
  if (profile_ == CutoffProfile::smooth_bump)
    return {center_[j] - radius_, center_[j] + radius_};
  return {center_[j], center_[j] + radius_};
}

double Cutoff::integral() const {
  if (integral_cache_ >= 0.0) return integral_cache_;
  if (profile_ == CutoffProfile::indicator) {
    integral_cache_ = std::pow(radius_, dim());
    return integral_cache_;
  }
  // 1D bump mass by composite Simpson, then tensor power.
  const int n = 1 << 14;
  double acc = 0.0;
  const double h = 2.0 / n;
  for (int i = 0; i < n; ++i) {
    const double a = -1.0 + i * h;
    acc += (bump_profile(a) + 4.0 * bump_profile(a + 0.5 * h) + bump_profile(a + h)) * h / 6.0;
  }
  integral_cache_ = std::pow(acc * radius_, dim());
  return integral_cache_;
}

StationaryPoint stationary_point(double s, int d) {
  if (!(s > 0)) throw std::domain_error("stationary_point: s must be positive");
  if (d < 2) throw std::invalid_argument("stationary_point: d must be >= 2");
  StationaryPoint out;
  out.x_c = std::pow(s / d, 1.0 / (d - 1));
  out.in_support = s >= d && s <= d * std::ldexp(1.0, d - 1);
  return out;
}

double phase_value(std::span<const double, 2> xi, double t, int d) {
  if (!(t > 0)) throw std::domain_error("phase_value: t must be positive");
  if (xi[1] == 0.0 || !(-xi[0] / xi[1] > 0.0))
    throw std::domain_error("phase_value: requires xi_2 != 0 and -xi_1/xi_2 > 0");
  const double ratio = -xi[0] / (d * xi[1]);
  return (d - 1) * t * xi[1] * std::pow(ratio, static_cast<double>(d) / (d - 1));
}

}  // namespace maxcurv
