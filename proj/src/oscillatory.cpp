#include "maxcurv/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace maxcurv {

namespace {

// Gauss 7 / Kronrod 15 on [-1, 1] (positive abscissae; symmetric).
constexpr double kK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kK15Weights[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
// Gauss-7 weights aligned with kK15Nodes indices 0, 2, 4, 6.
constexpr double kG7Weights[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697,
};

using Integrand = std::function<std::complex<double>(double)>;

struct PanelResult {
  std::complex<double> kronrod;
  double error;
};

PanelResult gk15(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> gauss = 0.0, kronrod = 0.0;
  for (int i = 0; i < 8; ++i) {
    const std::complex<double> fp = f(mid + half * kK15Nodes[i]);
    const std::complex<double> fm = i == 0 ? fp : f(mid - half * kK15Nodes[i]);
    const std::complex<double> pair = i == 0 ? fp : fp + fm;
    kronrod += kK15Weights[i] * pair;
    if (i % 2 == 0) gauss += kG7Weights[i / 2] * pair;
  }
  PanelResult out;
  out.kronrod = half * kronrod;
  out.error = std::abs(half * (kronrod - gauss));
  return out;
}

struct Panel {
  double a, b, error;
  std::complex<double> value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

FourierResult adaptive_gk(const Integrand& f, double a, double b, int seed_panels, double tol,
                          int max_panels) {
  std::priority_queue<Panel> queue;
  std::complex<double> total = 0.0;
  double err = 0.0;
  std::size_t evals = 0;
  const double h = (b - a) / seed_panels;
  for (int i = 0; i < seed_panels; ++i) {
    const double pa = a + i * h, pb = i + 1 == seed_panels ? b : a + (i + 1) * h;
    auto r = gk15(f, pa, pb);
    evals += 15;
    queue.push(Panel{pa, pb, r.error, r.kronrod});
    total += r.kronrod;
    err += r.error;
  }
  int panels = seed_panels;
  while (err > tol && panels < max_panels) {
    Panel worst = queue.top();
    queue.pop();
    total -= worst.value;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (auto [pa, pb] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      auto r = gk15(f, pa, pb);
      evals += 15;
      queue.push(Panel{pa, pb, r.error, r.kronrod});
      total += r.kronrod;
      err += r.error;
    }
    ++panels;
  }
  FourierResult out;
  out.value = total;
  out.error_estimate = err;
  out.converged = err <= tol;
  out.evaluations = evals;
  return out;
}

/// Seed panel count so phase change per panel stays below ~pi/2.
int seed_count(const SurfaceSpec& spec, const Cutoff& cutoff, std::span<const double> xi, double a,
               double b, int axis) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  const int probes = 128;
  for (int i = 0; i <= probes; ++i) {
    std::vector<double> x(spec.parameter_dim(), 0.0);
    for (int j = 0; j < spec.parameter_dim(); ++j) x[j] = cutoff.center()[j];
    x[axis] = a + (b - a) * i / probes;
    const auto p = spec.point(x);
    double phase = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) phase += xi[j] * p[j];
    if (first || phase < lo) lo = phase;
    if (first || phase > hi) hi = phase;
    first = false;
  }
  const double span = hi - lo;
  const int n = static_cast<int>(std::ceil(span / (0.5 * M_PI))) + 8;
  return std::clamp(n, 8, 1 << 13);
}

}  // namespace

FourierResult measure_fourier(const SurfaceSpec& spec, const Cutoff& cutoff,
                              std::span<const double> xi, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("measure_fourier: tol must be positive");
  if (static_cast<int>(xi.size()) != spec.ambient_dim())
    throw std::invalid_argument("measure_fourier: frequency dimension mismatch");
  const std::complex<double> minus_i(0.0, -1.0);
  if (spec.parameter_dim() == 1) {
    const auto sup = cutoff.support(0);
    Integrand f = [&](double x) {
      const double eta = cutoff(x);
      if (eta == 0.0) return std::complex<double>(0.0);
      const auto p = spec.point(x);
      const double phase = xi[0] * p[0] + xi[1] * p[1];
      return std::exp(minus_i * phase) * eta;
    };
    const int seeds = seed_count(spec, cutoff, xi, sup[0], sup[1], 0);
    return adaptive_gk(f, sup[0], sup[1], seeds, tol, 1 << 15);
  }
  // Surfaces: adaptive outer integral, adaptive inner integral at a tighter
  // tolerance so the outer error estimate dominates.
  const auto sup0 = cutoff.support(0);
  const auto sup1 = cutoff.support(1);
  const int seeds1 = seed_count(spec, cutoff, xi, sup1[0], sup1[1], 1);
  std::size_t inner_evals = 0;
  Integrand outer = [&](double x0) -> std::complex<double> {
    Integrand inner = [&](double x1) {
      const std::array<double, 2> x{x0, x1};
      const double eta = cutoff(std::span<const double>(x));
      if (eta == 0.0) return std::complex<double>(0.0);
      const auto p = spec.point(std::span<const double>(x));
      const double phase = xi[0] * p[0] + xi[1] * p[1] + xi[2] * p[2];
      return std::exp(minus_i * phase) * eta;
    };
    auto r = adaptive_gk(inner, sup1[0], sup1[1], seeds1, tol * 0.05, 1 << 12);
    inner_evals += r.evaluations;
    return r.value;
  };
  const int seeds0 = seed_count(spec, cutoff, xi, sup0[0], sup0[1], 0);
  auto out = adaptive_gk(outer, sup0[0], sup0[1], seeds0, tol, 1 << 12);
  out.evaluations += inner_evals;
  return out;
}

LineFit fourier_decay_slope(const SurfaceSpec& spec, const Cutoff& cutoff,
                            std::span<const double> omega, std::span<const double> lambdas,
                            double tol) {
  std::vector<double> xs, ys;
  for (double lam : lambdas) {
    std::vector<double> xi(omega.begin(), omega.end());
    for (auto& c : xi) c *= lam;
    const auto r = measure_fourier(spec, cutoff, xi, tol);
    const double mag = std::abs(r.value);
    if (mag <= 0) continue;
    xs.push_back(std::log2(lam));
    ys.push_back(std::log2(mag));
  }
  return fit_line(xs, ys);
}

LineFit worst_direction_decay(const SurfaceSpec& spec, const Cutoff& cutoff, int n_directions,
                              std::span<const double> lambdas, double tol) {
  if (n_directions < 2) throw std::invalid_argument("worst_direction_decay: need >= 2 directions");
  std::vector<std::vector<double>> dirs;
  if (spec.ambient_dim() == 2) {
    for (int i = 0; i < n_directions; ++i) {
      const double th = M_PI * i / n_directions;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    dirs.push_back({0.0, 1.0});
  } else {
    const int n_az = std::max(2, static_cast<int>(std::sqrt(n_directions)));
    const int n_pol = std::max(2, n_directions / n_az);
    for (int i = 0; i < n_pol; ++i)
      for (int j = 0; j < n_az; ++j) {
        const double pol = M_PI * (i + 0.5) / (2.0 * n_pol);  // polar in (0, pi/2)
        const double az = M_PI * j / n_az;
        dirs.push_back({std::sin(pol) * std::cos(az), std::sin(pol) * std::sin(az), std::cos(pol)});
      }
    dirs.push_back({0.0, 0.0, 1.0});
  }
  std::vector<double> xs, ys;
  for (double lam : lambdas) {
    double worst = 0.0;
    for (const auto& w : dirs) {
      std::vector<double> xi(w);
      for (auto& c : xi) c *= lam;
      const auto r = measure_fourier(spec, cutoff, xi, tol);
      worst = std::max(worst, std::abs(r.value));
    }
    if (worst <= 0) continue;
    xs.push_back(std::log2(lam));
    ys.push_back(std::log2(worst));
  }
  return fit_line(xs, ys);
}

}  // namespace maxcurv
