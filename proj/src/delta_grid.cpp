#include "maxcurv/delta_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace maxcurv {

namespace {

long long floordiv(long long a, long long b) {
  long long q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

long long mod3(long long a) {
  long long r = a % 3;
  return r < 0 ? r + 3 : r;
}

}  // namespace

MeasuredBox::MeasuredBox(std::vector<double> lo, std::vector<double> up)
    : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size()) throw std::invalid_argument("MeasuredBox: corner size mismatch");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (upper[j] < lower[j]) throw std::invalid_argument("MeasuredBox: upper < lower");
}

double MeasuredBox::volume() const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= side(j);
  return v;
}

bool MeasuredBox::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int j = 0; j < dim(); ++j)
    if (!(lower[j] <= x[j] && x[j] < upper[j])) return false;
  return true;
}

bool MeasuredBox::intersects(const MeasuredBox& other) const {
  for (int j = 0; j < dim(); ++j)
    if (upper[j] <= other.lower[j] || other.upper[j] <= lower[j]) return false;
  return true;
}

MeasuredBox MeasuredBox::hull(const MeasuredBox& other) const {
  std::vector<double> lo(lower), up(upper);
  for (int j = 0; j < dim(); ++j) {
    lo[j] = std::min(lo[j], other.lower[j]);
    up[j] = std::max(up[j], other.upper[j]);
  }
  return MeasuredBox(lo, up);
}

int compare_scaled(long long a_mant, long long a_exp, long long b_mant, long long b_exp) {
  if (a_exp < b_exp) return -compare_scaled(b_mant, b_exp, a_mant, a_exp);
  const long long d = a_exp - b_exp;  // >= 0; compare a_mant * 2^d vs b_mant
  if (a_mant == 0) return b_mant > 0 ? -1 : (b_mant < 0 ? 1 : 0);
  if (d > 62) return a_mant > 0 ? 1 : -1;  // magnitude beyond any int64 b_mant
  const __int128 lhs = static_cast<__int128>(a_mant) << d;
  const __int128 rhs = b_mant;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

DeltaCube::DeltaCube(Dilation dil, long long k, std::vector<long long> position,
                     std::vector<int> shift_thirds)
    : dil_(std::move(dil)), k_(k), pos_(std::move(position)), shift_(std::move(shift_thirds)) {
  if (static_cast<int>(pos_.size()) != dil_.dim() || static_cast<int>(shift_.size()) != dil_.dim())
    throw std::invalid_argument("DeltaCube: dimension mismatch");
  for (int s : shift_)
    if (s < 0 || s > 2) throw std::invalid_argument("DeltaCube: shift must be in {0, 1/3, 2/3}");
  (void)dil_.ceil_kb(k_, 0);  // validates the scale range
}

int DeltaCube::shift_sign(int j) const { return (side_exponent(j) & 1LL) ? -1 : 1; }

long long DeltaCube::edge_thirds(int j) const { return 3 * pos_[j] + shift_sign(j) * shift_[j]; }

double DeltaCube::lower(int j) const {
  return std::ldexp(static_cast<double>(edge_thirds(j)), static_cast<int>(side_exponent(j))) / 3.0;
}

double DeltaCube::upper(int j) const {
  return std::ldexp(static_cast<double>(edge_thirds(j) + 3), static_cast<int>(side_exponent(j))) / 3.0;
}

double DeltaCube::volume() const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= side(j);
  return v;
}

MeasuredBox DeltaCube::box() const {
  std::vector<double> lo(dim()), up(dim());
  for (int j = 0; j < dim(); ++j) {
    lo[j] = lower(j);
    up[j] = upper(j);
  }
  return MeasuredBox(std::move(lo), std::move(up));
}

std::vector<double> DeltaCube::center() const {
  std::vector<double> c(dim());
  for (int j = 0; j < dim(); ++j) c[j] = lower(j) + 0.5 * side(j);
  return c;
}

bool DeltaCube::contains_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int j = 0; j < dim(); ++j)
    if (!(lower(j) <= x[j] && x[j] < upper(j))) return false;
  return true;
}

DeltaCube DeltaCube::containing(std::span<const double> x, long long k, std::vector<int> shift_thirds,
                                const Dilation& dil) {
  if (static_cast<int>(x.size()) != dil.dim())
    throw std::invalid_argument("DeltaCube::containing: dimension mismatch");
  std::vector<long long> pos(x.size());
  for (int j = 0; j < dil.dim(); ++j) {
    const long long e = dil.ceil_kb(k, j);
    const int eps = (e & 1LL) ? -1 : 1;
    const double u = x[j] / std::ldexp(1.0, static_cast<int>(e)) -
                     eps * static_cast<double>(shift_thirds[j]) / 3.0;
    pos[j] = static_cast<long long>(std::floor(u));
  }
  return DeltaCube(dil, k, std::move(pos), std::move(shift_thirds));
}

bool DeltaCube::contains_cube(const DeltaCube& other) const {
  if (!(dil_ == other.dil_) || shift_ != other.shift_)
    throw std::invalid_argument("contains_cube: cubes from different shifted grids");
  for (int j = 0; j < dim(); ++j) {
    const long long e = side_exponent(j), eo = other.side_exponent(j);
    if (compare_scaled(edge_thirds(j), e, other.edge_thirds(j), eo) > 0) return false;
    if (compare_scaled(other.edge_thirds(j) + 3, eo, edge_thirds(j) + 3, e) > 0) return false;
  }
  return true;
}

bool DeltaCube::disjoint_from(const DeltaCube& other) const {
  if (!(dil_ == other.dil_) || shift_ != other.shift_)
    throw std::invalid_argument("disjoint_from: cubes from different shifted grids");
  for (int j = 0; j < dim(); ++j) {
    const long long e = side_exponent(j), eo = other.side_exponent(j);
    if (compare_scaled(edge_thirds(j) + 3, e, other.edge_thirds(j), eo) <= 0) return true;
    if (compare_scaled(other.edge_thirds(j) + 3, eo, edge_thirds(j), e) <= 0) return true;
  }
  return false;
}

std::vector<DeltaCube> DeltaCube::children() const {
  const int n = dim();
  std::vector<long long> gap(n), count(n), base(n);
  for (int j = 0; j < n; ++j) {
    gap[j] = side_exponent(j) - dil_.ceil_kb(k_ - 1, j);
    if (gap[j] < 1 || gap[j] > 20) throw std::domain_error("children: scale gap out of range");
    count[j] = 1LL << gap[j];
    base[j] = edge_thirds(j) << gap[j];  // parent edge on the child grid
  }
  std::vector<DeltaCube> out;
  std::vector<long long> idx(n, 0);
  for (;;) {
    std::vector<long long> pos(n);
    std::vector<int> sh(shift_);
    for (int j = 0; j < n; ++j) {
      const long long e_child = dil_.ceil_kb(k_ - 1, j);
      const int eps = (e_child & 1LL) ? -1 : 1;
      const long long t_child = base[j] + 3 * idx[j];
      const long long num = t_child - eps * shift_[j];
      if (num % 3 != 0) throw std::logic_error("children: misaligned child grid");
      pos[j] = num / 3;
    }
    out.emplace_back(dil_, k_ - 1, std::move(pos), std::move(sh));
    int j = n - 1;
    while (j >= 0 && ++idx[j] == count[j]) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

DeltaCube DeltaCube::parent() const {
  const int n = dim();
  std::vector<long long> pos(n);
  for (int j = 0; j < n; ++j) {
    const long long e_par = dil_.ceil_kb(k_ + 1, j);
    const long long gap = e_par - side_exponent(j);
    if (gap < 1 || gap > 62) throw std::domain_error("parent: scale gap out of range");
    const int eps = (e_par & 1LL) ? -1 : 1;
    const long long q = floordiv(edge_thirds(j), 1LL << gap);
    const long long t_par = q - mod3(q - eps * shift_[j]);
    pos[j] = (t_par - eps * shift_[j]) / 3;
  }
  return DeltaCube(dil_, k_ + 1, std::move(pos), shift_);
}

std::vector<ThirdPiece> one_third_cover(const DeltaCube& cube) {
  const int n = cube.dim();
  std::vector<ThirdPiece> out;
  std::vector<int> gamma(n, -1);
  for (;;) {
    std::vector<double> lo(n), up(n);
    std::vector<long long> host_pos(n);
    std::vector<int> host_shift(n);
    for (int j = 0; j < n; ++j) {
      const long long e = cube.side_exponent(j);
      const long long t_host = cube.edge_thirds(j) + gamma[j];
      lo[j] = std::ldexp(static_cast<double>(t_host + 1), static_cast<int>(e)) / 3.0;
      up[j] = std::ldexp(static_cast<double>(t_host + 2), static_cast<int>(e)) / 3.0;
      const int eps = cube.shift_sign(j);
      host_shift[j] = static_cast<int>(mod3(eps * t_host));
      host_pos[j] = (t_host - eps * host_shift[j]) / 3;
    }
    out.push_back(ThirdPiece{MeasuredBox(std::move(lo), std::move(up)), gamma,
                             DeltaCube(cube.dilation(), cube.scale(), std::move(host_pos),
                                       std::move(host_shift))});
    int j = n - 1;
    while (j >= 0 && ++gamma[j] == 2) gamma[j--] = -1;
    if (j < 0) break;
  }
  return out;
}

}  // namespace maxcurv
