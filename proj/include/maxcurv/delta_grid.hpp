#pragma once

#include <array>
#include <span>
#include <vector>

#include "maxcurv/dilation.hpp"

namespace maxcurv {

/// Axes-parallel box with explicit corners; the concrete realization of
/// cubes handed to quadrature and grid code.
struct MeasuredBox {
  std::vector<double> lower;
  std::vector<double> upper;

  MeasuredBox() = default;
  MeasuredBox(std::vector<double> lo, std::vector<double> up);

  int dim() const { return static_cast<int>(lower.size()); }
  double side(int j) const { return upper[j] - lower[j]; }
  double volume() const;
  bool contains(std::span<const double> x) const;  // half-open [lower, upper)
  bool intersects(const MeasuredBox& other) const;
  MeasuredBox hull(const MeasuredBox& other) const;
};

/// A dyadic delta-cube: scale index k, integer position, shift label
/// s in {0, 1/3, 2/3}^n, living in the shifted dyadic delta-grid D^delta_s.
///
/// The realized interval in coordinate j is
///     2^ceil(k b_j) * (i_j + eps * s_j/3,  i_j + 1 + eps * s_j/3),
/// half-open on the right, where eps = +1 when ceil(k b_j) is even and -1
/// when odd. The sign alternation is what makes cubes of one shifted grid
/// nested across scales (plain s_j/3 offsets at every scale straddle
/// coarser boundaries whenever the scale gap is odd); for s = 0 it is the
/// grid from the definition verbatim, and at even ceil(k b_j) the two
/// agree. Edges are carried exactly as integers in units of side/3.
class DeltaCube {
 public:
  DeltaCube(Dilation dil, long long k, std::vector<long long> position, std::vector<int> shift_thirds);

  /// The cube of D^delta_s at scale k whose realized box contains x.
  static DeltaCube containing(std::span<const double> x, long long k, std::vector<int> shift_thirds,
                              const Dilation& dil);

  const Dilation& dilation() const { return dil_; }
  long long scale() const { return k_; }
  int dim() const { return static_cast<int>(pos_.size()); }
  const std::vector<long long>& position() const { return pos_; }
  const std::vector<int>& shift_thirds() const { return shift_; }

  /// eps in the realized-box formula for coordinate j.
  int shift_sign(int j) const;
  /// Exponent e_j with side_j = 2^{e_j}.
  long long side_exponent(int j) const { return dil_.ceil_kb(k_, j); }
  /// Lower edge as an exact integer in units of 2^{e_j}/3: 3 i_j + eps s_j.
  long long edge_thirds(int j) const;

  double side(int j) const { return std::ldexp(1.0, static_cast<int>(side_exponent(j))); }
  double lower(int j) const;
  double upper(int j) const;
  double volume() const;
  MeasuredBox box() const;
  std::vector<double> center() const;

  bool contains_point(std::span<const double> x) const;

  /// Exact containment / disjointness; both cubes must belong to the same
  /// shifted grid (equal dilation and shift).
  bool contains_cube(const DeltaCube& other) const;
  bool disjoint_from(const DeltaCube& other) const;

  /// The grid cubes at scale k-1 that partition this cube.
  std::vector<DeltaCube> children() const;
  /// The grid cube at scale k+1 containing this cube.
  DeltaCube parent() const;

  friend bool operator==(const DeltaCube& a, const DeltaCube& b) {
    return a.k_ == b.k_ && a.pos_ == b.pos_ && a.shift_ == b.shift_ && a.dil_ == b.dil_;
  }

 private:
  Dilation dil_;
  long long k_;
  std::vector<long long> pos_;
  std::vector<int> shift_;  // s_j * 3, each in {0, 1, 2}
};

/// One piece of the one-third cover of a cube: the realized sub-box, the
/// translation label gamma in {-1, 0, +1}^n, and the shifted-grid cube
/// (same scale) whose central third the piece is.
struct ThirdPiece {
  MeasuredBox piece;
  std::vector<int> gamma;
  DeltaCube host;
};

/// Q = union over gamma of (1/3 Q)^gamma: 3^n congruent pieces that
/// partition Q, each the central third of a cube of some shifted grid.
std::vector<ThirdPiece> one_third_cover(const DeltaCube& cube);

/// Exact comparison of A*2^a vs B*2^b (sign-aware, arbitrary exponent gap).
int compare_scaled(long long a_mant, long long a_exp, long long b_mant, long long b_exp);

}  // namespace maxcurv
