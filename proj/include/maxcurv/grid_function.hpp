#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "maxcurv/delta_grid.hpp"

namespace maxcurv {

/// A real-valued function sampled at the cell centers of a uniform
/// rectangular grid. Evaluation between samples is multilinear; outside the
/// box it is 0 (compact support made explicit). Norms and cube averages use
/// the piecewise-constant cell view.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(MeasuredBox box, std::vector<int> resolution);

  static GridFunction constant(const MeasuredBox& box, std::vector<int> resolution, double value);
  static GridFunction from_function(const MeasuredBox& box, std::vector<int> resolution,
                                    const std::function<double(std::span<const double>)>& fn);

  const MeasuredBox& box() const { return box_; }
  const std::vector<int>& resolution() const { return res_; }
  int dim() const { return box_.dim(); }
  double cell_measure() const { return cell_measure_; }
  double cell_side(int j) const { return box_.side(j) / res_[j]; }
  std::size_t cell_count() const { return values_.size(); }

  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  std::size_t flat_index(std::span<const int> idx) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::vector<double> cell_center(std::span<const int> idx) const;
  std::vector<double> cell_center(std::size_t flat) const;

  /// Multilinear interpolation between cell centers; 0 outside the box.
  double value_at(std::span<const double> y) const;

  /// (sum |v|^p * cell_measure)^(1/p); max |v| for p = infinity.
  double lp_norm(double p) const;
  /// Same Riemann sum against a positive weight sampled on the same grid.
  double weighted_lp_norm(double p, const GridFunction& weight) const;

  double max_abs() const;

  void save_binary(const std::string& path) const;
  static GridFunction load_binary(const std::string& path);
  void save_csv(const std::string& path) const;
  static GridFunction load_csv(const std::string& path);

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.res_ == b.res_ && a.values_ == b.values_ && a.box_.lower == b.box_.lower &&
           a.box_.upper == b.box_.upper;
  }

 private:
  MeasuredBox box_;
  std::vector<int> res_;
  std::vector<double> values_;
  double cell_measure_ = 0.0;
};

}  // namespace maxcurv
