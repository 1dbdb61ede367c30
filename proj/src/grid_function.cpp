#include "maxcurv/grid_function.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace maxcurv {

GridFunction::GridFunction(MeasuredBox box, std::vector<int> resolution)
    : box_(std::move(box)), res_(std::move(resolution)) {
  if (static_cast<int>(res_.size()) != box_.dim())
    throw std::invalid_argument("GridFunction: resolution/box dimension mismatch");
  std::size_t n = 1;
  for (int r : res_) {
    if (r < 1) throw std::invalid_argument("GridFunction: resolution must be >= 1 per axis");
    n *= static_cast<std::size_t>(r);
  }
  values_.assign(n, 0.0);
  cell_measure_ = box_.volume() / static_cast<double>(n);
}

GridFunction GridFunction::constant(const MeasuredBox& box, std::vector<int> resolution, double value) {
  GridFunction g(box, std::move(resolution));
  for (auto& v : g.values_) v = value;
  return g;
}

GridFunction GridFunction::from_function(const MeasuredBox& box, std::vector<int> resolution,
                                         const std::function<double(std::span<const double>)>& fn) {
  GridFunction g(box, std::move(resolution));
  for (std::size_t i = 0; i < g.values_.size(); ++i) g.values_[i] = fn(g.cell_center(i));
  return g;
}

std::size_t GridFunction::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int j = 0; j < dim(); ++j) flat = flat * res_[j] + static_cast<std::size_t>(idx[j]);
  return flat;
}

std::vector<int> GridFunction::unflatten(std::size_t flat) const {
  std::vector<int> idx(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(flat % res_[j]);
    flat /= res_[j];
  }
  return idx;
}

std::vector<double> GridFunction::cell_center(std::span<const int> idx) const {
  std::vector<double> c(dim());
  for (int j = 0; j < dim(); ++j) c[j] = box_.lower[j] + (idx[j] + 0.5) * cell_side(j);
  return c;
}

std::vector<double> GridFunction::cell_center(std::size_t flat) const {
  auto idx = unflatten(flat);
  return cell_center(idx);
}

double GridFunction::value_at(std::span<const double> y) const {
  if (!box_.contains(y)) return 0.0;
  const int n = dim();
  int lo[3];
  double frac[3];
  for (int j = 0; j < n; ++j) {
    double u = (y[j] - box_.lower[j]) / cell_side(j) - 0.5;
    if (u < 0.0) u = 0.0;
    const double umax = static_cast<double>(res_[j] - 1);
    if (u > umax) u = umax;
    double fl = std::floor(u);
    if (fl > umax - 1.0) fl = umax - 1.0;  // keep lo+1 in range; res==1 handled below
    if (fl < 0.0) fl = 0.0;
    lo[j] = static_cast<int>(fl);
    frac[j] = res_[j] == 1 ? 0.0 : u - fl;
  }
  double acc = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int j = 0; j < n; ++j) {
      const int bit = (c >> j) & 1;
      int ij = lo[j] + bit;
      if (ij > res_[j] - 1) ij = res_[j] - 1;
      w *= bit ? frac[j] : 1.0 - frac[j];
      flat = flat * res_[j] + static_cast<std::size_t>(ij);
    }
    if (w != 0.0) acc += w * values_[flat];
  }
  return acc;
}

double GridFunction::lp_norm(double p) const {
  if (std::isinf(p)) return max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
  double acc = 0.0;
  for (double v : values_) acc += std::pow(std::abs(v), p) * cell_measure_;
  return std::pow(acc, 1.0 / p);
}

double GridFunction::weighted_lp_norm(double p, const GridFunction& weight) const {
  if (weight.res_ != res_ || weight.box_.lower != box_.lower || weight.box_.upper != box_.upper)
    throw std::invalid_argument("weighted_lp_norm: weight must live on the same grid");
  if (std::isinf(p)) return max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp_norm: p must be >= 1 or infinity");
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    acc += std::pow(std::abs(values_[i]), p) * weight.values_[i] * cell_measure_;
  return std::pow(acc, 1.0 / p);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  write_u64(os, v);
}

double read_f64(std::istream& is) {
  std::uint64_t v = read_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void GridFunction::save_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_binary: cannot open " + path);
  write_u64(os, static_cast<std::uint64_t>(dim()));
  for (int j = 0; j < dim(); ++j) write_f64(os, box_.lower[j]);
  for (int j = 0; j < dim(); ++j) write_f64(os, box_.upper[j]);
  for (int j = 0; j < dim(); ++j) write_u64(os, static_cast<std::uint64_t>(res_[j]));
  for (double v : values_) write_f64(os, v);
  if (!os) throw std::runtime_error("save_binary: write failed for " + path);
}

GridFunction GridFunction::load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_binary: cannot open " + path);
  const auto n = static_cast<int>(read_u64(is));
  if (n < 1 || n > 8) throw std::runtime_error("load_binary: bad dimension in " + path);
  std::vector<double> lo(n), up(n);
  for (int j = 0; j < n; ++j) lo[j] = read_f64(is);
  for (int j = 0; j < n; ++j) up[j] = read_f64(is);
  std::vector<int> res(n);
  for (int j = 0; j < n; ++j) res[j] = static_cast<int>(read_u64(is));
  GridFunction g(MeasuredBox(lo, up), res);
  for (auto& v : g.values_) v = read_f64(is);
  if (!is) throw std::runtime_error("load_binary: truncated file " + path);
  return g;
}

void GridFunction::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_csv: cannot open " + path);
  os.precision(17);
  os << "dims," << dim() << "\n";
  os << "lower";
  for (int j = 0; j < dim(); ++j) os << "," << box_.lower[j];
  os << "\nupper";
  for (int j = 0; j < dim(); ++j) os << "," << box_.upper[j];
  os << "\nresolution";
  for (int j = 0; j < dim(); ++j) os << "," << res_[j];
  os << "\n";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    auto idx = unflatten(i);
    for (int j = 0; j < dim(); ++j) os << idx[j] << ",";
    os << values_[i] << "\n";
  }
}

GridFunction GridFunction::load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_csv: cannot open " + path);
  auto next_fields = [&is]() {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_csv: truncated file");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
  };
  auto dims = next_fields();
  const int n = std::stoi(dims.at(1));
  auto lo_f = next_fields();
  auto up_f = next_fields();
  auto res_f = next_fields();
  std::vector<double> lo(n), up(n);
  std::vector<int> res(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = std::stod(lo_f.at(j + 1));
    up[j] = std::stod(up_f.at(j + 1));
    res[j] = std::stoi(res_f.at(j + 1));
  }
  GridFunction g(MeasuredBox(lo, up), res);
  for (std::size_t i = 0; i < g.values_.size(); ++i) {
    auto row = next_fields();
    g.values_[i] = std::stod(row.at(n));
  }
  return g;
}

}  // namespace maxcurv
