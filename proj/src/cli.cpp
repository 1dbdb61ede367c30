#include "maxcurv/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxcurv/averaging.hpp"
#include "maxcurv/counterexamples.hpp"
#include "maxcurv/csv.hpp"
#include "maxcurv/oscillatory.hpp"
#include "maxcurv/parallel.hpp"
#include "maxcurv/regions.hpp"
#include "maxcurv/sparse.hpp"
#include "maxcurv/weights.hpp"

namespace maxcurv {

namespace {

using nlohmann::json;

struct CommonParams {
  std::string config_path;
  std::string out_dir = ".";
  unsigned long long seed = 1;
  int threads = 0;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  is >> j;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  return j;
}

template <typename T>
void from_config(const json& cfg, const std::string& key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_summary(const CommonParams& common, const std::string& name, const json& summary) {
  std::filesystem::create_directories(common.out_dir);
  const std::string path = common.out_dir + "/" + name + "_summary.json";
  std::ofstream os(path);
  os << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << std::endl;
}

std::string out_path(const CommonParams& common, const std::string& file) {
  std::filesystem::create_directories(common.out_dir);
  return common.out_dir + "/" + file;
}

struct SpecParams {
  std::string family = "homogeneous_curve";
  int d = 2;
  int m = 1;
  double c = 0.0;
  std::string phi = "1";
  std::string exponents;  // comma-separated rationals; default from family
  double support_radius = 0.125;
  std::string cutoff = "bump";
  double cutoff_center = 0.0;
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  return out;
}

SurfaceSpec make_spec(const SpecParams& sp) {
  const SurfaceFamily family = family_from_name(sp.family);
  Dilation dil = Dilation::isotropic(2);
  if (!sp.exponents.empty()) {
    std::vector<Rational> exps;
    std::string token;
    std::stringstream ss(sp.exponents);
    while (std::getline(ss, token, ',')) exps.push_back(Rational::parse(token));
    dil = Dilation::normalize(exps);
  } else {
    switch (family) {
      case SurfaceFamily::homogeneous_curve:
      case SurfaceFamily::perturbed_homogeneous:
        dil = Dilation::homogeneous(sp.d);
        break;
      case SurfaceFamily::finite_type_curve:
        dil = Dilation::isotropic(2);
        break;
      case SurfaceFamily::degenerate_surface:
        dil = Dilation::normalize({Rational(1), Rational(1), Rational(sp.d)});
        break;
      default:
        dil = Dilation::isotropic(3);
        break;
    }
  }
  return SurfaceSpec(family, sp.d, sp.m, sp.c, parse_doubles(sp.phi), std::move(dil),
                     sp.support_radius);
}

Cutoff make_cutoff(const SpecParams& sp, const SurfaceSpec& spec) {
  const std::vector<double> center(spec.parameter_dim(), sp.cutoff_center);
  if (sp.cutoff == "indicator")
    return Cutoff(CutoffProfile::indicator, sp.support_radius, center);
  return Cutoff::bump(spec.support_radius(), center);
}

void add_spec_flags(CLI::App* cmd, SpecParams& sp) {
  cmd->add_option("--family", sp.family, "surface family");
  cmd->add_option("--d", sp.d, "type order");
  cmd->add_option("--m", sp.m, "perturbation order");
  cmd->add_option("--c", sp.c, "offset");
  cmd->add_option("--phi", sp.phi, "phi coefficients, comma separated");
  cmd->add_option("--exponents", sp.exponents, "dilation exponents, comma separated rationals");
  cmd->add_option("--support-radius", sp.support_radius, "cutoff support radius");
  cmd->add_option("--cutoff", sp.cutoff, "cutoff profile: bump or indicator");
  cmd->add_option("--cutoff-center", sp.cutoff_center, "cutoff center");
}

void spec_from_config(const json& cfg, SpecParams& sp) {
  from_config(cfg, "family", sp.family);
  from_config(cfg, "d", sp.d);
  from_config(cfg, "m", sp.m);
  from_config(cfg, "c", sp.c);
  from_config(cfg, "phi", sp.phi);
  from_config(cfg, "exponents", sp.exponents);
  from_config(cfg, "support_radius", sp.support_radius);
  from_config(cfg, "cutoff", sp.cutoff);
  from_config(cfg, "cutoff_center", sp.cutoff_center);
}

GridFunction default_test_function(const std::string& kind, int dim, int res) {
  std::vector<double> lo(dim, -0.5), hi(dim, 0.5);
  const MeasuredBox box(lo, hi);
  const std::vector<int> resolution(dim, res);
  if (kind == "box") return GridFunction::constant(box, resolution, 1.0);
  if (kind == "spike") {
    GridFunction g(box, resolution);
    std::vector<int> idx(dim, res / 2);
    g[g.flat_index(idx)] = 1.0;
    return g;
  }
  return GridFunction::from_function(box, resolution, [](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return r2 < 0.25 ? std::exp(-1.0 / (1.0 - 4.0 * r2)) : 0.0;
  });
}

MeasuredBox eval_box_for(const SurfaceSpec& spec, const Cutoff& cutoff, const MeasuredBox& fbox,
                         double t_lo, double t_hi) {
  const int n = spec.ambient_dim();
  std::vector<double> off_lo(n, 0.0), off_hi(n, 0.0);
  const int probes = 256;
  for (int ti = 0; ti <= 16; ++ti) {
    const double t = t_lo + (t_hi - t_lo) * ti / 16.0;
    if (spec.parameter_dim() == 1) {
      const auto sup = cutoff.support(0);
      for (int i = 0; i <= probes; ++i) {
        const double x = sup[0] + (sup[1] - sup[0]) * i / probes;
        const auto g = spec.point(x);
        for (int j = 0; j < n; ++j) {
          const double v = std::pow(t, spec.dilation().exponent_value(j)) * g[j];
          off_lo[j] = std::min(off_lo[j], v);
          off_hi[j] = std::max(off_hi[j], v);
        }
      }
    } else {
      const auto s0 = cutoff.support(0);
      const auto s1 = cutoff.support(1);
      for (int i = 0; i <= 32; ++i)
        for (int l = 0; l <= 32; ++l) {
          const std::array<double, 2> x{s0[0] + (s0[1] - s0[0]) * i / 32.0,
                                        s1[0] + (s1[1] - s1[0]) * l / 32.0};
          const auto g = spec.point(std::span<const double>(x));
          for (int j = 0; j < n; ++j) {
            const double v = std::pow(t, spec.dilation().exponent_value(j)) * g[j];
            off_lo[j] = std::min(off_lo[j], v);
            off_hi[j] = std::max(off_hi[j], v);
          }
        }
    }
  }
  std::vector<double> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = fbox.lower[j] - off_hi[j];
    hi[j] = fbox.upper[j] - off_lo[j];
  }
  return MeasuredBox(lo, hi);
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad exponent pair: " + token);
    const Rational p = Rational::parse(token.substr(0, colon));
    const Rational q = Rational::parse(token.substr(colon + 1));
    out.emplace_back(p.value(), q.value());
  }
  if (out.empty()) throw std::invalid_argument("no exponent pairs given");
  return out;
}

// ---------------------------------------------------------------- regions --

int cmd_regions(const CommonParams& common, const json& cfg, std::string family, int d,
                std::string compare_with, int compare_d, int samples) {
  from_config(cfg, "samples", samples);
  const Region a = delta_region(delta_from_name(family), d);
  json summary;
  summary["command"] = "regions";
  summary["family"] = family;
  summary["d"] = d;
  CsvWriter csv(out_path(common, "regions_boundary.csv"));
  csv.row({"region", "constraint", "x0", "y0", "x1", "y1"});
  auto emit_boundary = [&csv](const Region& r) {
    for (const auto& seg : boundary_segments(r))
      csv.row({r.name, seg.constraint, CsvWriter::num(seg.x0), CsvWriter::num(seg.y0),
               CsvWriter::num(seg.x1), CsvWriter::num(seg.y1)});
  };
  emit_boundary(a);
  if (!compare_with.empty()) {
    const Region b = delta_region(delta_from_name(compare_with), compare_d > 0 ? compare_d : d);
    emit_boundary(b);
    const auto cmp = compare_regions(a, b, samples);
    summary["compare"] = compare_with;
    summary["verdict"] = order_name(cmp.order);
    if (cmp.witness_in_a_only)
      summary["witness_in_" + family] = {cmp.witness_in_a_only->inv_p.str(),
                                         cmp.witness_in_a_only->inv_q.str()};
    if (cmp.witness_in_b_only)
      summary["witness_in_" + compare_with] = {cmp.witness_in_b_only->inv_p.str(),
                                               cmp.witness_in_b_only->inv_q.str()};
  }
  write_summary(common, "regions", summary);
  return 0;
}

// ----------------------------------------------------------- fourier-decay --

int cmd_fourier_decay(const CommonParams& common, SpecParams sp, int lambda_min_exp,
                      int lambda_max_exp, int directions, double tol) {
  const SurfaceSpec spec = make_spec(sp);
  const Cutoff cutoff = make_cutoff(sp, spec);
  std::vector<double> lambdas;
  for (int e = lambda_min_exp; e <= lambda_max_exp; ++e) lambdas.push_back(std::ldexp(1.0, e));

  // Normal direction at the cutoff center (curves), or the vertical (surfaces).
  std::vector<double> normal;
  if (spec.ambient_dim() == 2) {
    const double x0 = cutoff.center()[0];
    const double h = 1e-6;
    const auto p1 = spec.point(x0 + h);
    const auto p0 = spec.point(x0 - h);
    const double tx = p1[0] - p0[0], ty = p1[1] - p0[1];
    const double nrm = std::hypot(tx, ty);
    normal = {-ty / nrm, tx / nrm};
  } else {
    normal = {0.0, 0.0, 1.0};
  }

  CsvWriter csv(out_path(common, "fourier_decay.csv"));
  csv.row({"lambda", "dir_x", "dir_y", "abs_value", "error_estimate"});
  {
    std::vector<double> zero(spec.ambient_dim(), 0.0);
    const auto r0 = measure_fourier(spec, cutoff, zero, tol);
    csv.row({"0", CsvWriter::num(normal[0]), CsvWriter::num(normal[1]),
             CsvWriter::num(std::abs(r0.value)), CsvWriter::num(r0.error_estimate)});
  }
  bool all_converged = true;
  for (double lam : lambdas) {
    std::vector<double> xi(normal);
    for (auto& c : xi) c *= lam;
    const auto r = measure_fourier(spec, cutoff, xi, tol);
    all_converged = all_converged && r.converged;
    csv.row({CsvWriter::num(lam), CsvWriter::num(normal[0]), CsvWriter::num(normal[1]),
             CsvWriter::num(std::abs(r.value)), CsvWriter::num(r.error_estimate)});
  }
  const LineFit normal_fit = fourier_decay_slope(spec, cutoff, normal, lambdas, tol);
  const LineFit worst_fit = worst_direction_decay(spec, cutoff, directions, lambdas, tol);

  json summary;
  summary["command"] = "fourier-decay";
  summary["family"] = sp.family;
  summary["d"] = sp.d;
  summary["normal_direction"] = normal;
  summary["normal_slope"] = normal_fit.slope;
  summary["normal_r2"] = normal_fit.r_squared;
  summary["worst_direction_slope"] = worst_fit.slope;
  summary["worst_direction_r2"] = worst_fit.r_squared;
  summary["converged"] = all_converged;
  write_summary(common, "fourier_decay", summary);
  return all_converged ? 0 : 3;
}

// ------------------------------------------------------------ maximal-norm --

int cmd_maximal_norm(const CommonParams& common, SpecParams sp, std::string pairs,
                     std::string test_fn, int res, int eval_res, int time_samples) {
  const SurfaceSpec spec = make_spec(sp);
  const Cutoff cutoff = make_cutoff(sp, spec);
  const GridFunction f = default_test_function(test_fn, spec.ambient_dim(), res);
  const auto ts = TimeSampling::dense(time_samples);
  const MeasuredBox eval = eval_box_for(spec, cutoff, f.box(), 1.0, 2.0);
  const std::vector<int> eres(spec.ambient_dim(), eval_res);

  CsvWriter csv(out_path(common, "maximal_norm.csv"));
  csv.row({"p", "q", "ratio"});
  json rows = json::array();
  for (const auto& [p, q] : parse_pairs(pairs)) {
    const double ratio = norm_ratio(spec, cutoff, f, p, q, ts, eval, eres);
    csv.row({CsvWriter::num(p), CsvWriter::num(q), CsvWriter::num(ratio)});
    rows.push_back({{"p", p}, {"q", q}, {"ratio", ratio}});
  }
  json summary;
  summary["command"] = "maximal-norm";
  summary["family"] = sp.family;
  summary["d"] = sp.d;
  summary["test_fn"] = test_fn;
  summary["rows"] = rows;
  write_summary(common, "maximal_norm", summary);
  return 0;
}

// ----------------------------------------------------------------- scaling --

int cmd_scaling(const CommonParams& common, const json& cfg, std::string tag, int d, double p,
                double q, int k_min, int k_max) {
  ExampleOptions opts;
  from_config(cfg, "thin_cells", opts.thin_cells);
  std::vector<int> ks;
  for (int k = k_min; k <= k_max; ++k) ks.push_back(k);
  const auto result = measure_scaling(tag_from_name(tag), d, p, q, ks, opts);

  CsvWriter csv(out_path(common, "scaling.csv"));
  csv.row({"tag", "d", "k", "p", "q", "lhs_norm", "rhs_norm"});
  for (const auto& row : result.rows)
    csv.row({tag, std::to_string(d), std::to_string(row.k), CsvWriter::num(p), CsvWriter::num(q),
             CsvWriter::num(row.lhs_norm), CsvWriter::num(row.rhs_norm)});

  json summary;
  summary["command"] = "scaling";
  summary["tag"] = tag;
  summary["d"] = d;
  summary["p"] = p;
  summary["q"] = q;
  summary["lhs_slope"] = result.lhs_fit.slope;
  summary["lhs_r2"] = result.lhs_fit.r_squared;
  summary["rhs_slope"] = result.rhs_fit.slope;
  summary["rhs_r2"] = result.rhs_fit.r_squared;
  summary["predicted_lhs_slope"] = result.predicted_lhs;
  summary["predicted_rhs_slope"] = result.predicted_rhs;
  write_summary(common, "scaling", summary);
  return 0;
}

// ------------------------------------------------------------------ sparse --

int cmd_sparse(const CommonParams& common, const json& cfg, double C, double p, double qprime,
               int res, int k_min, int k_max) {
  DominationOptions opts;
  opts.C = C;
  opts.k_min = k_min;
  opts.k_max = k_max;
  opts.seed = common.seed;
  opts.eval.x_samples = 128;
  from_config(cfg, "max_depth", opts.max_depth);

  const SurfaceSpec spec(SurfaceFamily::homogeneous_curve, 2, 1, 0.0, {1.0},
                         Dilation::homogeneous(2), 0.125);
  const Cutoff cutoff = Cutoff::bump(spec.support_radius(), {0.0});
  const GridFunction f =
      GridFunction::constant(MeasuredBox({-0.5, -0.5}, {0.5, 0.5}), {res, res}, 1.0);
  const GridFunction g =
      GridFunction::constant(MeasuredBox({-0.75, -0.75}, {0.25, 0.25}), {res, res}, 1.0);

  const auto report = verify_sparse_domination(spec, cutoff, f, g, p, qprime, opts);

  std::ofstream sel(out_path(common, "sparse_selection.json"));
  sel << report.selection.dump(2) << "\n";

  CsvWriter csv(out_path(common, "sparse_family.csv"));
  csv.row({"case", "inner_product", "best_lambda", "ratio"});
  csv.row({report.base.label, CsvWriter::num(report.base.inner_product),
           CsvWriter::num(report.base.best_lambda), CsvWriter::num(report.base.ratio)});
  for (const auto& c : report.family)
    csv.row({c.label, CsvWriter::num(c.inner_product), CsvWriter::num(c.best_lambda),
             CsvWriter::num(c.ratio)});

  json summary;
  summary["command"] = "sparse";
  summary["C"] = C;
  summary["p"] = p;
  summary["qprime"] = qprime;
  summary["base_ratio"] = report.base.ratio;
  summary["stability_factor"] = report.stability_factor;
  summary["cases"] = json::array();
  for (const auto& c : report.family)
    summary["cases"].push_back({{"label", c.label}, {"ratio", c.ratio}});
  write_summary(common, "sparse", summary);
  return 0;
}

// ----------------------------------------------------------------- weights --

int cmd_weights(const CommonParams& common, const json& cfg, std::string weight_kind, double gamma,
                double p, double q, double r, int res, int window_k_min, int window_k_max,
                const std::string& weight_file) {
  (void)cfg;
  const SurfaceSpec spec(SurfaceFamily::homogeneous_curve, 2, 1, 0.0, {1.0},
                         Dilation::homogeneous(2), 0.125);
  const Cutoff cutoff = Cutoff::bump(spec.support_radius(), {0.0});
  const Dilation& dil = spec.dilation();

  // The box is the scale-0 cube [0,1]^2 so the two-valued split at 1/2 sits
  // in the interior of cubes of the family.
  MeasuredBox box({0.0, 0.0}, {1.0, 1.0});
  std::vector<int> resolution{res, res};
  std::optional<Weight> loaded;
  if (!weight_file.empty()) {
    loaded = Weight(GridFunction::load_binary(weight_file), dil);
    box = loaded->data.box();
    resolution = loaded->data.resolution();
  }
  Weight w = loaded                       ? *loaded
             : weight_kind == "two-valued" ? two_valued_split(box, resolution, dil, 1.0, 4.0)
             : weight_kind == "power"      ? clipped_power_weight(box, resolution, dil, gamma)
                                           : constant_weight(box, resolution, dil, 1.0);
  GridFunction f = GridFunction::constant(box, resolution, 1.0);

  const auto cubes = cubes_in_window(box, window_k_min, window_k_max, {0, 0}, dil);
  const double ap = ap_characteristic(w, r / p, cubes);
  const double rh = rh_characteristic(w, (q / r) / (q / r - 1.0), cubes);
  const double alpha = alpha_exponent(p, q, r);
  const double weighted = weighted_norm_ratio(spec, cutoff, f, w, r, -2, 2);
  const double unweighted = unweighted_norm_ratio(spec, cutoff, f, r, -2, 2);

  CsvWriter csv(out_path(common, "weights.csv"));
  csv.row({"quantity", "value"});
  csv.row({"ap_characteristic", CsvWriter::num(ap)});
  csv.row({"rh_characteristic", CsvWriter::num(rh)});
  csv.row({"alpha", CsvWriter::num(alpha)});
  csv.row({"weighted_ratio", CsvWriter::num(weighted)});
  csv.row({"unweighted_ratio", CsvWriter::num(unweighted)});

  json summary;
  summary["command"] = "weights";
  summary["weight"] = weight_kind;
  summary["p"] = p;
  summary["q"] = q;
  summary["r"] = r;
  summary["window_k_min"] = window_k_min;
  summary["window_k_max"] = window_k_max;
  summary["ap_characteristic"] = ap;
  summary["rh_characteristic"] = rh;
  summary["alpha"] = alpha;
  summary["weighted_ratio"] = weighted;
  summary["unweighted_ratio"] = unweighted;
  summary["characteristic_bound"] = std::pow(ap * rh, alpha);
  write_summary(common, "weights", summary);
  return 0;
}

// -------------------------------------------------------------- continuity --

int cmd_continuity(const CommonParams& common, SpecParams sp, double p, double q, int z_min_exp,
                   int z_max_exp, std::string test_fn, int res, int eval_res, int time_samples) {
  const SurfaceSpec spec = make_spec(sp);
  const Cutoff cutoff = make_cutoff(sp, spec);
  const GridFunction f = default_test_function(test_fn, spec.ambient_dim(), res);
  const auto ts = TimeSampling::dense(time_samples);
  MeasuredBox eval = eval_box_for(spec, cutoff, f.box(), 1.0, 2.0);
  // Margin for the translated argument.
  for (int j = 0; j < eval.dim(); ++j) {
    eval.lower[j] -= std::ldexp(1.0, z_max_exp);
    eval.upper[j] += std::ldexp(1.0, z_max_exp);
  }
  const std::vector<int> eres(spec.ambient_dim(), eval_res);
  const double fp = f.lp_norm(p);

  CsvWriter csv(out_path(common, "continuity.csv"));
  csv.row({"z", "diff_norm", "ratio"});
  std::vector<double> xs, ys;
  for (int e = z_min_exp; e <= z_max_exp; ++e) {
    const double zmag = std::ldexp(1.0, e);
    std::vector<double> z(spec.ambient_dim(), 0.0);
    z[0] = zmag / std::sqrt(2.0);
    z[1] = zmag / std::sqrt(2.0);
    const double dn = continuity_diff_norm(spec, cutoff, f, z, q, ts, eval, eres);
    csv.row({CsvWriter::num(zmag), CsvWriter::num(dn), CsvWriter::num(dn / fp)});
    if (dn > 0) {
      xs.push_back(std::log2(zmag));
      ys.push_back(std::log2(dn / fp));
    }
  }
  const LineFit fit = fit_line(xs, ys);
  json summary;
  summary["command"] = "continuity";
  summary["family"] = sp.family;
  summary["d"] = sp.d;
  summary["p"] = p;
  summary["q"] = q;
  summary["slope"] = fit.slope;
  summary["r2"] = fit.r_squared;
  write_summary(common, "continuity", summary);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"maxcurv: curvature-degenerate maximal functions, sparse domination and weights"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonParams common;
  app.add_option("--config", common.config_path, "JSON config file (flags override)");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--seed", common.seed, "random seed");
  app.add_option("--threads", common.threads, "worker threads (0 = hardware)");

  // regions
  auto* regions = app.add_subcommand("regions", "exponent region geometry");
  std::string reg_family = "delta1", reg_compare;
  int reg_d = 2, reg_compare_d = 0, reg_samples = 120;
  regions->add_option("--family", reg_family, "region: delta0..delta3");
  regions->add_option("--d", reg_d, "type order");
  regions->add_option("--compare", reg_compare, "region to compare against");
  regions->add_option("--compare-d", reg_compare_d, "type order of the comparison region");
  regions->add_option("--samples", reg_samples, "scan denominator");

  // fourier-decay
  auto* fourier = app.add_subcommand("fourier-decay", "decay of the measure's Fourier transform");
  SpecParams fd_spec;
  add_spec_flags(fourier, fd_spec);
  int fd_lmin = 4, fd_lmax = 10, fd_dirs = 64;
  double fd_tol = 1e-10;
  fourier->add_option("--lambda-min-exp", fd_lmin, "smallest lambda exponent");
  fourier->add_option("--lambda-max-exp", fd_lmax, "largest lambda exponent");
  fourier->add_option("--directions", fd_dirs, "direction count for the worst-case sweep");
  fourier->add_option("--tol", fd_tol, "quadrature tolerance");

  // maximal-norm
  auto* maxnorm = app.add_subcommand("maximal-norm", "norm ratios of the local maximal operator");
  SpecParams mn_spec;
  add_spec_flags(maxnorm, mn_spec);
  std::string mn_pairs = "2:2";
  std::string mn_test_fn = "blob";
  int mn_res = 64, mn_eval_res = 48, mn_times = 513;
  maxnorm->add_option("--pairs", mn_pairs, "exponent pairs p:q, comma separated");
  maxnorm->add_option("--test-fn", mn_test_fn, "test function: box, blob, spike");
  maxnorm->add_option("--res", mn_res, "test function resolution");
  maxnorm->add_option("--eval-res", mn_eval_res, "evaluation grid resolution");
  maxnorm->add_option("--time-samples", mn_times, "dense t samples in [1,2]");

  // scaling
  auto* scaling = app.add_subcommand("scaling", "counterexample scaling sweeps");
  std::string sc_tag = "S1";
  int sc_d = 2, sc_kmin = 2, sc_kmax = 6;
  double sc_p = 2.0, sc_q = 2.0;
  scaling->add_option("--tag", sc_tag, "family S1..S5");
  scaling->add_option("--d", sc_d, "type order");
  scaling->add_option("--p", sc_p, "p");
  scaling->add_option("--q", sc_q, "q");
  scaling->add_option("--kmin", sc_kmin, "smallest k");
  scaling->add_option("--kmax", sc_kmax, "largest k");

  // sparse
  auto* sparse = app.add_subcommand("sparse", "stopping-time selection and domination ratio");
  double sp_C = 10.0, sp_p = 2.0, sp_qp = 1.5;
  int sp_res = 32, sp_kmin = -1, sp_kmax = 2;
  sparse->add_option("--C", sp_C, "stopping constant");
  sparse->add_option("--p", sp_p, "p");
  sparse->add_option("--qprime", sp_qp, "q'");
  sparse->add_option("--res", sp_res, "grid resolution");
  sparse->add_option("--kmin", sp_kmin, "smallest block index");
  sparse->add_option("--kmax", sp_kmax, "largest block index");

  // weights
  auto* weights = app.add_subcommand("weights", "weight characteristics and weighted ratios");
  std::string w_kind = "constant", w_file;
  double w_gamma = 0.5, w_p = 2.0, w_q = 6.0, w_r = 3.0;
  int w_res = 48, w_kmin = -4, w_kmax = 0;
  weights->add_option("--weight", w_kind, "constant, two-valued or power");
  weights->add_option("--weight-file", w_file, "load the weight from a grid binary file");
  weights->add_option("--gamma", w_gamma, "power weight exponent");
  weights->add_option("--p", w_p, "p");
  weights->add_option("--q", w_q, "q");
  weights->add_option("--r", w_r, "r with p < r < q");
  weights->add_option("--res", w_res, "grid resolution");
  weights->add_option("--window-kmin", w_kmin, "smallest cube scale in the family");
  weights->add_option("--window-kmax", w_kmax, "largest cube scale in the family");

  // continuity
  auto* continuity = app.add_subcommand("continuity", "translation continuity of the local max");
  SpecParams ct_spec;
  add_spec_flags(continuity, ct_spec);
  double ct_p = 2.0, ct_q = 2.0;
  int ct_zmin = -8, ct_zmax = -2, ct_res = 96, ct_eval_res = 48, ct_times = 513;
  std::string ct_test_fn = "box";
  continuity->add_option("--p", ct_p, "p");
  continuity->add_option("--q", ct_q, "q");
  continuity->add_option("--zmin-exp", ct_zmin, "smallest |z| exponent");
  continuity->add_option("--zmax-exp", ct_zmax, "largest |z| exponent");
  continuity->add_option("--test-fn", ct_test_fn, "test function: box, blob, spike");
  continuity->add_option("--res", ct_res, "test function resolution");
  continuity->add_option("--eval-res", ct_eval_res, "evaluation grid resolution");
  continuity->add_option("--time-samples", ct_times, "dense t samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  json cfg;
  try {
    // Config defaults are applied before parsing so explicit flags win.
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") common.config_path = args[i + 1];
    cfg = load_config(common.config_path);
    from_config(cfg, "out", common.out_dir);
    from_config(cfg, "seed", common.seed);
    from_config(cfg, "threads", common.threads);
    spec_from_config(cfg, fd_spec);
    spec_from_config(cfg, mn_spec);
    spec_from_config(cfg, ct_spec);
    from_config(cfg, "family", reg_family);
    from_config(cfg, "d", reg_d);
    from_config(cfg, "compare", reg_compare);
    from_config(cfg, "compare_d", reg_compare_d);
    from_config(cfg, "pairs", mn_pairs);
    from_config(cfg, "tag", sc_tag);
    from_config(cfg, "d", sc_d);
    from_config(cfg, "p", sc_p);
    from_config(cfg, "q", sc_q);
    from_config(cfg, "kmin", sc_kmin);
    from_config(cfg, "kmax", sc_kmax);
    from_config(cfg, "C", sp_C);
    from_config(cfg, "p", sp_p);
    from_config(cfg, "qprime", sp_qp);
    from_config(cfg, "weight", w_kind);
    from_config(cfg, "gamma", w_gamma);
    from_config(cfg, "zmin_exp", ct_zmin);
    from_config(cfg, "zmax_exp", ct_zmax);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  worker_threads() = common.threads;
  try {
    if (regions->parsed())
      return cmd_regions(common, cfg, reg_family, reg_d, reg_compare, reg_compare_d, reg_samples);
    if (fourier->parsed())
      return cmd_fourier_decay(common, fd_spec, fd_lmin, fd_lmax, fd_dirs, fd_tol);
    if (maxnorm->parsed())
      return cmd_maximal_norm(common, mn_spec, mn_pairs, mn_test_fn, mn_res, mn_eval_res, mn_times);
    if (scaling->parsed())
      return cmd_scaling(common, cfg, sc_tag, sc_d, sc_p, sc_q, sc_kmin, sc_kmax);
    if (sparse->parsed())
      return cmd_sparse(common, cfg, sp_C, sp_p, sp_qp, sp_res, sp_kmin, sp_kmax);
    if (weights->parsed())
      return cmd_weights(common, cfg, w_kind, w_gamma, w_p, w_q, w_r, w_res, w_kmin, w_kmax,
                         w_file);
    if (continuity->parsed())
      return cmd_continuity(common, ct_spec, ct_p, ct_q, ct_zmin, ct_zmax, ct_test_fn, ct_res,
                            ct_eval_res, ct_times);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace maxcurv
