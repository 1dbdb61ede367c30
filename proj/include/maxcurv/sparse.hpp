#pragma once

#include <optional>
#include <vector>

#include "maxcurv/averaging.hpp"
#include "maxcurv/delta_grid.hpp"
#include "maxcurv/grid_function.hpp"

#include "json.hpp"

namespace maxcurv {

/// Integral of |f|^p over region (piecewise-constant cell view, partially
/// covered cells weighted by the exact overlap volume).
double box_integral_abs_pow(const GridFunction& f, const MeasuredBox& region, double p);

/// L^p average <f>_{Q,p} = (|Q|^{-1} int_Q |f|^p)^{1/p}; cells outside the
/// grid contribute 0 and the normalizer is the full cube volume.
double average_pq(const GridFunction& f, const DeltaCube& cube, double p);
double average_pq(const GridFunction& f, const MeasuredBox& region, double p);

/// One selected cube: the stopping children are the next generation of the
/// sparse tree and the witness is E_S = S minus those children.
struct SparseNode {
  DeltaCube cube;
  std::vector<std::size_t> children;  // indices into SparseCollection::nodes
  double witness_volume = 0.0;        // |E_S|
};

struct SparseCollection {
  std::vector<SparseNode> nodes;  // nodes[0] is the root
  double avg_f_root = 0.0;
  double avg_g_root = 0.0;

  std::size_t size() const { return nodes.size(); }
};

/// Stopping-time selection: starting from Q0, repeatedly add the maximal
/// descendants T with <f>_{T,p} > C <f>_{R,p} or <g>_{T,q'} > C <g>_{R,q'}
/// (R the current root) and recurse into each. The sparseness certificate
/// |E_S| > |S|/4 is verified before returning.
SparseCollection select_sparse(const GridFunction& f, const GridFunction& g, const DeltaCube& q0,
                               double p, double qprime, double C, int max_depth = 16);

/// Verifies pairwise-disjoint witnesses and |E_S| > |S|/4 for every node.
bool sparseness_certificate(const SparseCollection& s);

/// Sum of |T| over the stopping children of the root (packing bound data).
double stopping_children_volume(const SparseCollection& s);

struct CZDecomposition {
  GridFunction good;                    // f_infinity
  std::vector<DeltaCube> bad_cubes;     // maximal cubes over the threshold
  std::vector<GridFunction> bad_parts;  // b_P on the cells of P
  double threshold = 0.0;               // C <f>_{Q0,p}
};

/// Calderon-Zygmund decomposition at threshold C <f>_{Q0,p}: f = f_inf +
/// sum b_P with b_P = (f - <f>_P) 1_P on the maximal bad cubes. Cubes must
/// be aligned with the grid cells of f.
CZDecomposition cz_decompose(const GridFunction& f, const DeltaCube& q0, double p, double C,
                             int max_depth = 16);

/// Lambda_{S,p,q'}(f,g) = sum over S of |S| <f>_{S,p} <g>_{S,q'}.
double sparse_form(const SparseCollection& s, const GridFunction& f, const GridFunction& g,
                   double p, double qprime);

nlohmann::json sparse_to_json(const SparseCollection& s);

struct DominationOptions {
  double C = 10.0;
  int k_min = -1;
  int k_max = 2;
  int per_block = 32;
  int max_depth = 12;
  int rescalings = 3;
  int translations = 5;
  unsigned long long seed = 1;
  EvalOptions eval;
};

struct DominationCase {
  std::string label;
  double inner_product = 0.0;   // <M f, g>
  double best_lambda = 0.0;     // max over shifted grids of the sparse form
  double ratio = 0.0;           // inner / best_lambda (0 when both vanish)
};

struct DominationReport {
  DominationCase base;
  std::vector<DominationCase> family;  // rescalings and translations
  double stability_factor = 1.0;       // max ratio / min ratio over the family
  nlohmann::json selection;            // sparse collection of the best base grid
};

/// Computes <M f, g> by quadrature, runs the stopping-time selection on
/// every shifted dyadic grid, and reports the ratio to the best sparse form
/// together with its stability across dyadic rescalings and translations.
DominationReport verify_sparse_domination(const SurfaceSpec& spec, const Cutoff& cutoff,
                                          const GridFunction& f, const GridFunction& g, double p,
                                          double qprime, const DominationOptions& opts = {});

}  // namespace maxcurv
