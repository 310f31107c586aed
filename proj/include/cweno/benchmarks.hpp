#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cweno/euler.hpp"
#include "cweno/field.hpp"
#include "cweno/stepper.hpp"

namespace cweno {

enum class ReferenceKind { analytic, exact_riemann, fine_grid };

struct Problem {
  std::string name;
  std::string description;
  double xa = 0.0, xb = 1.0;
  double t_final = 0.0;
  BoundaryKind bc = BoundaryKind::transmissive;
  GasConstants gas{};
  bool smooth = false;  // smooth data: Gauss-quadrature cell averages, analytic reference
  ReferenceKind reference = ReferenceKind::exact_riemann;
  // Pointwise initial state; the cell width h lets sub-cell features (single
  // energized cells) scale with the mesh.
  std::function<PrimitiveState(double x, double h)> initial;
  // Analytic solution, set when reference == analytic.
  std::function<PrimitiveState(double x, double t)> exact;
  // Jump data, set when reference == exact_riemann (also used as initial data).
  PrimitiveState riemann_left{}, riemann_right{};
  double jump_x = 0.0;
  int default_cells = 200;
};

const std::vector<Problem>& problem_catalog();
const Problem& find_problem(const std::string& name);

// Initial cell averages: five-point Gauss quadrature for smooth data, centre
// sampling otherwise (piecewise-constant data with interface-aligned jumps is
// averaged exactly by the centre value).
Field initialize(const Problem& prob, int n);

struct ErrorNorms {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

// Mean-based norms of a difference vector.
ErrorNorms error_norms(std::span<const double> diff);

// Density error of a solution field against reference cell averages.
ErrorNorms density_error(const Field& f, std::span<const ConservedState> ref);

// Reference cell averages at prob.t_final on an n-cell mesh.  Analytic and
// exact-Riemann references are integrated with breakpoint-aware quadrature;
// fine-grid references run the solver on a fixed fine mesh (cached on disk)
// and aggregate, so n must divide the fine resolution.
std::vector<ConservedState> reference_solution(const Problem& prob, int n);

struct ConvergenceRow {
  int n = 0;
  ErrorNorms error{};
  // Observed orders vs the previous row (l1, linf, l2); zero on the first row.
  double order_l1 = 0.0, order_linf = 0.0, order_l2 = 0.0;
  double seconds = 0.0;
  long steps = 0;
};

std::vector<ConvergenceRow> convergence_study(const Problem& prob, const SchemeConfig& cfg,
                                              std::span<const int> grids);

struct CompareRow {
  std::string scheme;
  ErrorNorms error{};
  double seconds = 0.0;
  long steps = 0;
  StepMinima minima{};
  std::vector<double> density;  // final cell-average densities
};

std::vector<CompareRow> compare_schemes(const Problem& prob, const SchemeConfig& base,
                                        std::span<const SchemeKind> schemes, int n);

// Position of the steepest gradient of v inside [lo, hi]; used to check
// computed wave locations against exact ones.
double locate_jump(std::span<const double> x, std::span<const double> v, double lo, double hi);

}  // namespace cweno
