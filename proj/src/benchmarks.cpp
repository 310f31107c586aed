#include "cweno/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "cweno/io.hpp"
#include "cweno/riemann.hpp"

namespace cweno {

namespace {

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussNode[5] = {-0.90617984593866399, -0.53846931010568309, 0.0,
                                  0.53846931010568309, 0.90617984593866399};
constexpr double kGaussWeight[5] = {0.23692688505618909, 0.47862867049936647,
                                    0.56888888888888889, 0.47862867049936647,
                                    0.23692688505618909};

ConservedState gauss_average(const std::function<PrimitiveState(double)>& w, double xl, double xr,
                             const GasConstants& gas) {
  ConservedState acc{0.0, 0.0, 0.0};
  const double c = 0.5 * (xl + xr), s = 0.5 * (xr - xl);
  for (int i = 0; i < 5; ++i) {
    const ConservedState q = conserved_from_primitive(w(c + s * kGaussNode[i]), gas);
    acc.rho += kGaussWeight[i] * q.rho;
    acc.mom += kGaussWeight[i] * q.mom;
    acc.ene += kGaussWeight[i] * q.ene;
  }
  return {0.5 * acc.rho, 0.5 * acc.mom, 0.5 * acc.ene};
}

constexpr int kFineCells = 3200;

std::vector<Problem> build_catalog() {
  using std::numbers::pi;
  std::vector<Problem> cat;

  {
    Problem p;
    p.name = "density-perturbation";
    p.description = "smooth advecting density wave; order-of-accuracy workhorse";
    p.xa = 0.0;
    p.xb = 2.0;
    p.t_final = 2.0;
    p.bc = BoundaryKind::periodic;
    p.smooth = true;
    p.reference = ReferenceKind::analytic;
    p.initial = [](double x, double) { return PrimitiveState{1.0 + 0.2 * std::sin(pi * x), 1.0, 1.0}; };
    p.exact = [](double x, double t) {
      return PrimitiveState{1.0 + 0.2 * std::sin(pi * (x - t)), 1.0, 1.0};
    };
    p.default_cells = 320;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "lax";
    p.description = "shock tube: rarefaction, contact and a strong shock";
    p.xa = -5.0;
    p.xb = 5.0;
    p.t_final = 1.4;
    p.reference = ReferenceKind::exact_riemann;
    p.riemann_left = {0.445, 0.698, 3.528};
    p.riemann_right = {0.5, 0.0, 0.571};
    p.jump_x = 0.0;
    p.default_cells = 200;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "sod";
    p.description = "shock tube with equal pressures: a lone stationary contact";
    p.xa = -5.0;
    p.xb = 5.0;
    p.t_final = 2.0;
    p.reference = ReferenceKind::exact_riemann;
    p.riemann_left = {0.125, 0.0, 1.0};
    p.riemann_right = {1.0, 0.0, 1.0};
    p.jump_x = 0.0;
    p.default_cells = 100;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "shu-osher";
    p.description = "Mach-3 shock running into a sinusoidal density field";
    p.xa = -5.0;
    p.xb = 5.0;
    p.t_final = 1.8;
    p.smooth = true;  // quadrature-average the sinusoidal branch
    p.reference = ReferenceKind::fine_grid;
    p.initial = [](double x, double) {
      if (x < -4.0) return PrimitiveState{3.857143, 2.629369, 10.33333};
      return PrimitiveState{1.0 + 0.2 * std::sin(5.0 * x), 0.0, 1.0};
    };
    p.default_cells = 200;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "blast-wave";
    p.description = "two interacting blast waves between reflecting walls";
    p.xa = 0.0;
    p.xb = 1.0;
    p.t_final = 0.038;
    p.bc = BoundaryKind::reflective;
    p.reference = ReferenceKind::fine_grid;
    p.initial = [](double x, double) {
      if (x < 0.1) return PrimitiveState{1.0, 0.0, 1000.0};
      if (x < 0.9) return PrimitiveState{1.0, 0.0, 0.01};
      return PrimitiveState{1.0, 0.0, 100.0};
    };
    p.default_cells = 200;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "double-rarefaction";
    p.description = "receding flows pulling density and internal energy toward zero";
    p.xa = 0.0;
    p.xb = 1.0;
    p.t_final = 0.1;
    p.reference = ReferenceKind::exact_riemann;
    p.riemann_left = {1.0, -2.0, 0.4};
    p.riemann_right = {1.0, 2.0, 0.4};
    p.jump_x = 0.5;
    p.default_cells = 400;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "strong-shock";
    p.description = "shock tube driven by a 1e10 pressure jump";
    p.xa = 0.0;
    p.xb = 1.0;
    p.t_final = 2.5e-6;
    p.reference = ReferenceKind::exact_riemann;
    p.riemann_left = {1.0, 0.0, 1e10};
    p.riemann_right = {0.125, 0.0, 0.1};
    p.jump_x = 0.5;
    p.default_cells = 200;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "vacuum-rarefaction";
    p.description = "symmetric receding flows exactly at the vacuum-formation threshold";
    p.xa = -1.0;
    p.xb = 1.0;
    p.t_final = 0.6;
    p.reference = ReferenceKind::exact_riemann;
    p.riemann_left = {7.0, -1.0, 0.2};
    p.riemann_right = {7.0, 1.0, 0.2};
    p.jump_x = 0.0;
    p.default_cells = 400;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "sedov";
    p.description = "planar point blast: one cell carries the deposited energy";
    p.xa = 0.0;
    p.xb = 4.0;
    p.t_final = 0.001;
    p.reference = ReferenceKind::fine_grid;
    // Spike pressure scales with 1/h so the deposited energy is fixed; the
    // quoted 2.56e8 corresponds to h = 0.005.
    p.initial = [](double x, double h) {
      const bool spike = x > 2.0 - 0.5 * h && x <= 2.0 + 0.5 * h;
      return PrimitiveState{1.0, 0.0, spike ? 2.56e8 * (0.005 / h) : 4e-13};
    };
    p.default_cells = 800;
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "leblanc";
    p.description = "extreme shock tube: 1e3 density and 1e6 internal-energy jumps";
    p.xa = 0.0;
    p.xb = 9.0;
    p.t_final = 6.0;
    p.gas.gamma = 5.0 / 3.0;
    p.reference = ReferenceKind::exact_riemann;
    // given as (rho, u, e); p = (gamma - 1) rho e
    p.riemann_left = {1.0, 0.0, (2.0 / 3.0) * 1.0 * 0.1};
    p.riemann_right = {0.001, 0.0, (2.0 / 3.0) * 0.001 * 1e-7};
    p.jump_x = 3.0;
    p.default_cells = 400;
    cat.push_back(std::move(p));
  }

  // Riemann problems take their pointwise initial data from the jump states.
  for (auto& p : cat) {
    if (p.reference == ReferenceKind::exact_riemann && !p.initial) {
      const PrimitiveState l = p.riemann_left, r = p.riemann_right;
      const double x0 = p.jump_x;
      p.initial = [l, r, x0](double x, double) { return x < x0 ? l : r; };
    }
  }
  return cat;
}

}  // namespace

const std::vector<Problem>& problem_catalog() {
  static const std::vector<Problem> cat = build_catalog();
  return cat;
}

const Problem& find_problem(const std::string& name) {
  for (const auto& p : problem_catalog())
    if (p.name == name) return p;
  std::string names;
  for (const auto& p : problem_catalog()) names += (names.empty() ? "" : ", ") + p.name;
  throw SolverError("unknown problem '" + name + "' (available: " + names + ")");
}

Field initialize(const Problem& prob, int n) {
  if (n < 5) throw SolverError("initialize: need at least 5 cells");
  Field f;
  f.grid = {prob.xa, prob.xb, n};
  f.bc = prob.bc;
  f.u.resize(n);
  const double h = f.grid.h();
  for (int j = 0; j < n; ++j) {
    const double xl = f.grid.interface(j), xr = f.grid.interface(j + 1);
    if (prob.smooth) {
      f.u[j] = gauss_average([&](double x) { return prob.initial(x, h); }, xl, xr, prob.gas);
    } else {
      f.u[j] = conserved_from_primitive(prob.initial(f.grid.center(j), h), prob.gas);
    }
  }
  return f;
}

ErrorNorms error_norms(std::span<const double> diff) {
  if (diff.empty()) throw SolverError("error_norms: empty difference vector");
  ErrorNorms e;
  double sum1 = 0.0, sum2 = 0.0;
  for (double d : diff) {
    const double a = std::abs(d);
    sum1 += a;
    sum2 += a * a;
    e.linf = std::max(e.linf, a);
  }
  e.l1 = sum1 / static_cast<double>(diff.size());
  e.l2 = std::sqrt(sum2 / static_cast<double>(diff.size()));
  return e;
}

ErrorNorms density_error(const Field& f, std::span<const ConservedState> ref) {
  if (ref.size() != f.u.size()) throw SolverError("density_error: reference size mismatch");
  std::vector<double> diff(f.u.size());
  for (size_t j = 0; j < f.u.size(); ++j) diff[j] = f.u[j].rho - ref[j].rho;
  return error_norms(diff);
}

namespace {

// Breakpoints (in x) of the self-similar Riemann solution at time t.
std::vector<double> riemann_breakpoints(const RiemannSolution& sol, double x0, double t) {
  std::vector<double> xi;
  const double g = sol.gamma;
  const double al = std::sqrt(g * sol.left.p / sol.left.rho);
  const double ar = std::sqrt(g * sol.right.p / sol.right.rho);
  if (sol.vacuum) {
    xi = {sol.left.u - al, sol.left.u + 2.0 * al / (g - 1.0), sol.right.u - 2.0 * ar / (g - 1.0),
          sol.right.u + ar};
  } else {
    if (sol.p_star > sol.left.p) {
      xi.push_back(sol.left.u - al * std::sqrt((g + 1.0) / (2.0 * g) * sol.p_star / sol.left.p +
                                               (g - 1.0) / (2.0 * g)));
    } else {
      xi.push_back(sol.left.u - al);
      xi.push_back(sol.u_star - al * std::pow(sol.p_star / sol.left.p, (g - 1.0) / (2.0 * g)));
    }
    xi.push_back(sol.u_star);
    if (sol.p_star > sol.right.p) {
      xi.push_back(sol.right.u + ar * std::sqrt((g + 1.0) / (2.0 * g) * sol.p_star / sol.right.p +
                                                (g - 1.0) / (2.0 * g)));
    } else {
      xi.push_back(sol.u_star + ar * std::pow(sol.p_star / sol.right.p, (g - 1.0) / (2.0 * g)));
      xi.push_back(sol.right.u + ar);
    }
  }
  std::vector<double> x;
  for (double s : xi) x.push_back(x0 + s * t);
  std::sort(x.begin(), x.end());
  return x;
}

std::vector<ConservedState> riemann_reference(const Problem& prob, int n) {
  const RiemannSolution sol = solve_riemann(prob.riemann_left, prob.riemann_right, prob.gas);
  const double t = prob.t_final;
  const std::vector<double> breaks = riemann_breakpoints(sol, prob.jump_x, t);
  const Grid1D grid{prob.xa, prob.xb, n};
  std::vector<ConservedState> ref(n);
  const auto w = [&](double x) { return sol.sample((x - prob.jump_x) / t); };
  for (int j = 0; j < n; ++j) {
    const double xl = grid.interface(j), xr = grid.interface(j + 1);
    // split the cell at wave fronts so each quadrature panel is smooth
    std::vector<double> pts{xl};
    for (double b : breaks)
      if (b > xl && b < xr) pts.push_back(b);
    pts.push_back(xr);
    ConservedState acc{0.0, 0.0, 0.0};
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
      const ConservedState part = gauss_average(w, pts[k], pts[k + 1], prob.gas);
      const double frac = (pts[k + 1] - pts[k]) / (xr - xl);
      acc.rho += frac * part.rho;
      acc.mom += frac * part.mom;
      acc.ene += frac * part.ene;
    }
    ref[j] = acc;
  }
  return ref;
}

std::vector<ConservedState> fine_grid_reference(const Problem& prob, int n) {
  if (kFineCells % n != 0)
    throw SolverError("reference for '" + prob.name + "': cell count " + std::to_string(n) +
                      " must divide the fine resolution " + std::to_string(kFineCells));
  SchemeConfig cfg;
  cfg.reconstruction.scheme = SchemeKind::weno_js;
  cfg.reconstruction.variables = VariableMode::characteristic;
  cfg.flux = FluxKind::hllc;
  cfg.gas = prob.gas;
  cfg.cfl = 0.6;
  char key[160];
  std::snprintf(key, sizeof key, "fine-%s-weno-js-char-hllc-lim-n%d-cfl%.6g-t%.12g-gamma%.12g",
                prob.name.c_str(), kFineCells, cfg.cfl, prob.t_final, prob.gas.gamma);
  std::vector<ConservedState> fine;
  if (auto cached = load_cached_reference(key, kFineCells)) {
    fine = std::move(*cached);
  } else {
    Field f = initialize(prob, kFineCells);
    integrate(f, prob.t_final, cfg);
    fine = std::move(f.u);
    store_cached_reference(key, fine);
  }
  const int ratio = kFineCells / n;
  std::vector<ConservedState> ref(n);
  for (int j = 0; j < n; ++j) {
    ConservedState acc{0.0, 0.0, 0.0};
    for (int k = 0; k < ratio; ++k) {
      acc.rho += fine[j * ratio + k].rho;
      acc.mom += fine[j * ratio + k].mom;
      acc.ene += fine[j * ratio + k].ene;
    }
    ref[j] = {acc.rho / ratio, acc.mom / ratio, acc.ene / ratio};
  }
  return ref;
}

}  // namespace

std::vector<ConservedState> reference_solution(const Problem& prob, int n) {
  switch (prob.reference) {
    case ReferenceKind::analytic: {
      const Grid1D grid{prob.xa, prob.xb, n};
      std::vector<ConservedState> ref(n);
      const auto w = [&](double x) { return prob.exact(x, prob.t_final); };
      for (int j = 0; j < n; ++j)
        ref[j] = gauss_average(w, grid.interface(j), grid.interface(j + 1), prob.gas);
      return ref;
    }
    case ReferenceKind::exact_riemann:
      return riemann_reference(prob, n);
    case ReferenceKind::fine_grid:
      return fine_grid_reference(prob, n);
  }
  throw SolverError("reference_solution: unknown reference kind");
}

std::vector<ConvergenceRow> convergence_study(const Problem& prob, const SchemeConfig& cfg,
                                              std::span<const int> grids) {
  std::vector<ConvergenceRow> rows;
  for (int n : grids) {
    ConvergenceRow row;
    row.n = n;
    Field f = initialize(prob, n);
    const auto start = std::chrono::steady_clock::now();
    const RunStats stats = integrate(f, prob.t_final, cfg);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.steps = stats.steps;
    row.error = density_error(f, reference_solution(prob, n));
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double lr = std::log2(static_cast<double>(n) / prev.n);
      row.order_l1 = std::log2(prev.error.l1 / row.error.l1) / lr;
      row.order_linf = std::log2(prev.error.linf / row.error.linf) / lr;
      row.order_l2 = std::log2(prev.error.l2 / row.error.l2) / lr;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CompareRow> compare_schemes(const Problem& prob, const SchemeConfig& base,
                                        std::span<const SchemeKind> schemes, int n) {
  const std::vector<ConservedState> ref = reference_solution(prob, n);
  std::vector<CompareRow> rows;
  for (SchemeKind s : schemes) {
    SchemeConfig cfg = base;
    cfg.reconstruction.scheme = s;
    CompareRow row;
    switch (s) {
      case SchemeKind::fvcw: row.scheme = "fvcw"; break;
      case SchemeKind::weno_js: row.scheme = "weno-js"; break;
      case SchemeKind::weno_z: row.scheme = "weno-z"; break;
      case SchemeKind::linear_compact: row.scheme = "linear-compact"; break;
    }
    Field f = initialize(prob, n);
    const auto start = std::chrono::steady_clock::now();
    const RunStats stats = integrate(f, prob.t_final, cfg);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.steps = stats.steps;
    row.minima = stats.minima;
    row.error = density_error(f, ref);
    row.density.reserve(f.u.size());
    for (const ConservedState& u : f.u) row.density.push_back(u.rho);
    rows.push_back(std::move(row));
  }
  return rows;
}

double locate_jump(std::span<const double> x, std::span<const double> v, double lo, double hi) {
  if (x.size() != v.size() || x.size() < 2) throw SolverError("locate_jump: bad input sizes");
  double best = 0.0, pos = 0.5 * (lo + hi);
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    if (mid < lo || mid > hi) continue;
    const double slope = std::abs(v[i + 1] - v[i]);
    if (slope > best) {
      best = slope;
      pos = mid;
    }
  }
  return pos;
}

}  // namespace cweno
