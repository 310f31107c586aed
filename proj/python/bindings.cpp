// Python bindings: a thin dict-based facade over the C++ solver so scripts can
// run catalog problems, refinement studies, scheme comparisons, and sample the
// exact Riemann solution without touching the C++ API.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cweno/benchmarks.hpp"
#include "cweno/riemann.hpp"
#include "cweno/stepper.hpp"

namespace py = pybind11;
using namespace cweno;

namespace {

SchemeKind parse_scheme(const std::string& s) {
  if (s == "fvcw") return SchemeKind::fvcw;
  if (s == "weno-js") return SchemeKind::weno_js;
  if (s == "weno-z") return SchemeKind::weno_z;
  if (s == "linear-compact") return SchemeKind::linear_compact;
  throw SolverError("unknown scheme '" + s + "' (expected fvcw, weno-js, weno-z or linear-compact)");
}

VariableMode parse_variables(const std::string& s) {
  if (s == "characteristic") return VariableMode::characteristic;
  if (s == "conservative") return VariableMode::conservative;
  throw SolverError("unknown variable set '" + s + "' (expected characteristic or conservative)");
}

FluxKind parse_flux(const std::string& s) {
  if (s == "hllc") return FluxKind::hllc;
  if (s == "llf") return FluxKind::llf;
  throw SolverError("unknown flux '" + s + "' (expected hllc or llf)");
}

const char* boundary_name(BoundaryKind bc) {
  switch (bc) {
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::reflective: return "reflective";
    case BoundaryKind::transmissive: return "transmissive";
  }
  return "?";
}

SchemeConfig make_config(const Problem& prob, const std::string& scheme,
                         const std::string& variables, const std::string& flux, bool limiter,
                         double cfl, bool accuracy_dt) {
  SchemeConfig cfg;
  cfg.reconstruction.scheme = parse_scheme(scheme);
  cfg.reconstruction.variables = parse_variables(variables);
  cfg.flux = parse_flux(flux);
  cfg.limiter.enabled = limiter;
  cfg.gas = prob.gas;
  cfg.cfl = cfl > 0.0 ? cfl : (limiter ? 1.0 / 12.0 : 0.5);
  cfg.accuracy_dt = accuracy_dt;
  return cfg;
}

py::dict minima_dict(const StepMinima& m) {
  py::dict d;
  d["rho_cell"] = m.rho_cell;
  d["e_cell"] = m.e_cell;
  d["p_cell"] = m.p_cell;
  d["rho_all"] = m.rho_all;
  d["e_all"] = m.e_all;
  d["p_all"] = m.p_all;
  return d;
}

py::list catalog() {
  py::list out;
  for (const Problem& p : problem_catalog()) {
    py::dict d;
    d["name"] = p.name;
    d["description"] = p.description;
    d["xa"] = p.xa;
    d["xb"] = p.xb;
    d["t_final"] = p.t_final;
    d["boundary"] = boundary_name(p.bc);
    d["gamma"] = p.gas.gamma;
    d["default_cells"] = p.default_cells;
    out.append(d);
  }
  return out;
}

py::dict run(const std::string& problem, int n, double t_final, const std::string& scheme,
             const std::string& variables, const std::string& flux, bool limiter, double cfl,
             bool accuracy_dt) {
  const Problem& prob = find_problem(problem);
  const int cells = n > 0 ? n : prob.default_cells;
  const double t_end = t_final >= 0.0 ? t_final : prob.t_final;
  const SchemeConfig cfg = make_config(prob, scheme, variables, flux, limiter, cfl, accuracy_dt);

  Field f = initialize(prob, cells);
  const RunStats stats = integrate(f, t_end, cfg);

  std::vector<double> x(cells), rho(cells), u(cells), p(cells), e(cells);
  for (int j = 0; j < cells; ++j) {
    const PrimitiveState w = primitive_from_conserved(f.u[j], cfg.gas);
    x[j] = f.grid.center(j);
    rho[j] = w.rho;
    u[j] = w.u;
    p[j] = w.p;
    e[j] = internal_energy(f.u[j]);
  }
  py::dict d;
  d["problem"] = prob.name;
  d["n"] = cells;
  d["t"] = stats.t;
  d["steps"] = stats.steps;
  d["x"] = std::move(x);
  d["rho"] = std::move(rho);
  d["u"] = std::move(u);
  d["p"] = std::move(p);
  d["e"] = std::move(e);
  d["minima"] = minima_dict(stats.minima);
  return d;
}

py::list converge(const std::string& problem, const std::vector<int>& ns,
                  const std::string& scheme, const std::string& variables,
                  const std::string& flux, bool limiter, double cfl, bool cfl_dt) {
  const Problem& prob = find_problem(problem);
  SchemeConfig cfg = make_config(prob, scheme, variables, flux, limiter, cfl, !cfl_dt);
  const auto rows = convergence_study(prob, cfg, ns);
  py::list out;
  for (const ConvergenceRow& r : rows) {
    py::dict d;
    d["n"] = r.n;
    d["l1"] = r.error.l1;
    d["l2"] = r.error.l2;
    d["linf"] = r.error.linf;
    d["order_l1"] = r.order_l1;
    d["order_l2"] = r.order_l2;
    d["order_linf"] = r.order_linf;
    d["steps"] = r.steps;
    d["seconds"] = r.seconds;
    out.append(d);
  }
  return out;
}

py::list compare(const std::string& problem, const std::vector<std::string>& schemes, int n,
                 const std::string& variables, const std::string& flux, bool limiter, double cfl) {
  const Problem& prob = find_problem(problem);
  const int cells = n > 0 ? n : prob.default_cells;
  const SchemeConfig base = make_config(prob, "fvcw", variables, flux, limiter, cfl, false);
  std::vector<SchemeKind> kinds;
  for (const std::string& s : schemes) kinds.push_back(parse_scheme(s));
  const auto rows = compare_schemes(prob, base, kinds, cells);
  py::list out;
  for (const CompareRow& r : rows) {
    py::dict d;
    d["scheme"] = r.scheme;
    d["l1"] = r.error.l1;
    d["l2"] = r.error.l2;
    d["linf"] = r.error.linf;
    d["steps"] = r.steps;
    d["seconds"] = r.seconds;
    d["min_rho"] = r.minima.rho_all;
    d["min_e"] = r.minima.e_all;
    d["density"] = r.density;
    out.append(d);
  }
  return out;
}

py::dict riemann(const std::vector<double>& left, const std::vector<double>& right,
                 const std::vector<double>& xi, double gamma) {
  if (left.size() != 3 || right.size() != 3)
    throw SolverError("riemann: left and right must be (rho, u, p) triples");
  const GasConstants gas{gamma};
  const RiemannSolution sol = solve_riemann({left[0], left[1], left[2]},
                                            {right[0], right[1], right[2]}, gas);
  std::vector<double> rho(xi.size()), u(xi.size()), p(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) {
    const PrimitiveState w = sol.sample(xi[i]);
    rho[i] = w.rho;
    u[i] = w.u;
    p[i] = w.p;
  }
  py::dict d;
  d["p_star"] = sol.p_star;
  d["u_star"] = sol.u_star;
  d["rho_star_l"] = sol.rho_star_l;
  d["rho_star_r"] = sol.rho_star_r;
  d["vacuum"] = sol.vacuum;
  d["rho"] = std::move(rho);
  d["u"] = std::move(u);
  d["p"] = std::move(p);
  return d;
}

}  // namespace

PYBIND11_MODULE(_cweno, m) {
  m.doc() = "Fifth-order positivity-preserving finite volume solver for the 1D Euler equations";

  py::register_exception<SolverError>(m, "SolverError");

  m.def("catalog", &catalog, "List the built-in benchmark problems");
  m.def("run", &run, py::arg("problem"), py::arg("n") = 0, py::arg("t_final") = -1.0,
        py::arg("scheme") = "fvcw", py::arg("variables") = "characteristic",
        py::arg("flux") = "hllc", py::arg("limiter") = true, py::arg("cfl") = 0.0,
        py::arg("accuracy_dt") = false,
        "Integrate one catalog problem and return the final profiles");
  m.def("converge", &converge, py::arg("problem"), py::arg("ns"), py::arg("scheme") = "fvcw",
        py::arg("variables") = "characteristic", py::arg("flux") = "hllc",
        py::arg("limiter") = true, py::arg("cfl") = 0.0, py::arg("cfl_dt") = false,
        "Grid-refinement study returning error norms and observed orders");
  m.def("compare", &compare, py::arg("problem"), py::arg("schemes"), py::arg("n") = 0,
        py::arg("variables") = "characteristic", py::arg("flux") = "hllc",
        py::arg("limiter") = true, py::arg("cfl") = 0.0,
        "Run several reconstruction schemes on one problem against a shared reference");
  m.def("riemann", &riemann, py::arg("left"), py::arg("right"),
        py::arg("xi") = std::vector<double>{}, py::arg("gamma") = 1.4,
        "Exact Riemann solution: star-state data plus samples at xi = x/t");
}
