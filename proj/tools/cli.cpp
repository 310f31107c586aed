#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cweno/benchmarks.hpp"
#include "cweno/io.hpp"
#include "cweno/stepper.hpp"

namespace cweno::cli {
namespace {

// --- value parsing -----------------------------------------------------------

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  items.push_back(trim(cur));
  return items;
}

int parse_int(const std::string& what, const std::string& value) {
  try {
    size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SolverError(what + ": invalid integer '" + value + "'");
  }
}

double parse_double(const std::string& what, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SolverError(what + ": invalid number '" + value + "'");
  }
}

bool parse_switch(const std::string& what, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw SolverError(what + ": expected on or off, got '" + value + "'");
}

SchemeKind parse_scheme(const std::string& s) {
  if (s == "fvcw") return SchemeKind::fvcw;
  if (s == "weno-js") return SchemeKind::weno_js;
  if (s == "weno-z") return SchemeKind::weno_z;
  if (s == "linear-compact") return SchemeKind::linear_compact;
  throw SolverError("unknown scheme '" + s +
                    "' (expected fvcw, weno-js, weno-z or linear-compact)");
}

VariableMode parse_variables(const std::string& s) {
  if (s == "characteristic") return VariableMode::characteristic;
  if (s == "conservative") return VariableMode::conservative;
  throw SolverError("unknown variable set '" + s +
                    "' (expected characteristic or conservative)");
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

// --- config files --------------------------------------------------------------
//
// Flat `key = value` files mirroring the long option names (without dashes in
// front).  Command-line flags take precedence; a key only applies when its
// option was not given on the command line.

struct ConfigBinding {
  CLI::Option* option = nullptr;
  std::function<void(const std::string&)> set;
};

using ConfigKeys = std::map<std::string, ConfigBinding>;

void apply_config_file(const std::string& path, const ConfigKeys& keys) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SolverError("config " + path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      std::string valid;
      for (const auto& [k, b] : keys) {
        if (!valid.empty()) valid += ", ";
        valid += k;
      }
      throw SolverError("config " + path + ":" + std::to_string(lineno) + ": unknown key '" +
                        key + "' (valid keys: " + valid + ")");
    }
    if (it->second.option != nullptr && it->second.option->count() > 0) continue;
    it->second.set(value);
  }
}

// --- shared scheme options -----------------------------------------------------

struct SchemeArgs {
  std::string scheme = "fvcw";
  std::string variables = "characteristic";
  std::string flux = "hllc";
  std::string limiter = "on";
  double cfl = 0.0;  // 0 = pick the default for the limiter setting
};

void add_scheme_options(CLI::App* sub, SchemeArgs& a, ConfigKeys& keys) {
  auto* scheme = sub->add_option("--scheme", a.scheme,
                                 "Reconstruction: fvcw, weno-js, weno-z or linear-compact");
  auto* vars = sub->add_option("--variables", a.variables,
                               "Reconstruct characteristic or conservative variables");
  auto* flux = sub->add_option("--flux", a.flux, "Numerical flux: hllc or llf");
  auto* limiter = sub->add_option("--limiter", a.limiter, "Positivity limiter: on or off");
  auto* cfl = sub->add_option("--cfl", a.cfl,
                              "CFL number (default 1/12 with the limiter, 0.5 without)");
  keys["scheme"] = {scheme, [&a](const std::string& v) { a.scheme = v; }};
  keys["variables"] = {vars, [&a](const std::string& v) { a.variables = v; }};
  keys["flux"] = {flux, [&a](const std::string& v) { a.flux = v; }};
  keys["limiter"] = {limiter, [&a](const std::string& v) { a.limiter = v; }};
  keys["cfl"] = {cfl, [&a](const std::string& v) { a.cfl = parse_double("cfl", v); }};
}

SchemeConfig make_config(const SchemeArgs& a, const GasConstants& gas, bool accuracy_dt) {
  SchemeConfig cfg;
  cfg.reconstruction.scheme = parse_scheme(a.scheme);
  cfg.reconstruction.variables = parse_variables(a.variables);
  cfg.flux = parse_flux(a.flux);
  cfg.limiter.enabled = parse_switch("limiter", a.limiter);
  cfg.gas = gas;
  cfg.cfl = a.cfl != 0.0 ? a.cfl : (cfg.limiter.enabled ? 1.0 / 12.0 : 0.5);
  if (!(cfg.cfl > 0.0) || !std::isfinite(cfg.cfl))
    throw SolverError("cfl must be positive and finite");
  cfg.accuracy_dt = accuracy_dt;
  return cfg;
}

int resolve_cells(const Problem& prob, int n) {
  const int cells = n > 0 ? n : prob.default_cells;
  if (cells < 10) throw SolverError("n must be at least 10 (got " + std::to_string(cells) + ")");
  return cells;
}

std::filesystem::path snapshot_path(const std::filesystem::path& out, double t) {
  char tag[48];
  std::snprintf(tag, sizeof tag, "-t%g", t);
  std::filesystem::path p = out;
  const std::string ext = p.extension().string();
  p.replace_extension();
  p += tag;
  p += ext;
  return p;
}

// --- run -----------------------------------------------------------------------

struct RunArgs {
  std::string problem;
  SchemeArgs scheme;
  int n = 0;
  double t_final = -1.0;  // <0 = problem default
  bool accuracy_dt = false;
  std::string out, minima, snap_times, config;
};

int do_run(const RunArgs& a, std::ostream& os) {
  if (a.problem.empty()) throw SolverError("missing --problem (see list-problems)");
  const Problem& prob = find_problem(a.problem);
  const int n = resolve_cells(prob, a.n);
  const double t_end = a.t_final >= 0.0 ? a.t_final : prob.t_final;
  if (!std::isfinite(t_end)) throw SolverError("t-final must be finite");
  const SchemeConfig cfg = make_config(a.scheme, prob.gas, a.accuracy_dt);

  std::vector<double> snaps;
  if (!a.snap_times.empty()) {
    if (a.out.empty()) throw SolverError("snap-times requires --out");
    for (const std::string& item : split_list(a.snap_times))
      snaps.push_back(parse_double("snap-times", item));
    std::sort(snaps.begin(), snaps.end());
    for (size_t i = 0; i < snaps.size(); ++i) {
      if (!(snaps[i] > 0.0) || snaps[i] > t_end)
        throw SolverError("snap-times must lie in (0, t-final]");
      if (i > 0 && snaps[i] == snaps[i - 1]) throw SolverError("snap-times must be distinct");
    }
  }

  Field f = initialize(prob, n);
  std::vector<MinimaRow> trace;
  long step_base = 0;
  double t_base = 0.0;
  StepObserver observer;
  if (!a.minima.empty()) {
    observer = [&](long step, double t, double, const Field&, const StepMinima& m) {
      if (step == 0 && step_base > 0) return;  // only the very first segment logs step 0
      trace.push_back({step_base + step, t_base + t, m.rho_cell, m.e_cell});
    };
  }

  RunStats total;
  std::vector<std::filesystem::path> snapshots_written;
  const auto start = std::chrono::steady_clock::now();
  double reached = 0.0;
  for (double target : snaps) {
    const RunStats seg = integrate(f, target - reached, cfg, observer);
    step_base += seg.steps;
    t_base += seg.t;
    total.steps += seg.steps;
    total.minima.merge(seg.minima);
    reached = target;
    const std::filesystem::path snap = snapshot_path(a.out, target);
    write_snapshot_csv(snap, f, cfg.gas);
    snapshots_written.push_back(snap);
  }
  if (t_end > reached || snaps.empty()) {
    const RunStats seg = integrate(f, t_end - reached, cfg, observer);
    step_base += seg.steps;
    total.steps += seg.steps;
    total.minima.merge(seg.minima);
  }
  total.t = t_end;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!a.out.empty()) write_snapshot_csv(a.out, f, cfg.gas);
  if (!a.minima.empty()) write_minima_csv(a.minima, trace);

  char buf[256];
  os << "problem: " << prob.name << "\n";
  os << "scheme: " << a.scheme.scheme << "\n";
  os << "variables: " << a.scheme.variables << "\n";
  os << "flux: " << a.scheme.flux << "\n";
  os << "limiter: " << a.scheme.limiter << "\n";
  os << "n: " << n << "\n";
  std::snprintf(buf, sizeof buf, "cfl: %.10g\n", cfg.cfl);
  os << buf;
  std::snprintf(buf, sizeof buf, "t-final: %.10g\n", t_end);
  os << buf;
  os << "steps: " << total.steps << "\n";
  std::snprintf(buf, sizeof buf, "wall-seconds: %.3f\n", wall);
  os << buf;
  std::snprintf(buf, sizeof buf, "min-rho-cell: %.6e\nmin-e-cell: %.6e\nmin-p-cell: %.6e\n",
                total.minima.rho_cell, total.minima.e_cell, total.minima.p_cell);
  os << buf;
  std::snprintf(buf, sizeof buf, "min-rho-traces: %.6e\nmin-e-traces: %.6e\nmin-p-traces: %.6e\n",
                total.minima.rho_all, total.minima.e_all, total.minima.p_all);
  os << buf;
  for (const auto& snap : snapshots_written) os << "wrote: " << snap.string() << "\n";
  if (!a.out.empty()) os << "wrote: " << a.out << "\n";
  if (!a.minima.empty()) os << "wrote-minima: " << a.minima << "\n";
  return 0;
}

// --- converge --------------------------------------------------------------------

struct ConvergeArgs {
  std::string problem;
  SchemeArgs scheme;
  std::string ns = "10,20,40,80,160,320";
  bool cfl_dt = false;  // default: accuracy-matched dt ~ h^(5/3)
  std::string config;
};

int do_converge(const ConvergeArgs& a, std::ostream& os) {
  if (a.problem.empty()) throw SolverError("missing --problem (see list-problems)");
  const Problem& prob = find_problem(a.problem);
  std::vector<int> grids;
  for (const std::string& item : split_list(a.ns)) {
    const int n = parse_int("ns", item);
    if (n < 10) throw SolverError("ns entries must be at least 10 (got " + item + ")");
    grids.push_back(n);
  }
  if (grids.empty()) throw SolverError("ns must list at least one grid");
  const SchemeConfig cfg = make_config(a.scheme, prob.gas, !a.cfl_dt);

  const std::vector<ConvergenceRow> rows = convergence_study(prob, cfg, grids);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%6s  %12s %6s  %12s %6s  %12s %6s  %8s  %8s\n", "N", "L1 error",
                "order", "Linf error", "order", "L2 error", "order", "steps", "seconds");
  os << buf;
  for (size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    char o1[16], oi[16], o2[16];
    if (i == 0) {
      std::snprintf(o1, sizeof o1, "%6s", "-");
      std::snprintf(oi, sizeof oi, "%6s", "-");
      std::snprintf(o2, sizeof o2, "%6s", "-");
    } else {
      std::snprintf(o1, sizeof o1, "%6.2f", r.order_l1);
      std::snprintf(oi, sizeof oi, "%6.2f", r.order_linf);
      std::snprintf(o2, sizeof o2, "%6.2f", r.order_l2);
    }
    std::snprintf(buf, sizeof buf, "%6d  %12.4e %s  %12.4e %s  %12.4e %s  %8ld  %8.2f\n", r.n,
                  r.error.l1, o1, r.error.linf, oi, r.error.l2, o2, r.steps, r.seconds);
    os << buf;
  }
  return 0;
}

// --- compare ---------------------------------------------------------------------

struct CompareArgs {
  std::string problem;
  SchemeArgs scheme;
  std::string schemes = "fvcw,weno-js,weno-z";
  int n = 0;
  std::string out, config;
};

int do_compare(const CompareArgs& a, std::ostream& os) {
  if (a.problem.empty()) throw SolverError("missing --problem (see list-problems)");
  const Problem& prob = find_problem(a.problem);
  const int n = resolve_cells(prob, a.n);
  std::vector<SchemeKind> kinds;
  for (const std::string& item : split_list(a.schemes)) kinds.push_back(parse_scheme(item));
  if (kinds.empty()) throw SolverError("schemes must list at least one scheme");
  const SchemeConfig base = make_config(a.scheme, prob.gas, false);

  const std::vector<CompareRow> rows = compare_schemes(prob, base, kinds, n);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-15s  %12s  %12s  %12s  %8s  %8s  %11s  %11s\n", "scheme",
                "L1 error", "L2 error", "Linf error", "steps", "seconds", "min rho", "min e");
  os << buf;
  for (const CompareRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%-15s  %12.4e  %12.4e  %12.4e  %8ld  %8.2f  %11.4e  %11.4e\n",
                  r.scheme.c_str(), r.error.l1, r.error.l2, r.error.linf, r.steps, r.seconds,
                  r.minima.rho_cell, r.minima.e_cell);
    os << buf;
  }

  if (!a.out.empty()) {
    const std::vector<ConservedState> ref = reference_solution(prob, n);
    const Grid1D grid{prob.xa, prob.xb, n};
    std::FILE* fp = std::fopen(a.out.c_str(), "w");
    if (!fp) throw SolverError("cannot open '" + a.out + "' for writing");
    std::fprintf(fp, "x,rho_ref");
    for (const CompareRow& r : rows) std::fprintf(fp, ",rho_%s", r.scheme.c_str());
    std::fprintf(fp, "\n");
    for (int j = 0; j < n; ++j) {
      std::fprintf(fp, "%.17g,%.17g", grid.center(j), ref[j].rho);
      for (const CompareRow& r : rows) std::fprintf(fp, ",%.17g", r.density[j]);
      std::fprintf(fp, "\n");
    }
    std::fclose(fp);
    os << "wrote: " << a.out << "\n";
  }
  return 0;
}

// --- list-problems ----------------------------------------------------------------

int do_list(std::ostream& os) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%3s  %-22s %6s  %-10s  %-12s  %s\n", "#", "name", "cells",
                "t-final", "boundary", "description");
  os << buf;
  int index = 0;
  for (const Problem& p : problem_catalog()) {
    std::snprintf(buf, sizeof buf, "%3d  %-22s %6d  %-10g  %-12s  %s\n", ++index, p.name.c_str(),
                  p.default_cells, p.t_final, boundary_name(p.bc), p.description.c_str());
    os << buf;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fifth-order positivity-preserving finite volume solver for the 1D Euler equations"};
  app.require_subcommand(1);

  RunArgs run_args;
  ConfigKeys run_keys;
  CLI::App* run = app.add_subcommand("run", "Integrate one problem and report/export the result");
  run_keys["problem"] = {run->add_option("--problem", run_args.problem, "Problem name"),
                         [&](const std::string& v) { run_args.problem = v; }};
  run_keys["n"] = {run->add_option("--n", run_args.n, "Number of cells (default: per problem)"),
                   [&](const std::string& v) { run_args.n = parse_int("n", v); }};
  run_keys["t-final"] = {
      run->add_option("--t-final", run_args.t_final, "Final time (default: per problem)"),
      [&](const std::string& v) { run_args.t_final = parse_double("t-final", v); }};
  add_scheme_options(run, run_args.scheme, run_keys);
  run_keys["accuracy-dt"] = {
      run->add_flag("--accuracy-dt", run_args.accuracy_dt, "Use the dt ~ h^(5/3) accuracy step"),
      [&](const std::string& v) { run_args.accuracy_dt = parse_switch("accuracy-dt", v); }};
  run_keys["out"] = {run->add_option("--out", run_args.out, "Write final snapshot CSV here"),
                     [&](const std::string& v) { run_args.out = v; }};
  run_keys["minima"] = {
      run->add_option("--minima", run_args.minima, "Write per-step minima trace CSV here"),
      [&](const std::string& v) { run_args.minima = v; }};
  run_keys["snap-times"] = {
      run->add_option("--snap-times", run_args.snap_times,
                      "Comma-separated times for intermediate snapshots (needs --out)"),
      [&](const std::string& v) { run_args.snap_times = v; }};
  run->add_option("--config", run_args.config, "Flat key=value config file (flags win)");

  ConvergeArgs conv_args;
  ConfigKeys conv_keys;
  CLI::App* conv = app.add_subcommand("converge", "Grid refinement study with observed orders");
  conv_keys["problem"] = {conv->add_option("--problem", conv_args.problem, "Problem name"),
                          [&](const std::string& v) { conv_args.problem = v; }};
  conv_keys["ns"] = {
      conv->add_option("--ns", conv_args.ns, "Comma-separated grid sizes"),
      [&](const std::string& v) { conv_args.ns = v; }};
  add_scheme_options(conv, conv_args.scheme, conv_keys);
  conv_keys["cfl-dt"] = {
      conv->add_flag("--cfl-dt", conv_args.cfl_dt,
                     "Use the CFL time step instead of the accuracy-matched dt ~ h^(5/3)"),
      [&](const std::string& v) { conv_args.cfl_dt = parse_switch("cfl-dt", v); }};
  conv->add_option("--config", conv_args.config, "Flat key=value config file (flags win)");

  CompareArgs cmp_args;
  ConfigKeys cmp_keys;
  CLI::App* cmp = app.add_subcommand("compare", "Run several schemes on one problem");
  cmp_keys["problem"] = {cmp->add_option("--problem", cmp_args.problem, "Problem name"),
                         [&](const std::string& v) { cmp_args.problem = v; }};
  cmp_keys["n"] = {cmp->add_option("--n", cmp_args.n, "Number of cells (default: per problem)"),
                   [&](const std::string& v) { cmp_args.n = parse_int("n", v); }};
  cmp_keys["schemes"] = {
      cmp->add_option("--schemes", cmp_args.schemes, "Comma-separated schemes to compare"),
      [&](const std::string& v) { cmp_args.schemes = v; }};
  add_scheme_options(cmp, cmp_args.scheme, cmp_keys);
  cmp_keys["out"] = {
      cmp->add_option("--out", cmp_args.out, "Write reference/scheme density profiles CSV here"),
      [&](const std::string& v) { cmp_args.out = v; }};
  cmp->add_option("--config", cmp_args.config, "Flat key=value config file (flags win)");

  CLI::App* list = app.add_subcommand("list-problems", "List the built-in problem catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help and friends
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) {
      if (!run_args.config.empty()) apply_config_file(run_args.config, run_keys);
      return do_run(run_args, out);
    }
    if (conv->parsed()) {
      if (!conv_args.config.empty()) apply_config_file(conv_args.config, conv_keys);
      return do_converge(conv_args, out);
    }
    if (cmp->parsed()) {
      if (!cmp_args.config.empty()) apply_config_file(cmp_args.config, cmp_keys);
      return do_compare(cmp_args, out);
    }
    if (list->parsed()) return do_list(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand given\n";
  return 1;
}

}  // namespace cweno::cli
