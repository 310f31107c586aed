#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "cweno/stepper.hpp"

using namespace cweno;

namespace {

constexpr double kPi = std::numbers::pi;

// Advecting density wave rho(x,t) = 1 + 0.2 sin(pi (x - t)) with u = 1, p = 1
// on [0, 2] periodic: an exact smooth Euler solution.  Cell averages are
// computed from the antiderivative, so the data are exact averages, not
// midpoint samples.
Field advection_field(int n, double t) {
  Field f;
  f.grid = {0.0, 2.0, n};
  f.bc = BoundaryKind::periodic;
  f.u.resize(n);
  const GasConstants gas{};
  const double h = f.grid.h();
  for (int j = 0; j < n; ++j) {
    const double a = f.grid.interface(j) - t;
    const double b = f.grid.interface(j + 1) - t;
    const double rho = 1.0 + 0.2 * (std::cos(kPi * a) - std::cos(kPi * b)) / (kPi * h);
    // u = 1 makes the momentum average equal the density average, and
    // E = p/(gamma-1) + rho/2 is linear in rho, so its average is exact too.
    f.u[j] = {rho, rho, 1.0 / (gas.gamma - 1.0) + 0.5 * rho};
  }
  return f;
}

SchemeConfig default_config() {
  SchemeConfig cfg;
  cfg.reconstruction = {SchemeKind::fvcw, VariableMode::characteristic, 1e-13};
  cfg.flux = FluxKind::hllc;
  return cfg;
}

}  // namespace

TEST_SUITE("stepper") {

TEST_CASE("compute_dt: frozen values for both time-step laws") {
  Field f;
  f.grid = {0.0, 1.0, 10};
  f.bc = BoundaryKind::periodic;
  // rho = 1, u = 0.5, p = 1/1.4 gives sound speed exactly 1, so |u| + a = 1.5.
  f.u.assign(10, conserved_from_primitive({1.0, 0.5, 1.0 / 1.4}, GasConstants{}));

  SchemeConfig cfg = default_config();
  CHECK(compute_dt(f, cfg) == doctest::Approx(1.0 / 180.0).epsilon(1e-12));

  cfg.accuracy_dt = true;  // dt = cfl h^(5/3) / max|u|+a
  CHECK(compute_dt(f, cfg) == doctest::Approx(0.001196908161128824).epsilon(1e-12));

  SpatialOperator op(cfg);
  CHECK(op.max_signal_speed(f) == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("periodic stepping conserves mass, momentum and energy") {
  const int n = 32;
  Field f = advection_field(n, 0.0);
  const double h = f.grid.h();

  double tot0[3] = {0.0, 0.0, 0.0};
  for (const auto& q : f.u) {
    tot0[0] += q.rho * h;
    tot0[1] += q.mom * h;
    tot0[2] += q.ene * h;
  }

  SchemeConfig cfg = default_config();
  TimeIntegrator ti(cfg);
  for (int s = 0; s < 20; ++s) ti.step(f, compute_dt(f, cfg));

  double tot[3] = {0.0, 0.0, 0.0};
  for (const auto& q : f.u) {
    tot[0] += q.rho * h;
    tot[1] += q.mom * h;
    tot[2] += q.ene * h;
  }
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(tot[c] - tot0[c]) <= 1e-12 * std::max(1.0, std::abs(tot0[c])));
}

TEST_CASE("integrate lands exactly on the final time and reports step count") {
  Field f = advection_field(24, 0.0);
  const SchemeConfig cfg = default_config();
  const RunStats stats = integrate(f, 0.013, cfg);
  CHECK(stats.t == 0.013);
  CHECK(stats.steps >= 1);
  for (const auto& q : f.u) CHECK(in_admissible_set(q));
}

TEST_CASE("integrate rejects bad final times and enforces the step limit") {
  Field f = advection_field(16, 0.0);
  const SchemeConfig cfg = default_config();
  CHECK_THROWS_AS(integrate(f, -1.0, cfg), SolverError);
  CHECK_THROWS_WITH_AS(integrate(f, 10.0, cfg, {}, 2), doctest::Contains("step limit"),
                       SolverError);
}

TEST_CASE("integrate aborts with a step-tagged error when the run blows up") {
  Field f = advection_field(16, 0.0);
  SchemeConfig cfg = default_config();
  cfg.limiter.enabled = false;
  cfg.cfl = 5.0e3;  // deliberately unstable time step
  CHECK_THROWS_WITH_AS(integrate(f, 10.0, cfg, {}, 50), doctest::Contains("step"), SolverError);
}

TEST_CASE("observer fires before the first step and after every step") {
  Field f = advection_field(16, 0.0);
  const SchemeConfig cfg = default_config();
  std::vector<long> steps;
  std::vector<double> times, dts;
  const RunStats stats = integrate(
      f, 0.02, cfg, [&](long s, double t, double dt, const Field& fld, const StepMinima& m) {
        steps.push_back(s);
        times.push_back(t);
        dts.push_back(dt);
        CHECK(fld.grid.n == 16);
        CHECK(m.rho_all > 0.0);
      });
  REQUIRE(steps.size() == static_cast<size_t>(stats.steps) + 1);
  CHECK(steps.front() == 0);
  CHECK(times.front() == 0.0);
  CHECK(dts.front() == 0.0);
  for (size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i] == static_cast<long>(i));
    CHECK(times[i] > times[i - 1]);
    CHECK(dts[i] > 0.0);
  }
  CHECK(times.back() == 0.02);
}

TEST_CASE("minima: traces can only lower the running minima") {
  StepMinima m;
  m.take_cell(0.5, 2.0, 0.4);
  CHECK(m.rho_cell == 0.5);
  CHECK(m.e_cell == 2.0);
  CHECK(m.p_cell == doctest::Approx(0.4).epsilon(1e-15));
  m.take_trace(0.1, 1.0, 0.4);
  CHECK(m.rho_cell == 0.5);  // traces do not touch the cell minima
  CHECK(m.rho_all == 0.1);
  StepMinima other;
  other.take_cell(0.05, 3.0, 0.4);
  m.merge(other);
  CHECK(m.rho_cell == 0.05);
  CHECK(m.rho_all == 0.05);

  Field f = advection_field(20, 0.0);
  const SchemeConfig cfg = default_config();
  Field g = f;
  const RunStats stats = integrate(g, 0.05, cfg);
  CHECK(stats.minima.rho_all <= stats.minima.rho_cell);
  CHECK(stats.minima.e_all <= stats.minima.e_cell);
  CHECK(stats.minima.p_all <= stats.minima.p_cell);
  CHECK(stats.minima.rho_all > 0.0);
  CHECK(stats.minima.e_all > 0.0);
}

TEST_CASE("semi-discrete residual is fifth-order accurate on a smooth wave") {
  // For the advection solution the exact flux difference over a cell is
  // (rho(b) - rho(a)) * (1, 1, 1/2) with point values at the interfaces.
  SchemeConfig cfg = default_config();
  auto residual_error = [&](int n) {
    Field f = advection_field(n, 0.0);
    SpatialOperator op(cfg);
    std::vector<ConservedState> out;
    op.residual(f, out, nullptr);
    const double h = f.grid.h();
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ra = 1.0 + 0.2 * std::sin(kPi * f.grid.interface(j));
      const double rb = 1.0 + 0.2 * std::sin(kPi * f.grid.interface(j + 1));
      const double d = (rb - ra) / h;
      err += std::abs(out[j].rho + d) + std::abs(out[j].mom + d) + std::abs(out[j].ene + 0.5 * d);
    }
    return err / n;
  };
  const double e40 = residual_error(40);
  const double e80 = residual_error(80);
  CHECK(e40 > 0.0);
  const double ratio = e40 / e80;
  CHECK(ratio >= 20.0);
  CHECK(ratio <= 45.0);
}

TEST_CASE("full integration converges at fifth order with the accuracy step law") {
  SchemeConfig cfg = default_config();
  cfg.accuracy_dt = true;
  const double t_end = 0.1;
  auto solve_error = [&](int n) {
    Field f = advection_field(n, 0.0);
    integrate(f, t_end, cfg);
    const Field ref = advection_field(n, t_end);
    double l1 = 0.0;
    for (int j = 0; j < n; ++j) l1 += std::abs(f.u[j].rho - ref.u[j].rho);
    return l1 / n;
  };
  const double e20 = solve_error(20);
  const double e40 = solve_error(40);
  CHECK(e20 / e40 >= 20.0);
}

}  // TEST_SUITE
