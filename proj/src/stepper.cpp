#include "cweno/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cweno {

void StepMinima::take_cell(double rho, double e, double gamma_minus_1) {
  const double p = gamma_minus_1 * rho * e;
  if (rho < rho_cell) rho_cell = rho;
  if (e < e_cell) e_cell = e;
  if (p < p_cell) p_cell = p;
  if (rho < rho_all) rho_all = rho;
  if (e < e_all) e_all = e;
  if (p < p_all) p_all = p;
}

void StepMinima::take_trace(double rho, double e, double gamma_minus_1) {
  const double p = gamma_minus_1 * rho * e;
  if (rho < rho_all) rho_all = rho;
  if (e < e_all) e_all = e;
  if (p < p_all) p_all = p;
}

void StepMinima::merge(const StepMinima& other) {
  rho_cell = std::min(rho_cell, other.rho_cell);
  e_cell = std::min(e_cell, other.e_cell);
  p_cell = std::min(p_cell, other.p_cell);
  rho_all = std::min(rho_all, other.rho_all);
  e_all = std::min(e_all, other.e_all);
  p_all = std::min(p_all, other.p_all);
}

SpatialOperator::SpatialOperator(const SchemeConfig& cfg)
    : cfg_(cfg), rec_(cfg.reconstruction, cfg.gas) {}

void SpatialOperator::residual(const Field& f, std::vector<ConservedState>& out,
                               StepMinima* minima) {
  const int n = f.grid.n;
  fill_ghosts(f, kGhostWidth, padded_);
  rec_.reconstruct_padded(padded_, n, f.bc == BoundaryKind::periodic, states_);
  apply_limiter(f, padded_, states_, cfg_.limiter);

  if (minima && cfg_.track_minima) {
    const double gm1 = cfg_.gas.gamma - 1.0;
    for (const auto& q : f.u) minima->take_cell(q.rho, internal_energy(q), gm1);
    for (int i = 0; i <= n; ++i) {
      minima->take_trace(states_.minus[i].rho, internal_energy(states_.minus[i]), gm1);
      minima->take_trace(states_.plus[i].rho, internal_energy(states_.plus[i]), gm1);
    }
  }

  flux_.resize(n + 1);
  for (int i = 0; i <= n; ++i)
    flux_[i] = numerical_flux(cfg_.flux, states_.minus[i], states_.plus[i], cfg_.gas);
  out.resize(n);
  const double inv_h = 1.0 / f.grid.h();
  for (int j = 0; j < n; ++j)
    out[j] = {(flux_[j].rho - flux_[j + 1].rho) * inv_h, (flux_[j].mom - flux_[j + 1].mom) * inv_h,
              (flux_[j].ene - flux_[j + 1].ene) * inv_h};
}

double SpatialOperator::max_signal_speed(const Field& f) const {
  double s = 0.0;
  for (const auto& q : f.u) {
    const PrimitiveState w = primitive_from_conserved(q, cfg_.gas);
    s = std::max(s, std::abs(w.u) + sound_speed(w.rho, w.p, cfg_.gas));
  }
  return s;
}

double compute_dt(const Field& f, const SchemeConfig& cfg) {
  double s = 0.0;
  for (const auto& q : f.u) {
    const PrimitiveState w = primitive_from_conserved(q, cfg.gas);
    s = std::max(s, std::abs(w.u) + sound_speed(w.rho, w.p, cfg.gas));
  }
  s = std::max(s, 1e-100);
  const double h = f.grid.h();
  return cfg.accuracy_dt ? cfg.cfl * std::pow(h, 5.0 / 3.0) / s : cfg.cfl * h / s;
}

TimeIntegrator::TimeIntegrator(const SchemeConfig& cfg) : op_(cfg) {}

StepMinima TimeIntegrator::step(Field& f, double dt) {
  const int n = f.grid.n;
  u1_.grid = f.grid;
  u1_.bc = f.bc;
  u1_.u.resize(n);
  u2_.grid = f.grid;
  u2_.bc = f.bc;
  u2_.u.resize(n);

  StepMinima m;
  op_.residual(f, l_, &m);
  for (int j = 0; j < n; ++j)
    u1_.u[j] = {f.u[j].rho + dt * l_[j].rho, f.u[j].mom + dt * l_[j].mom,
                f.u[j].ene + dt * l_[j].ene};
  op_.residual(u1_, l_, &m);
  for (int j = 0; j < n; ++j)
    u2_.u[j] = {0.75 * f.u[j].rho + 0.25 * (u1_.u[j].rho + dt * l_[j].rho),
                0.75 * f.u[j].mom + 0.25 * (u1_.u[j].mom + dt * l_[j].mom),
                0.75 * f.u[j].ene + 0.25 * (u1_.u[j].ene + dt * l_[j].ene)};
  op_.residual(u2_, l_, &m);
  constexpr double c13 = 1.0 / 3.0, c23 = 2.0 / 3.0;
  for (int j = 0; j < n; ++j)
    f.u[j] = {c13 * f.u[j].rho + c23 * (u2_.u[j].rho + dt * l_[j].rho),
              c13 * f.u[j].mom + c23 * (u2_.u[j].mom + dt * l_[j].mom),
              c13 * f.u[j].ene + c23 * (u2_.u[j].ene + dt * l_[j].ene)};

  if (op_.config().track_minima) {
    const double gm1 = op_.config().gas.gamma - 1.0;
    for (const auto& q : f.u) m.take_cell(q.rho, internal_energy(q), gm1);
  }
  return m;
}

RunStats integrate(Field& f, double t_final, const SchemeConfig& cfg, const StepObserver& observer,
                   long max_steps) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw SolverError("integrate: final time must be finite and non-negative");
  RunStats stats;
  TimeIntegrator ti(cfg);
  const double gm1 = cfg.gas.gamma - 1.0;

  {
    StepMinima m0;
    for (const auto& q : f.u) m0.take_cell(q.rho, internal_energy(q), gm1);
    stats.minima.merge(m0);
    if (observer) observer(0, 0.0, 0.0, f, m0);
  }

  double t = 0.0;
  while (t < t_final) {
    if (stats.steps >= max_steps)
      throw SolverError("integrate: step limit " + std::to_string(max_steps) + " exceeded at t=" +
                        std::to_string(t));
    double dt = compute_dt(f, cfg);
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw SolverError("integrate: non-positive time step at t=" + std::to_string(t));
    const double remaining = t_final - t;
    if (dt >= remaining * (1.0 - 1e-12)) {
      dt = remaining;
      t = t_final;
    } else {
      t += dt;
    }

    StepMinima m;
    try {
      m = ti.step(f, dt);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(stats.steps + 1) + " at t=" + std::to_string(t) +
                        ": " + e.what());
    }
    ++stats.steps;
    for (const auto& q : f.u)
      if (!std::isfinite(q.rho) || !std::isfinite(q.mom) || !std::isfinite(q.ene))
        throw SolverError("integrate: solution lost finiteness at step " +
                          std::to_string(stats.steps) + ", t=" + std::to_string(t));
    stats.minima.merge(m);
    if (observer) observer(stats.steps, t, dt, f, m);
  }
  stats.t = t;
  return stats;
}

}  // namespace cweno
