#include "cweno/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cweno {

namespace {

constexpr double kEdgeWeight = 1.0 / 12.0;  // 4-point Gauss-Lobatto edge weight

inline ConservedState blend(const ConservedState& avg, const ConservedState& trace, double t) {
  return {avg.rho + t * (trace.rho - avg.rho), avg.mom + t * (trace.mom - avg.mom),
          avg.ene + t * (trace.ene - avg.ene)};
}

// Floors are checked with exactly the arithmetic in_admissible_set uses, so an
// accepted scaling is admissible as stored, not merely in exact arithmetic.
inline bool meets_floor(const ConservedState& w, double eps_rho, double eps_e) {
  return w.rho >= eps_rho && internal_energy(w) >= eps_e;
}

}  // namespace

double density_theta(double rho_avg, double rho_minus_edge, double rho_plus_edge, double eps) {
  if (!(rho_avg >= eps) || !std::isfinite(rho_avg))
    throw SolverError("positivity limiter: cell-average density " + std::to_string(rho_avg) +
                      " is below the floor " + std::to_string(eps));
  // The edge values plus the lumped interior quadrature value must all stay
  // >= eps; the cell average is their convex combination, so pulling the edges
  // toward the average by theta fixes every violator at once.
  const double lumped =
      (rho_avg - kEdgeWeight * (rho_minus_edge + rho_plus_edge)) / (1.0 - 2.0 * kEdgeWeight);
  const double rho_min = std::min({rho_minus_edge, rho_plus_edge, lumped});
  if (rho_min >= eps) return 1.0;
  const double theta = (rho_avg - eps) / (rho_avg - rho_min);
  return std::clamp(theta, 0.0, 1.0);
}

double energy_theta(const ConservedState& avg, const ConservedState& trace, double eps) {
  if (!(internal_energy(avg) >= eps))
    throw SolverError("positivity limiter: cell-average internal energy below the floor");
  if (internal_energy(trace) >= eps) return 1.0;

  // e(W) >= eps along W(t) = avg + t (trace - avg) is the concave quadratic
  //   f(t) = rho(t) E(t) - m(t)^2 / 2 - eps rho(t)^2 >= 0,
  // with f(0) >= 0 for an admissible average, so {f >= 0} is an interval
  // containing 0.  The closed-form root only seeds a bisection on the floor
  // predicate itself: the returned scaling must survive the floating-point
  // energy evaluation, not just the exact-arithmetic one.
  const double dr = trace.rho - avg.rho;
  const double dm = trace.mom - avg.mom;
  const double de = trace.ene - avg.ene;
  const double c0 = avg.rho * avg.ene - 0.5 * avg.mom * avg.mom - eps * avg.rho * avg.rho;
  const double c1 = avg.rho * de + dr * avg.ene - avg.mom * dm - 2.0 * eps * avg.rho * dr;
  const double c2 = dr * de - 0.5 * dm * dm - eps * dr * dr;
  const double scale = std::abs(c0) + std::abs(c1) + std::abs(c2);
  double best = -1.0;
  if (std::abs(c2) <= 1e-14 * scale) {
    if (c1 < 0.0) best = -c0 / c1;
  } else {
    const double disc = std::max(0.0, c1 * c1 - 4.0 * c2 * c0);
    const double sd = std::sqrt(disc);
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sd : -sd));
    for (const double root : {q / c2, c0 / q}) {
      if (std::isfinite(root) && root >= 0.0 && root <= 1.0) best = std::max(best, root);
    }
  }

  const auto safe = [&](double t) { return internal_energy(blend(avg, trace, t)) >= eps; };
  double lo = 0.0, hi = 1.0;  // safe(0) holds: blend(avg, trace, 0) == avg bit for bit
  if (best >= 0.0 && best <= 1.0) (safe(best) ? lo : hi) = best;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (safe(mid) ? lo : hi) = mid;
  }
  return lo;
}

void limit_cell(const ConservedState& avg, ConservedState& left_edge, ConservedState& right_edge,
                double floor) {
  const double e_avg = internal_energy(avg);
  if (!(avg.rho > 0.0) || !(e_avg > 0.0) || !std::isfinite(avg.rho + avg.mom + avg.ene))
    throw NonPhysicalState("positivity limiter: non-admissible cell average (rho=" +
                           std::to_string(avg.rho) + ", e=" + std::to_string(e_avg) + ")");
  if (!std::isfinite(left_edge.rho + left_edge.mom + left_edge.ene) ||
      !std::isfinite(right_edge.rho + right_edge.mom + right_edge.ene)) {
    // A non-finite trace cannot be rescaled (0 * inf); fall back to the
    // first-order trace, which is the theta -> 0 limit.
    left_edge = avg;
    right_edge = avg;
    return;
  }
  const double eps_rho = std::min(floor, avg.rho);
  const double t1 = density_theta(avg.rho, left_edge.rho, right_edge.rho, eps_rho);
  if (t1 < 1.0) {
    left_edge.rho = avg.rho + t1 * (left_edge.rho - avg.rho);
    right_edge.rho = avg.rho + t1 * (right_edge.rho - avg.rho);
  }
  const double eps_e = std::min(floor, e_avg);
  const double t2 =
      std::min(energy_theta(avg, left_edge, eps_e), energy_theta(avg, right_edge, eps_e));
  if (t2 < 1.0) {
    left_edge = blend(avg, left_edge, t2);
    right_edge = blend(avg, right_edge, t2);
  }
  if (meets_floor(left_edge, eps_rho, eps_e) && meets_floor(right_edge, eps_rho, eps_e)) return;
  // Roundoff backstop: each scaling was verified for its own edge, but the
  // joint minimum applied to the other edge can land a few ulp outside the
  // floor.  Shrink both edges toward the average until the stored values pass.
  const ConservedState l0 = left_edge, r0 = right_edge;
  ConservedState good_l = avg, good_r = avg;  // s = 0: the average itself passes
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const ConservedState bl = blend(avg, l0, mid), br = blend(avg, r0, mid);
    if (meets_floor(bl, eps_rho, eps_e) && meets_floor(br, eps_rho, eps_e)) {
      lo = mid;
      good_l = bl;
      good_r = br;
    } else {
      hi = mid;
    }
  }
  left_edge = good_l;
  right_edge = good_r;
}

void apply_limiter(const Field& f, std::span<const ConservedState> padded, InterfaceStates& states,
                   const LimiterConfig& cfg) {
  if (!cfg.enabled) return;
  const int n = f.grid.n;
  const int gw = kGhostWidth;
  if (states.minus.size() != static_cast<size_t>(n) + 1 || states.plus.size() != states.minus.size())
    throw SolverError("positivity limiter: interface-state size mismatch");
  if (padded.size() != static_cast<size_t>(n) + 2 * gw)
    throw SolverError("positivity limiter: padded average array has wrong size");

  // Cell j owns the plus trace at its left interface and the minus trace at
  // its right interface.
  for (int j = 0; j < n; ++j) limit_cell(f.u[j], states.plus[j], states.minus[j + 1], cfg.floor);

  if (f.bc == BoundaryKind::periodic) {
    // Interface n is interface 0; re-synchronize the duplicated entries.
    states.minus[0] = states.minus[n];
    states.plus[n] = states.plus[0];
    return;
  }
  // Boundary traces owned by ghost cells: rescale toward the ghost average,
  // treating the unknown opposite edge as the average itself (a no-op there).
  ConservedState other = padded[gw - 1];
  limit_cell(padded[gw - 1], other, states.minus[0], cfg.floor);
  other = padded[gw + n];
  limit_cell(padded[gw + n], states.plus[n], other, cfg.floor);
}

}  // namespace cweno
