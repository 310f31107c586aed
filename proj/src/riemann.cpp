#include "cweno/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cweno {

namespace {

struct Side {
  double rho, u, p, a, e_total;  // e_total = conserved energy density
};

inline Side unpack(const ConservedState& q, const GasConstants& gas) {
  const PrimitiveState w = primitive_from_conserved(q, gas);
  if (!(w.rho > 0.0) || !(w.p > 0.0) || !std::isfinite(w.u))
    throw NonPhysicalState("riemann flux: non-admissible input state (rho=" +
                           std::to_string(w.rho) + ", p=" + std::to_string(w.p) + ")");
  return {w.rho, w.u, w.p, std::sqrt(gas.gamma * w.p / w.rho), q.ene};
}

}  // namespace

ConservedState hllc_flux(const ConservedState& ul, const ConservedState& ur,
                         const GasConstants& gas) {
  const Side l = unpack(ul, gas);
  // Bit-identical inputs short-circuit to the physical flux: consistency
  // F(U,U) = F(U) then holds exactly (the star-state algebra would reproduce
  // it only up to roundoff scaled by the signal speed), and constant fields
  // are preserved to the bit.
  if (ul.rho == ur.rho && ul.mom == ur.mom && ul.ene == ur.ene)
    return physical_flux(ul, gas);
  const Side r = unpack(ur, gas);
  const RoeState roe = roe_average(ul, ur, gas);

  const double sl = std::min(l.u - l.a, roe.u_t - roe.a_t);
  const double sr = std::max(r.u + r.a, roe.u_t + roe.a_t);
  if (sl >= 0.0) return physical_flux(ul, gas);
  if (sr <= 0.0) return physical_flux(ur, gas);

  // Contact speed from the integral form across [sl, sr]; the denominator is
  // bounded below by rho_l a_l + rho_r a_r > 0.
  const double ml = l.rho * (sl - l.u);  // negative
  const double mr = r.rho * (sr - r.u);  // positive
  const double sm = (r.rho * r.u * (sr - r.u) - l.rho * l.u * (sl - l.u) + l.p - r.p) / (mr - ml);

  const Side& s = (sm >= 0.0) ? l : r;
  const ConservedState& q = (sm >= 0.0) ? ul : ur;
  const double sk = (sm >= 0.0) ? sl : sr;

  const double rho_star = s.rho * (sk - s.u) / (sk - sm);
  const double p_star = s.rho * (s.u - sk) * (s.u - sm) + s.p;
  const double e_star = ((sk - s.u) * s.e_total - s.p * s.u + p_star * sm) / (sk - sm);

  const ConservedState fk = physical_flux(q, gas);
  return {fk.rho + sk * (rho_star - q.rho), fk.mom + sk * (rho_star * sm - q.mom),
          fk.ene + sk * (e_star - q.ene)};
}

HllcWaves hllc_waves(const ConservedState& ul, const ConservedState& ur,
                     const GasConstants& gas) {
  const Side l = unpack(ul, gas);
  const Side r = unpack(ur, gas);
  const RoeState roe = roe_average(ul, ur, gas);

  HllcWaves w;
  w.s_l = std::min(l.u - l.a, roe.u_t - roe.a_t);
  w.s_r = std::max(r.u + r.a, roe.u_t + roe.a_t);
  const double ml = l.rho * (w.s_l - l.u);
  const double mr = r.rho * (w.s_r - r.u);
  w.s_m = (r.rho * r.u * (w.s_r - r.u) - l.rho * l.u * (w.s_l - l.u) + l.p - r.p) / (mr - ml);

  const auto star = [&](const Side& s, double sk) -> ConservedState {
    const double rho_star = s.rho * (sk - s.u) / (sk - w.s_m);
    const double p_star = s.rho * (s.u - sk) * (s.u - w.s_m) + s.p;
    const double e_star = ((sk - s.u) * s.e_total - s.p * s.u + p_star * w.s_m) / (sk - w.s_m);
    return {rho_star, rho_star * w.s_m, e_star};
  };
  w.star_l = star(l, w.s_l);
  w.star_r = star(r, w.s_r);
  return w;
}

ConservedState llf_flux(const ConservedState& ul, const ConservedState& ur,
                        const GasConstants& gas) {
  const Side l = unpack(ul, gas);
  const Side r = unpack(ur, gas);
  const double alpha = std::max(std::abs(l.u) + l.a, std::abs(r.u) + r.a);
  const ConservedState fl = physical_flux(ul, gas);
  const ConservedState fr = physical_flux(ur, gas);
  return {0.5 * (fl.rho + fr.rho - alpha * (ur.rho - ul.rho)),
          0.5 * (fl.mom + fr.mom - alpha * (ur.mom - ul.mom)),
          0.5 * (fl.ene + fr.ene - alpha * (ur.ene - ul.ene))};
}

ConservedState numerical_flux(FluxKind kind, const ConservedState& ul, const ConservedState& ur,
                              const GasConstants& gas) {
  return kind == FluxKind::hllc ? hllc_flux(ul, ur, gas) : llf_flux(ul, ur, gas);
}

// ---------------------------------------------------------------------------
// Exact Riemann solver.

namespace {

struct WaveFn {
  double rho, u, p, a;
  double big_a, big_b;  // shock-branch constants
  double g;

  WaveFn(const PrimitiveState& w, double gamma) : rho(w.rho), u(w.u), p(w.p), g(gamma) {
    if (!(rho > 0.0) || !(p > 0.0))
      throw NonPhysicalState("exact riemann: input state must have positive density and pressure");
    a = std::sqrt(g * p / rho);
    big_a = 2.0 / ((g + 1.0) * rho);
    big_b = (g - 1.0) / (g + 1.0) * p;
  }

  // f_K(p*) and df/dp*.
  double value(double ps) const {
    if (ps > p) return (ps - p) * std::sqrt(big_a / (ps + big_b));
    return 2.0 * a / (g - 1.0) * (std::pow(ps / p, (g - 1.0) / (2.0 * g)) - 1.0);
  }
  double slope(double ps) const {
    if (ps > p) {
      const double root = std::sqrt(big_a / (ps + big_b));
      return root * (1.0 - 0.5 * (ps - p) / (ps + big_b));
    }
    return 1.0 / (rho * a) * std::pow(ps / p, -(g + 1.0) / (2.0 * g));
  }
};

double initial_pressure_guess(const WaveFn& l, const WaveFn& r, double du, double g) {
  const double p_pv =
      std::max(1e-14, 0.5 * (l.p + r.p) - 0.125 * du * (l.rho + r.rho) * (l.a + r.a));
  const double p_min = std::min(l.p, r.p);
  const double p_max = std::max(l.p, r.p);
  if (p_max / p_min <= 2.0 && p_pv >= p_min && p_pv <= p_max) return p_pv;
  if (p_pv < p_min) {
    // two-rarefaction approximation
    const double z = (g - 1.0) / (2.0 * g);
    const double num = l.a + r.a - 0.5 * (g - 1.0) * du;
    const double den = l.a / std::pow(l.p, z) + r.a / std::pow(r.p, z);
    return std::pow(num / den, 1.0 / z);
  }
  // two-shock approximation
  const double gl = std::sqrt(l.big_a / (p_pv + l.big_b));
  const double gr = std::sqrt(r.big_a / (p_pv + r.big_b));
  return std::max(1e-14, (gl * l.p + gr * r.p - du) / (gl + gr));
}

}  // namespace

RiemannSolution solve_riemann(const PrimitiveState& left, const PrimitiveState& right,
                              const GasConstants& gas) {
  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = gas.gamma;

  const double g = gas.gamma;
  const WaveFn l(left, g), r(right, g);
  const double du = right.u - left.u;

  // Pressure positivity: if the rarefactions can expand to zero pressure
  // before meeting, a vacuum region opens and there is no star state.  The
  // threshold carries a small relative slack: within a few ulps of
  // criticality the star pressure scales like gap^{2g/(g-1)} (~gap^7 for
  // g = 1.4), far below any physical scale, and the Newton iteration there
  // is hopelessly ill-conditioned, so borderline cases count as vacuum.
  const double spread = 2.0 * (l.a + r.a) / (g - 1.0);
  if (spread <= du + 1e-12 * std::max(std::abs(du), spread)) {
    sol.vacuum = true;
    return sol;
  }

  double p = initial_pressure_guess(l, r, du, g);
  int it = 0;
  for (; it < 100; ++it) {
    const double f = l.value(p) + r.value(p) + du;
    const double df = l.slope(p) + r.slope(p);
    double pn = p - f / df;
    if (pn <= 0.0) pn = 1e-14 * p;
    const double change = 2.0 * std::abs(pn - p) / (pn + p);
    p = pn;
    if (change < 1e-13) break;
  }
  if (it == 100) throw SolverError("exact riemann: pressure iteration did not converge");

  sol.iterations = it + 1;
  sol.p_star = p;
  sol.u_star = 0.5 * (left.u + right.u) + 0.5 * (r.value(p) - l.value(p));
  const double gm = (g - 1.0) / (g + 1.0);
  sol.rho_star_l = (p > left.p) ? left.rho * (p / left.p + gm) / (gm * p / left.p + 1.0)
                                : left.rho * std::pow(p / left.p, 1.0 / g);
  sol.rho_star_r = (p > right.p) ? right.rho * (p / right.p + gm) / (gm * p / right.p + 1.0)
                                 : right.rho * std::pow(p / right.p, 1.0 / g);
  return sol;
}

PrimitiveState RiemannSolution::sample(double xi) const {
  const double g = gamma;
  const double gm = (g - 1.0) / (g + 1.0);
  const double al = std::sqrt(g * left.p / left.rho);
  const double ar = std::sqrt(g * right.p / right.rho);

  if (vacuum) {
    // Two rarefactions expanding into vacuum.
    const double head_l = left.u - al;
    const double tail_l = left.u + 2.0 * al / (g - 1.0);
    const double head_r = right.u + ar;
    const double tail_r = right.u - 2.0 * ar / (g - 1.0);
    if (xi <= head_l) return left;
    if (xi < tail_l) {
      const double f = 2.0 / (g + 1.0) + gm / al * (left.u - xi);
      return {left.rho * std::pow(f, 2.0 / (g - 1.0)),
              2.0 / (g + 1.0) * (al + 0.5 * (g - 1.0) * left.u + xi),
              left.p * std::pow(f, 2.0 * g / (g - 1.0))};
    }
    if (xi <= tail_r) {
      // vacuum region: zero density and pressure; the fan velocity equals xi
      // at both fronts, so u = xi keeps the profile continuous
      return {0.0, xi, 0.0};
    }
    if (xi < head_r) {
      const double f = 2.0 / (g + 1.0) - gm / ar * (right.u - xi);
      return {right.rho * std::pow(f, 2.0 / (g - 1.0)),
              2.0 / (g + 1.0) * (-ar + 0.5 * (g - 1.0) * right.u + xi),
              right.p * std::pow(f, 2.0 * g / (g - 1.0))};
    }
    return right;
  }

  if (xi <= u_star) {
    // left of the contact
    if (p_star > left.p) {
      const double s = left.u - al * std::sqrt((g + 1.0) / (2.0 * g) * p_star / left.p +
                                               (g - 1.0) / (2.0 * g));
      if (xi <= s) return left;
      return {rho_star_l, u_star, p_star};
    }
    const double head = left.u - al;
    const double a_star = al * std::pow(p_star / left.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star - a_star;
    if (xi <= head) return left;
    if (xi >= tail) return {rho_star_l, u_star, p_star};
    const double f = 2.0 / (g + 1.0) + gm / al * (left.u - xi);
    return {left.rho * std::pow(f, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (al + 0.5 * (g - 1.0) * left.u + xi),
            left.p * std::pow(f, 2.0 * g / (g - 1.0))};
  }

  // right of the contact
  if (p_star > right.p) {
    const double s = right.u + ar * std::sqrt((g + 1.0) / (2.0 * g) * p_star / right.p +
                                              (g - 1.0) / (2.0 * g));
    if (xi >= s) return right;
    return {rho_star_r, u_star, p_star};
  }
  const double head = right.u + ar;
  const double a_star = ar * std::pow(p_star / right.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star + a_star;
  if (xi >= head) return right;
  if (xi <= tail) return {rho_star_r, u_star, p_star};
  const double f = 2.0 / (g + 1.0) - gm / ar * (right.u - xi);
  return {right.rho * std::pow(f, 2.0 / (g - 1.0)),
          2.0 / (g + 1.0) * (-ar + 0.5 * (g - 1.0) * right.u + xi),
          right.p * std::pow(f, 2.0 * g / (g - 1.0))};
}

}  // namespace cweno
