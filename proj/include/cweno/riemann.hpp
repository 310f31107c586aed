#pragma once

#include "cweno/euler.hpp"

namespace cweno {

enum class FluxKind { hllc, llf };

// HLLC approximate Riemann flux.  Outer wavespeeds blend the acoustic speeds
// of the input states with the Roe-average signal speeds, which makes the flux
// exact on isolated shocks and contacts and keeps the star states admissible
// for admissible inputs.
ConservedState hllc_flux(const ConservedState& ul, const ConservedState& ur,
                         const GasConstants& gas);

// Local Lax-Friedrichs (Rusanov) flux.
ConservedState llf_flux(const ConservedState& ul, const ConservedState& ur,
                        const GasConstants& gas);

ConservedState numerical_flux(FluxKind kind, const ConservedState& ul, const ConservedState& ur,
                              const GasConstants& gas);

// Full HLLC wave fan (both star states), for validation and diagnostics; the
// flux itself only ever materializes the star state on the upwind side.
struct HllcWaves {
  double s_l = 0.0, s_m = 0.0, s_r = 0.0;
  ConservedState star_l, star_r;
};

HllcWaves hllc_waves(const ConservedState& ul, const ConservedState& ur, const GasConstants& gas);

// --- Exact Riemann solver -----------------------------------------------------
//
// Reference oracle: star-region Newton iteration plus self-similar sampling,
// including the vacuum-formation case.  Used to build reference solutions and
// to cross-check the approximate fluxes; not used in the time loop.

struct RiemannSolution {
  PrimitiveState left{}, right{};
  double gamma = 1.4;
  bool vacuum = false;  // pressure positivity condition failed; a vacuum region opens
  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_l = 0.0;
  double rho_star_r = 0.0;
  int iterations = 0;

  // Self-similar state at xi = x/t.
  PrimitiveState sample(double xi) const;
};

RiemannSolution solve_riemann(const PrimitiveState& left, const PrimitiveState& right,
                              const GasConstants& gas);

}  // namespace cweno
