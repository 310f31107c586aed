#pragma once

#include <span>

#include "cweno/euler.hpp"
#include "cweno/field.hpp"
#include "cweno/reconstruction.hpp"

namespace cweno {

// Conservative rescaling of the interface traces toward the cell average so
// that density and internal energy stay positive.  Cell averages are assumed
// admissible; the limiter never changes them, only the traces, and reduces to
// the identity wherever the traces are already safely admissible.
struct LimiterConfig {
  bool enabled = true;
  // Per-cell admissibility floor: eps_j = min(floor, rho_bar_j, e(avg_j)).
  double floor = 1e-13;
};

// Density stage: the scaling theta in [0,1] that pulls the two edge densities
// toward the average far enough that both edges and the lumped interior
// quadrature value stay >= eps.  Throws SolverError if the average itself is
// below eps (the limiter cannot repair cell averages).
double density_theta(double rho_avg, double rho_minus_edge, double rho_plus_edge, double eps);

// Energy stage: largest t in [0,1] such that the blend avg + t (trace - avg)
// has internal energy >= eps.  Returns 1 when the trace is already fine.
double energy_theta(const ConservedState& avg, const ConservedState& trace, double eps);

// Limit the two traces owned by one cell: left_edge is the plus trace at the
// cell's left interface, right_edge the minus trace at its right interface.
void limit_cell(const ConservedState& avg, ConservedState& left_edge, ConservedState& right_edge,
                double floor);

// Apply the limiter across a field.  `padded` is the ghost-extended array of
// cell averages used for the reconstruction (ghost-owned traces at physical
// boundaries are rescaled toward the ghost averages; periodic wrap entries are
// re-synchronized after the pass).
void apply_limiter(const Field& f, std::span<const ConservedState> padded, InterfaceStates& states,
                   const LimiterConfig& cfg);

}  // namespace cweno
