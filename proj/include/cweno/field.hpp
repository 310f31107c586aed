// Uniform one-dimensional finite-volume grid, the cell-average field living on
// it, and ghost-cell padding for the three supported boundary kinds.
#ifndef CWENO_FIELD_HPP
#define CWENO_FIELD_HPP

#include <vector>

#include "cweno/euler.hpp"

namespace cweno {

enum class BoundaryKind { periodic, transmissive, reflective };

struct Grid1D {
  double xa = 0.0;
  double xb = 1.0;
  int n = 0;

  double h() const { return (xb - xa) / n; }
  double center(int j) const { return xa + (j + 0.5) * h(); }
  double interface(int i) const { return xa + i * h(); }
};

// Cell averages of the conserved variables.
struct Field {
  Grid1D grid;
  BoundaryKind bc = BoundaryKind::transmissive;
  std::vector<ConservedState> u;
};

// Stencil half-width needed by the fifth-order reconstructions.
inline constexpr int kGhostWidth = 3;

// Writes the padded average array: `out` gets n + 2*width entries, interior
// cells at [width, width + n).  Transmissive copies the edge cell, reflective
// mirrors cells with negated momentum, periodic wraps.
inline void fill_ghosts(const Field& f, int width, std::vector<ConservedState>& out) {
  const int n = f.grid.n;
  if (n < width)
    throw SolverError("fill_ghosts: grid has fewer cells than the ghost width");
  out.resize(static_cast<size_t>(n) + 2 * width);
  for (int j = 0; j < n; ++j) out[width + j] = f.u[j];
  for (int k = 1; k <= width; ++k) {
    switch (f.bc) {
      case BoundaryKind::periodic:
        out[width - k] = f.u[n - k];
        out[width + n - 1 + k] = f.u[k - 1];
        break;
      case BoundaryKind::transmissive:
        out[width - k] = f.u[0];
        out[width + n - 1 + k] = f.u[n - 1];
        break;
      case BoundaryKind::reflective:
        out[width - k] = mirror(f.u[k - 1]);
        out[width + n - 1 + k] = mirror(f.u[n - k]);
        break;
    }
  }
}

}  // namespace cweno

#endif  // CWENO_FIELD_HPP
