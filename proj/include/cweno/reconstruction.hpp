// Fifth-order interface reconstruction from cell averages.
//
// Four schemes share one driver:
//   fvcw           nonlinear compact WENO: three two-cell candidate stencils
//                  blended by WENO-Z weights into a tridiagonal relation whose
//                  unknowns are the interface values themselves
//   linear-compact the same relation with the weights pinned to their optimal
//                  values (the underlying linear fifth-order compact scheme)
//   weno-z         classical explicit five-cell WENO with Borges' tau weights
//   weno-js        classical explicit WENO with Jiang-Shu weights
//
// Variables are reconstructed either characteristic-wise (projection onto the
// Roe-average eigenvectors at each interface, one global solve coupling the
// three fields) or component-wise on the raw conserved variables.
#ifndef CWENO_RECONSTRUCTION_HPP
#define CWENO_RECONSTRUCTION_HPP

#include <span>
#include <vector>

#include "cweno/euler.hpp"
#include "cweno/field.hpp"

namespace cweno {

enum class SchemeKind { fvcw, weno_js, weno_z, linear_compact };
enum class VariableMode { characteristic, conservative };

struct ReconstructionMode {
  SchemeKind scheme = SchemeKind::fvcw;
  VariableMode variables = VariableMode::characteristic;
  double eps = 1e-13;  // smoothness-indicator regularization
};

// Optimal linear weights.  The compact candidates reproduce the fifth-order
// compact interpolation with (2/10, 5/10, 3/10); the explicit five-cell
// candidates need (1/10, 6/10, 3/10).
inline constexpr std::array<double, 3> kCompactLinearWeights{0.2, 0.5, 0.3};
inline constexpr std::array<double, 3> kExplicitLinearWeights{0.1, 0.6, 0.3};

// Jiang-Shu smoothness indicators of the three 3-cell substencils of
// v[0..4] (v[2] is the owner cell).
std::array<double, 3> smoothness_indicators(const double* v);

struct StencilWeights {
  std::array<double, 3> beta;   // smoothness indicators
  double tau5 = 0.0;            // |beta2 - beta0| (zero for the JS variant)
  std::array<double, 3> omega;  // normalized nonlinear weights
};

StencilWeights weno_js_weights(const std::array<double, 3>& beta, double eps,
                               const std::array<double, 3>& linear = kCompactLinearWeights);
StencilWeights weno_z_weights(const std::array<double, 3>& beta, double eps,
                              const std::array<double, 3>& linear = kCompactLinearWeights);

// One row of the compact system for the owner cell j of interface j+1/2:
//   lhs[0] q(j-1/2) + lhs[1] q(j+1/2) + lhs[2] q(j+3/2)
//     = rhs[0] vbar(j-1) + rhs[1] vbar(j) + rhs[2] vbar(j+1).
struct CompactRow {
  std::array<double, 3> lhs;
  std::array<double, 3> rhs;
};

CompactRow compact_row(const std::array<double, 3>& omega);

// Explicit five-cell WENO point value on v[0..4].  Side::left evaluates the
// right-edge value of the owner cell v[2] (the "minus" trace of interface
// j+1/2); Side::right evaluates the mirrored formula for the left-edge value
// (the "plus" trace of j-1/2), in which case `w` must have been computed from
// the reversed window.
enum class Side { left, right };
double weno5_point_value(const double* v, const StencilWeights& w, Side side);

// --- Tridiagonal solvers -----------------------------------------------------

// Scalar Thomas algorithm (no pivoting): sub/diag/sup are the three bands,
// sub[0] and sup[m-1] ignored.  Throws SingularSystem on a collapsed pivot.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<const double> rhs,
                       std::span<double> x);

// Cyclic variant: sub[0] couples x[m-1], sup[m-1] couples x[0].
void solve_cyclic_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                              std::span<const double> sup, std::span<const double> rhs,
                              std::span<double> x);

// Block-tridiagonal system with 3x3 blocks: row i reads
//   A[i] x[i-1] + B[i] x[i] + C[i] x[i+1] = r[i],
// cyclically wrapped when `cyclic` (A[0] couples x[m-1], C[m-1] couples x[0]).
struct BlockTriSystem {
  int m = 0;
  bool cyclic = false;
  std::vector<Mat3> A, B, C;
  std::vector<Vec3> r;

  void resize(int rows, bool cyc);
};

// Chasing (block Thomas) solver with reusable scratch storage.  Block rows are
// eliminated in order without block pivoting; the 3x3 diagonal factorizations
// pivot internally.  Throws SingularSystem naming the interface row.
class BlockThomasSolver {
 public:
  void solve(const BlockTriSystem& sys, std::vector<Vec3>& x);

  // Solves two systems of the same shape in one interleaved sweep.  Results
  // are bitwise identical to two solve() calls — each lane performs exactly
  // the same operation sequence — but the two independent block recurrences
  // overlap in the pipeline, which roughly halves the latency-bound chase
  // cost.  Mismatched shapes fall back to sequential solves.
  void solve_pair(const BlockTriSystem& sys_a, const BlockTriSystem& sys_b,
                  std::vector<Vec3>& x_a, std::vector<Vec3>& x_b);

 private:
  std::vector<Mat3> p_, z_, p2_, z2_;
  std::vector<Vec3> q_, q2_;
};

// --- Interface reconstruction ------------------------------------------------

// Traces at the n+1 cell interfaces: minus[i] is the limit from cell i-1,
// plus[i] the limit from cell i.  For periodic fields index n duplicates
// index 0.
struct InterfaceStates {
  std::vector<ConservedState> minus, plus;

  void resize(int n_interfaces) {
    minus.resize(n_interfaces);
    plus.resize(n_interfaces);
  }
};

// Reconstruction driver with preallocated workspace; reuse one instance across
// steps.  reconstruct() pads the field with kGhostWidth ghost cells and fills
// `out` with both traces at every interface.
class Reconstructor {
 public:
  Reconstructor(const ReconstructionMode& mode, const GasConstants& gas)
      : mode_(mode), gas_(gas) {}

  void reconstruct(const Field& f, InterfaceStates& out);

  // Same, but on caller-supplied padded averages (interior cells at
  // [kGhostWidth, kGhostWidth + n)).  Exposed so exact polynomial ghost data
  // can bypass the boundary fill.
  void reconstruct_padded(std::span<const ConservedState> padded, int n, bool periodic,
                          InterfaceStates& out);

  const ReconstructionMode& mode() const { return mode_; }

 private:
  void minus_pass(std::span<const ConservedState> padded, int n, bool periodic,
                  std::vector<ConservedState>& out);
  void explicit_pass(std::span<const ConservedState> padded, int n,
                     std::vector<ConservedState>& out);
  // Conservative-variable compact systems (the characteristic compact path
  // goes through assemble_char_pair from reconstruct_padded instead).
  void compact_pass(std::span<const ConservedState> padded, int n, bool periodic,
                    std::vector<ConservedState>& out);
  void assemble_char_pair(std::span<const ConservedState> padded,
                          std::span<const ConservedState> mirrored, int n, bool periodic);

  StencilWeights weights(const std::array<double, 3>& beta,
                         const std::array<double, 3>& linear) const;
  ConservedState explicit_minus_trace(std::span<const ConservedState> padded, int p, bool pinned);

  struct ScalarBands {
    std::vector<double> sub, diag, sup, rhs;
  };

  ReconstructionMode mode_;
  GasConstants gas_;
  std::vector<ConservedState> padded_, mirrored_;
  BlockTriSystem sys_, sys2_;
  BlockThomasSolver solver_;
  std::vector<Vec3> x_, x2_;
  ScalarBands sbands_[3];
  std::vector<double> sx_;
};

// Convenience wrapper allocating its own workspace.
InterfaceStates reconstruct_interfaces(const Field& f, const ReconstructionMode& mode,
                                       const GasConstants& gas);

}  // namespace cweno

#endif  // CWENO_RECONSTRUCTION_HPP
