#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "cweno/field.hpp"
#include "cweno/positivity.hpp"
#include "cweno/reconstruction.hpp"
#include "cweno/riemann.hpp"

namespace cweno {

struct SchemeConfig {
  ReconstructionMode reconstruction{};  // fvcw on characteristic variables
  FluxKind flux = FluxKind::hllc;
  LimiterConfig limiter{};
  GasConstants gas{};
  double cfl = 1.0 / 12.0;
  // Order studies: dt ~ h^(5/3) so the third-order time error stays below the
  // fifth-order space error.
  bool accuracy_dt = false;
  // Per-stage minima bookkeeping (cell averages and limited traces).  Costs a
  // few percent of the run time; long smooth order studies may switch it off.
  bool track_minima = true;
};

// Running minima observed during stepping.  The *_cell fields track cell
// averages only; the *_all fields also include every (limited) interface trace
// of every stage.
struct StepMinima {
  double rho_cell = std::numeric_limits<double>::infinity();
  double e_cell = std::numeric_limits<double>::infinity();
  double p_cell = std::numeric_limits<double>::infinity();
  double rho_all = std::numeric_limits<double>::infinity();
  double e_all = std::numeric_limits<double>::infinity();
  double p_all = std::numeric_limits<double>::infinity();

  void take_cell(double rho, double e, double gamma_minus_1);
  void take_trace(double rho, double e, double gamma_minus_1);
  void merge(const StepMinima& other);
};

// Semi-discrete right-hand side L(u) = -(F_{j+1/2} - F_{j-1/2}) / h with
// reconstruction, positivity limiting and the numerical flux fused into one
// evaluation.
class SpatialOperator {
 public:
  explicit SpatialOperator(const SchemeConfig& cfg);

  void residual(const Field& f, std::vector<ConservedState>& out, StepMinima* minima = nullptr);
  double max_signal_speed(const Field& f) const;
  const SchemeConfig& config() const { return cfg_; }

 private:
  SchemeConfig cfg_;
  Reconstructor rec_;
  std::vector<ConservedState> padded_;
  InterfaceStates states_;
  std::vector<ConservedState> flux_;
};

double compute_dt(const Field& f, const SchemeConfig& cfg);

// Three-stage strong-stability-preserving Runge-Kutta update.
class TimeIntegrator {
 public:
  explicit TimeIntegrator(const SchemeConfig& cfg);

  StepMinima step(Field& f, double dt);
  SpatialOperator& spatial_op() { return op_; }

 private:
  SpatialOperator op_;
  Field u1_, u2_;
  std::vector<ConservedState> l_;
};

struct RunStats {
  long steps = 0;
  double t = 0.0;
  StepMinima minima{};
};

using StepObserver =
    std::function<void(long step, double t, double dt, const Field& f, const StepMinima& m)>;

// Advance to t_final.  The observer (optional) fires once before the first
// step (step 0, dt 0) and after every step.  Aborts with SolverError when the
// state stops being finite or max_steps is exceeded.
RunStats integrate(Field& f, double t_final, const SchemeConfig& cfg,
                   const StepObserver& observer = {}, long max_steps = 50'000'000);

}  // namespace cweno
