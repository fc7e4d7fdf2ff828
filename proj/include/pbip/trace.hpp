#pragma once

#include <vector>

namespace pbip {

/// One record per inner step, outer multiplier step, or barrier update.
struct TraceEvent {
  enum class Level { inner, outer, outermost };
  Level level = Level::inner;

  int outermost_iter = 0;
  int outer_iter = 0;
  int inner_iter = 0;

  double tau = 0.0;
  double f_norm = 0.0;        // ||F||_inf before the step
  double f_norm_after = 0.0;  // ||F||_inf after the step (outer: at trial)
  double merit = 0.0;
  double merit_after = 0.0;
  double alpha = 0.0;
  double alpha_box = 0.0;
  double dir_deriv = 0.0;
  double rho_tilde = 0.0;
  int backtracks = 0;
  int inertia_shifts = 0;
  double lambda_norm = 0.0;
  double c_norm = 0.0;
};

struct Counters {
  long inner_steps = 0;
  long outer_steps = 0;
  long outermost_steps = 0;
  long factorizations = 0;
  long inertia_shifts = 0;
  long aux_newton_steps = 0;
};

struct Trace {
  std::vector<TraceEvent> events;
};

/// Shared per-solve state threaded through the iteration levels. All
/// pointers may be null when a level is driven directly from tests.
struct SolveContext {
  Trace* trace = nullptr;
  Counters counters;
  int outermost_iter = 0;
  int outer_iter = 0;
  double rho_tilde_warm = 0.0;  // last successful shift, 0 = none
};

}  // namespace pbip
