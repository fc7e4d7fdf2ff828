#pragma once

#include "pbip/inner.hpp"

namespace pbip {

/// Solves the auxiliary barrier-QP optimality system for z_trial at the
/// trial parameters p_alpha, with gradient and constraint data frozen at
/// the incumbent z. Damped Newton, warm-started at z (lambda warm start
/// overridable via lambda_init), inner tolerance 0.1 * consts.tol.
/// Throws std::runtime_error on a Newton stall (> 100 steps).
Iterate solve_auxiliary(const Iterate& z, const Params& p_alpha,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        const Vector* lambda_init = nullptr,
                        SolveContext* ctx = nullptr);

struct MalmResult {
  Iterate z;
  Params p;
  double alpha = 0.0;
};

/// One relaxed multiplier update: tries alpha = 1, 1/2, 1/4, ...; accepts
/// the first trial with ||F(z_trial, p(alpha))||_inf <= chi * tol. Throws
/// SolverStop(outer_stall) when alpha underflows 1e-8.
MalmResult malm_step(const Iterate& z, const Params& p,
                     const ProblemSpec& prob, const SolverConstants& consts,
                     SolveContext* ctx = nullptr);

struct OuterResult {
  Iterate z;
  Params p;
};

/// Alternates multiplier steps and inner solves until ||lambda||_inf <=
/// tol; at exit also ||F(z,p)||_inf <= tol. In lp_mode the multiplier step
/// comes first and runs at least once per call (the auxiliary solve itself
/// restores centrality after a tau update); otherwise an inner solve
/// recenters first.
OuterResult outer_solve(const Iterate& z0, const Params& p0,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        bool lp_mode = false, SolveContext* ctx = nullptr);

}  // namespace pbip
