#pragma once

#include "pbip/outer.hpp"

namespace pbip {

struct SolveReport {
  Vector x, lambda, lambda_hat, mu_l, mu_r;
  double tau = 0.0;

  double f_norm = 0.0;         // ||F||_inf at exit
  double lambda_norm = 0.0;    // ||lambda||_inf
  double grad_phi_norm = 0.0;  // ||grad(phi + funnel)||_inf
  double c_norm = 0.0;         // ||c(x)||_inf
  double grad_f_norm = 0.0;
  double objective = 0.0;  // f(x)

  Counters counters;
  SolveStatus status = SolveStatus::iteration_cap;
  bool certificate_ok = false;  // stationarity certificate, converged only
  std::string message;
};

/// tau' = max(sigma_eff * tau, tau_end); sigma_eff = sigma normally,
/// 1 - 0.1/sqrt(2n) in lp_mode.
Params update_tau(const Params& p, const SolverConstants& consts, int n,
                  bool lp_mode);

double lp_sigma(int n);

/// tau0 from consts (clamped to >= tau_end), lambda_hat = lambda = 0, bound
/// multipliers exactly central: mu_l = tau0/(x0-x_lower),
/// mu_r = tau0/(x_upper-x0). Runs validate_initial_point first.
std::pair<Iterate, Params> initialize(const ProblemSpec& prob,
                                      const SolverConstants& consts,
                                      const Vector& x0);

/// The full three-level iteration. Never throws for solver outcomes; all
/// nonconvergence paths are reported through the status field.
SolveReport solve(const ProblemSpec& prob, const SolverConstants& consts,
                  const Vector& x0, bool lp_mode = false,
                  Trace* trace = nullptr);

}  // namespace pbip
