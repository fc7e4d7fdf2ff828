#pragma once

#include "pbip/problem.hpp"

namespace pbip {

/// The four blocks of the root function F(z, p).
struct ResidualBlocks {
  Vector r_dual;    // n
  Vector r_primal;  // m
  Vector r_comp_l;  // n
  Vector r_comp_r;  // n

  double inf_norm() const;
  Vector stacked() const;  // (dual, primal, comp_l, comp_r), size 3n+m
};

/// Everything needed to assemble DF(z, p) (and its rho_tilde-shifted
/// variant). Diagonal data is stored as vectors; all of them are strictly
/// positive at an interior iterate.
struct JacobianParts {
  Matrix H;      // hess of L at multiplier lambda_hat + lambda + w(x)
  Matrix jac_c;  // n x m
  Matrix S;
  Vector d_l;   // x - x_lower
  Vector d_r;   // x_upper - x
  Vector mu_l;
  Vector mu_r;
  double rho = 0.0;
  double omega = 0.0;
  double omega_tilde = 0.0;
};

/// Funnel term w, componentwise tau_tilde/(eps+c_i) - tau_tilde/(eps-c_i).
/// Zero vector when the funnel is disabled (tau_tilde == 0); otherwise
/// throws FunnelError if any |c_i| >= epsilon.
Vector eval_w(const Vector& c_val, const SolverConstants& consts);

ResidualBlocks eval_F(const Iterate& z, const Params& p,
                      const ProblemSpec& prob, const SolverConstants& consts);

/// Quasi-Newton Jacobian of F: the d(w)/dx contribution to the dual row is
/// deliberately omitted, so with the funnel active DF is an approximation;
/// with tau_tilde = 0 it is the exact Jacobian.
JacobianParts eval_DF(const Iterate& z, const Params& p,
                      const ProblemSpec& prob, const SolverConstants& consts);

/// Dense (3n+m)^2 assembly of the shifted Jacobian: the (1,1) block is
/// H + rho_tilde*S, the remaining blocks are those of DF.
Matrix assemble_dense(const JacobianParts& parts, double rho_tilde);

/// Objective of the penalty-barrier problem. Returns +inf (never NaN) when
/// x is on or outside the box.
double eval_phi(const Vector& x, const ProblemSpec& prob,
                const SolverConstants& consts);

/// Gradient of phi plus the funnel barrier; the quantity certified to be
/// zero at a fully converged iterate (F = 0, lambda = 0, tau = tau_end).
Vector eval_grad_phi_funneled(const Vector& x, const ProblemSpec& prob,
                              const SolverConstants& consts);

}  // namespace pbip
