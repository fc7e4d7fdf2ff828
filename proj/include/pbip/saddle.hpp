#pragma once

#include "pbip/residual.hpp"
#include "pbip/trace.hpp"

namespace pbip {

/// The n x n Schur complement K(rho_tilde) of the shifted step system,
/// together with the elimination data needed to recover the dual step
/// components from dx.
struct CondensedSystem {
  Matrix K;  // H + rho_tilde*S + diag(mu_l/d_l) + diag(mu_r/d_r)
             //   + jac_c jac_c' / (omega + omega_tilde)
  Matrix jac_c;
  Vector d_l, d_r, mu_l, mu_r;
  double om_sum = 0.0;  // omega + omega_tilde
};

/// Eliminates the three trailing (negative-definite after rescaling)
/// blocks of the step system onto the x block. Throws DomainError if any
/// stored diagonal is not strictly positive.
CondensedSystem condense(const JacobianParts& parts, double rho_tilde);

/// Right-hand side of K dx = rhs for the Newton system DF_shifted dz = -F.
Vector condensed_rhs(const CondensedSystem& cs, const ResidualBlocks& F_val);

/// Back-substitution: full dz = (dx, dlambda, dmu_l, dmu_r) from dx.
Vector recover_full_step(const CondensedSystem& cs, const ResidualBlocks& F_val,
                         const Vector& dx);

struct StepResult {
  Vector dz;  // (dx, dlambda, dmu_l, dmu_r), size 3n+m
  double rho_tilde_used = 0.0;
  int inertia_shifts = 0;
  // ||DF_shifted dz + F||_inf with the same rho_tilde shift in the (1,1)
  // block; the true Newton residual when no shift was needed.
  double newton_residual = 0.0;
};

/// Computes the inertia-corrected step: grows rho_tilde until K(rho_tilde)
/// admits a positive-definite factorization (equivalent to inertia
/// (n, 2n+m, 0) of the full saddle matrix), then back-substitutes.
/// rho_tilde_start below consts.rho is ignored. Throws
/// SolverStop(conditioning_error) when the shift exceeds 1e40.
StepResult solve_step(const Iterate& z, const Params& p,
                      const ResidualBlocks& F_val, const JacobianParts& parts,
                      const SolverConstants& consts,
                      double rho_tilde_start = 0.0,
                      Counters* counters = nullptr);

/// Largest alpha >= 0 keeping x + alpha dx inside the closed box and the
/// bound multipliers nonnegative; +inf when dz points inward everywhere.
/// lambda is unconstrained.
double max_step_to_boundary(const Iterate& z, const Vector& dz,
                            const ProblemSpec& prob,
                            const SolverConstants& consts);

}  // namespace pbip
