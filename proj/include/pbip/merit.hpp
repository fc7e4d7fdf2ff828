#pragma once

#include "pbip/problem.hpp"

namespace pbip {

/// Merit value with an explicit +inf sentinel for out-of-domain points, so
/// the line search can reject trial points without exceptions.
struct MeritValue {
  double value = std::numeric_limits<double>::infinity();
  bool domain_ok = false;
};

/// Primal-dual merit function M(z, p).
MeritValue eval_M(const Iterate& z, const Params& p, const ProblemSpec& prob,
                  const SolverConstants& consts);

/// Analytic gradient of M with respect to (x, lambda, mu_l, mu_r),
/// size 3n+m. Throws DomainError/FunnelError outside the domain.
Vector eval_grad_M(const Iterate& z, const Params& p, const ProblemSpec& prob,
                   const SolverConstants& consts);

/// grad(M)' * dz.
double directional_derivative(const Iterate& z, const Params& p,
                              const ProblemSpec& prob,
                              const SolverConstants& consts, const Vector& dz);

}  // namespace pbip
