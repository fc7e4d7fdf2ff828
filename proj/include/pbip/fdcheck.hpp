#pragma once

#include <random>

#include "pbip/problem.hpp"

namespace pbip {

/// Five-point (fourth-order) central finite-difference gradient with
/// per-component step sizes.
Vector fd_grad5(const std::function<double(const Vector&)>& f, const Vector& x,
                const Vector& h);

/// Two-point central finite-difference Jacobian; row k is the derivative
/// of component k, i.e. the result is (dim f) x (dim x).
Matrix fd_jac(const std::function<Vector(const Vector&)>& f, const Vector& x,
              const Vector& h);

/// ||a - b||_inf / (1 + ||b||_inf).
double rel_err(const Vector& a, const Vector& b);
double rel_err(const Matrix& a, const Matrix& b);

/// Draws an interior, funnel-admissible primal-dual point near prob.x0
/// with bound multipliers within a factor of 2 of central.
Iterate sample_admissible(const ProblemSpec& prob, const SolverConstants& consts,
                          double tau, std::mt19937& rng);

struct DerivReport {
  double err_grad_f = 0.0;   // vs FD of f
  double err_jac_c = 0.0;    // vs FD of c
  double err_hess = 0.0;     // vs FD of grad_f - jac_c * y
  double err_df = 0.0;       // dense DF vs FD of F, funnel off
  double err_grad_m = 0.0;   // vs FD of M
  double err_grad_phi = 0.0; // vs FD of phi + funnel barrier

  bool pass() const;
};

/// Runs all finite-difference suites on n_points sampled points.
DerivReport check_derivatives(const ProblemSpec& prob,
                              const SolverConstants& consts, unsigned seed,
                              int n_points = 20);

}  // namespace pbip
