#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double inf_norm(const Vector& v) {
  return v.size() > 0 ? v.lpNorm<Eigen::Infinity>() : 0.0;
}

/// Unknown registry name.
class RegistryError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Iterate left the open box / positivity domain.
class DomainError : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Some |c_i| >= epsilon while the feasibility funnel is active.
class FunnelError : public std::domain_error {
  using std::domain_error::domain_error;
};

enum class SolveStatus {
  converged,
  iteration_cap,
  line_search_failure,
  outer_stall,
  conditioning_error,
};

const char* to_string(SolveStatus s);

/// Thrown by the iteration levels to abort a solve; the driver maps it
/// onto the report status.
class SolverStop : public std::runtime_error {
public:
  SolverStop(SolveStatus s, const std::string& msg)
      : std::runtime_error(msg), status(s) {}
  SolveStatus status;
};

/// A box-constrained equality-penalized problem instance. Evaluation
/// callbacks must be re-entrant and side-effect free; a ProblemSpec may be
/// shared read-only across concurrent solves.
struct ProblemSpec {
  int n = 0;  // dimension of x
  int m = 0;  // dimension of c, m > n allowed

  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_grad_f;
  std::function<Vector(const Vector&)> eval_c;
  // n x m, gradient of c_i stored as column i.
  std::function<Matrix(const Vector&)> eval_jac_c;
  // (x, y) -> hess(f)(x) - sum_i y_i hess(c_i)(x), symmetric n x n.
  std::function<Matrix(const Vector&, const Vector&)> eval_hess_lagrangian;

  Vector x_lower;
  Vector x_upper;
  Matrix S;  // symmetric positive definite primal scaling
  bool is_linear = false;

  Vector x0;  // registry default start point

  std::string name;

  /// Checks strict bounds ordering and attempts a Cholesky factorization
  /// of S. Throws std::invalid_argument on violation.
  void validate() const;
};

/// All fixed scalars of the method. Defaults not given by the problem
/// statement (omega_tilde, tau_tilde, nu, chi, theta, tau0, the Armijo
/// constants and the backtracking/shift factors) are artifact choices,
/// overridable via config file or CLI.
struct SolverConstants {
  double rho = 1e-8;              // convexization weight
  double omega = 1e-8;            // quadratic penalty
  double omega_tilde = 1e-4;      // relaxed penalty, > omega
  double tau_end = 1e-8;          // final barrier parameter
  double tau_tilde = 1e-6;        // funnel barrier weight (0 disables funnel)
  double epsilon = 0.1;           // funnel half-width
  double nu = 1.0;                // dual merit weight
  double theta = 0.995;           // fraction-to-the-boundary coefficient
  double tol = 1e-8;              // KKT residual tolerance
  double chi = 100.0;             // outer acceptance multiplier
  double sigma = 0.1;             // barrier reduction factor
  double armijo_c = 1e-4;         // sufficient-decrease constant
  double backtrack = 0.5;         // step-size shrink factor
  double rho_tilde_growth = 10.0; // inertia-shift growth factor
  double tau0 = 0.1;              // initial barrier parameter

  int max_inner = 200;
  // Near a degenerate vertex the regularized multiplier contracts by only
  // omega/(omega+omega_tilde) per outer step; each step is one cheap
  // auxiliary solve, so the cap is sized for that worst case.
  int max_outer = 1000000;
  int max_outermost = 20000;
  int max_backtracks = 60;

  void validate() const;

  /// Assigns a field by name from a string value. Returns false for an
  /// unknown key, throws std::invalid_argument for an unparsable value.
  bool set(const std::string& key, const std::string& value);
};

/// Primal-dual iterate z = (x, lambda, mu_l, mu_r).
struct Iterate {
  Vector x;
  Vector lambda;
  Vector mu_l;
  Vector mu_r;

  Vector stacked() const;
  static Iterate from_stacked(const Vector& z, int n, int m);
};

/// Parameter vector p = (tau, lambda_hat).
struct Params {
  double tau = 0.0;
  Vector lambda_hat;
};

ProblemSpec make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Accepts x0 iff it is strictly inside the box and, with the funnel
/// active, ||c(x0)||_inf < epsilon (strict: the funnel logs are undefined
/// at |c_i| >= epsilon). Returns x0 unchanged.
Vector validate_initial_point(const ProblemSpec& prob,
                              const SolverConstants& consts,
                              const Vector& x0);

}  // namespace pbip
