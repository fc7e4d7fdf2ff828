#include "pbip/problem.hpp"

#include <Eigen/Cholesky>
#include <charconv>
#include <sstream>

namespace pbip {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_cap: return "iteration-cap";
    case SolveStatus::line_search_failure: return "line-search-failure";
    case SolveStatus::outer_stall: return "outer-stall";
    case SolveStatus::conditioning_error: return "conditioning-error";
  }
  return "unknown";
}

void ProblemSpec::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("problem dimensions must be positive");
  if (x_lower.size() != n || x_upper.size() != n)
    throw std::invalid_argument("bound vectors must have length n");
  if (!((x_lower.array() < x_upper.array()).all()))
    throw std::invalid_argument("x_lower < x_upper must hold componentwise");
  if (S.rows() != n || S.cols() != n)
    throw std::invalid_argument("S must be n x n");
  if (!S.isApprox(S.transpose(), 1e-12))
    throw std::invalid_argument("S must be symmetric");
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("S must be positive definite");
  if (!eval_f || !eval_grad_f || !eval_c || !eval_jac_c || !eval_hess_lagrangian)
    throw std::invalid_argument("all evaluation callbacks must be set");
}

void SolverConstants::validate() const {
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
  if (!(omega > 0 && omega < omega_tilde))
    throw std::invalid_argument("0 < omega < omega_tilde required");
  if (!(tau_end > 0)) throw std::invalid_argument("tau_end must be positive");
  if (tau_tilde < 0) throw std::invalid_argument("tau_tilde must be nonnegative");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("theta in (0,1) required");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (!(chi >= 1)) throw std::invalid_argument("chi >= 1 required");
  if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("sigma in (0,1) required");
  if (!(armijo_c > 0 && armijo_c < 1)) throw std::invalid_argument("armijo_c in (0,1) required");
  if (!(backtrack > 0 && backtrack < 1)) throw std::invalid_argument("backtrack in (0,1) required");
  if (!(rho_tilde_growth > 1)) throw std::invalid_argument("rho_tilde_growth > 1 required");
  if (!(tau0 > 0)) throw std::invalid_argument("tau0 must be positive");
  if (max_inner < 0 || max_outer < 0 || max_outermost < 0 || max_backtracks < 0)
    throw std::invalid_argument("iteration caps must be nonnegative");
}

namespace {

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("bad numeric value: " + v);
  return x;
}

int parse_int(const std::string& v) {
  std::size_t pos = 0;
  int x = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("bad integer value: " + v);
  return x;
}

}  // namespace

bool SolverConstants::set(const std::string& key, const std::string& value) {
  if (key == "rho") rho = parse_double(value);
  else if (key == "omega") omega = parse_double(value);
  else if (key == "omega_tilde") omega_tilde = parse_double(value);
  else if (key == "tau_end") tau_end = parse_double(value);
  else if (key == "tau_tilde") tau_tilde = parse_double(value);
  else if (key == "epsilon") epsilon = parse_double(value);
  else if (key == "nu") nu = parse_double(value);
  else if (key == "theta") theta = parse_double(value);
  else if (key == "tol") tol = parse_double(value);
  else if (key == "chi") chi = parse_double(value);
  else if (key == "sigma") sigma = parse_double(value);
  else if (key == "armijo_c") armijo_c = parse_double(value);
  else if (key == "backtrack") backtrack = parse_double(value);
  else if (key == "rho_tilde_growth") rho_tilde_growth = parse_double(value);
  else if (key == "tau0") tau0 = parse_double(value);
  else if (key == "max_inner") max_inner = parse_int(value);
  else if (key == "max_outer") max_outer = parse_int(value);
  else if (key == "max_outermost") max_outermost = parse_int(value);
  else if (key == "max_backtracks") max_backtracks = parse_int(value);
  else return false;
  return true;
}

Vector Iterate::stacked() const {
  Vector z(x.size() + lambda.size() + mu_l.size() + mu_r.size());
  z << x, lambda, mu_l, mu_r;
  return z;
}

Iterate Iterate::from_stacked(const Vector& z, int n, int m) {
  if (z.size() != 3 * n + m) throw std::invalid_argument("bad stacked iterate size");
  Iterate it;
  it.x = z.segment(0, n);
  it.lambda = z.segment(n, m);
  it.mu_l = z.segment(n + m, n);
  it.mu_r = z.segment(2 * n + m, n);
  return it;
}

Vector validate_initial_point(const ProblemSpec& prob,
                              const SolverConstants& consts, const Vector& x0) {
  if (x0.size() != prob.n) throw DomainError("x0 has wrong dimension");
  if (!((x0.array() > prob.x_lower.array()).all() &&
        (x0.array() < prob.x_upper.array()).all()))
    throw DomainError("x0 must lie strictly inside the box");
  if (consts.tau_tilde > 0) {
    const double cn = inf_norm(prob.eval_c(x0));
    if (cn >= consts.epsilon) {
      std::ostringstream os;
      os << "||c(x0)||_inf = " << cn << " >= epsilon = " << consts.epsilon
         << "; choose a start point closer to the constraints or a larger epsilon";
      throw FunnelError(os.str());
    }
  }
  return x0;
}

}  // namespace pbip
