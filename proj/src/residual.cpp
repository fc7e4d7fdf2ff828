#include "pbip/residual.hpp"

#include <cmath>
#include <limits>

namespace pbip {

namespace {

void check_interior(const Iterate& z, const ProblemSpec& prob) {
  if (!((z.x.array() > prob.x_lower.array()).all() &&
        (z.x.array() < prob.x_upper.array()).all()))
    throw DomainError("iterate x is not strictly inside the box");
  if (!((z.mu_l.array() > 0).all() && (z.mu_r.array() > 0).all()))
    throw DomainError("bound multipliers must be strictly positive");
}

}  // namespace

double ResidualBlocks::inf_norm() const {
  return std::max(std::max(pbip::inf_norm(r_dual), pbip::inf_norm(r_primal)),
                  std::max(pbip::inf_norm(r_comp_l), pbip::inf_norm(r_comp_r)));
}

Vector ResidualBlocks::stacked() const {
  Vector v(r_dual.size() + r_primal.size() + r_comp_l.size() + r_comp_r.size());
  v << r_dual, r_primal, r_comp_l, r_comp_r;
  return v;
}

Vector eval_w(const Vector& c_val, const SolverConstants& consts) {
  if (consts.tau_tilde == 0.0) return Vector::Zero(c_val.size());
  if (inf_norm(c_val) >= consts.epsilon)
    throw FunnelError("funnel violated: some |c_i| >= epsilon");
  const double eps = consts.epsilon, tt = consts.tau_tilde;
  return (tt / (eps + c_val.array()) - tt / (eps - c_val.array())).matrix();
}

ResidualBlocks eval_F(const Iterate& z, const Params& p,
                      const ProblemSpec& prob, const SolverConstants& consts) {
  check_interior(z, prob);
  const Vector c = prob.eval_c(z.x);
  const Vector w = eval_w(c, consts);
  const Matrix J = prob.eval_jac_c(z.x);
  const Vector y = p.lambda_hat + z.lambda + w;

  ResidualBlocks r;
  r.r_dual = prob.eval_grad_f(z.x) - J * y + consts.rho * (prob.S * z.x) -
             z.mu_l + z.mu_r;
  r.r_primal = c + consts.omega * p.lambda_hat +
               (consts.omega + consts.omega_tilde) * z.lambda;
  r.r_comp_l = (z.mu_l.array() * (z.x - prob.x_lower).array() - p.tau).matrix();
  r.r_comp_r = (z.mu_r.array() * (prob.x_upper - z.x).array() - p.tau).matrix();
  return r;
}

JacobianParts eval_DF(const Iterate& z, const Params& p,
                      const ProblemSpec& prob, const SolverConstants& consts) {
  check_interior(z, prob);
  const Vector c = prob.eval_c(z.x);
  const Vector w = eval_w(c, consts);

  JacobianParts parts;
  parts.H = prob.eval_hess_lagrangian(z.x, p.lambda_hat + z.lambda + w);
  parts.jac_c = prob.eval_jac_c(z.x);
  parts.S = prob.S;
  parts.d_l = z.x - prob.x_lower;
  parts.d_r = prob.x_upper - z.x;
  parts.mu_l = z.mu_l;
  parts.mu_r = z.mu_r;
  parts.rho = consts.rho;
  parts.omega = consts.omega;
  parts.omega_tilde = consts.omega_tilde;
  return parts;
}

Matrix assemble_dense(const JacobianParts& parts, double rho_tilde) {
  const int n = static_cast<int>(parts.d_l.size());
  const int m = static_cast<int>(parts.jac_c.cols());
  const double om = parts.omega + parts.omega_tilde;

  Matrix DF = Matrix::Zero(3 * n + m, 3 * n + m);
  DF.block(0, 0, n, n) = parts.H + rho_tilde * parts.S;
  DF.block(0, n, n, m) = -parts.jac_c;
  DF.block(0, n + m, n, n) = -Matrix::Identity(n, n);
  DF.block(0, 2 * n + m, n, n) = Matrix::Identity(n, n);

  DF.block(n, 0, m, n) = parts.jac_c.transpose();
  DF.block(n, n, m, m) = om * Matrix::Identity(m, m);

  DF.block(n + m, 0, n, n) = parts.mu_l.asDiagonal();
  DF.block(n + m, n + m, n, n) = parts.d_l.asDiagonal();

  DF.block(2 * n + m, 0, n, n) = -Matrix(parts.mu_r.asDiagonal());
  DF.block(2 * n + m, 2 * n + m, n, n) = parts.d_r.asDiagonal();
  return DF;
}

double eval_phi(const Vector& x, const ProblemSpec& prob,
                const SolverConstants& consts) {
  const auto dl = (x - prob.x_lower).array();
  const auto dr = (prob.x_upper - x).array();
  if (!(dl > 0).all() || !(dr > 0).all())
    return std::numeric_limits<double>::infinity();
  const Vector c = prob.eval_c(x);
  double v = prob.eval_f(x) + 0.5 * consts.rho * x.dot(prob.S * x) +
             0.5 / consts.omega * c.squaredNorm() -
             consts.tau_end * (dl.log().sum() + dr.log().sum());
  if (std::isnan(v)) return std::numeric_limits<double>::infinity();
  return v;
}

Vector eval_grad_phi_funneled(const Vector& x, const ProblemSpec& prob,
                              const SolverConstants& consts) {
  const Vector dl = x - prob.x_lower;
  const Vector dr = prob.x_upper - x;
  if (!(dl.array() > 0).all() || !(dr.array() > 0).all())
    throw DomainError("x is not strictly inside the box");
  const Vector c = prob.eval_c(x);
  const Vector w = eval_w(c, consts);
  const Matrix J = prob.eval_jac_c(x);
  return prob.eval_grad_f(x) + consts.rho * (prob.S * x) +
         (1.0 / consts.omega) * (J * c) - J * w -
         consts.tau_end * dl.cwiseInverse() +
         consts.tau_end * dr.cwiseInverse();
}

}  // namespace pbip
