#include "pbip/merit.hpp"

#include <cmath>
#include <limits>

namespace pbip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_domain(const Iterate& z, const ProblemSpec& prob,
               const SolverConstants& consts, const Vector& c) {
  if (!((z.x.array() > prob.x_lower.array()).all() &&
        (z.x.array() < prob.x_upper.array()).all()))
    return false;
  if (!((z.mu_l.array() > 0).all() && (z.mu_r.array() > 0).all())) return false;
  if (consts.tau_tilde > 0 && inf_norm(c) >= consts.epsilon) return false;
  return true;
}

}  // namespace

MeritValue eval_M(const Iterate& z, const Params& p, const ProblemSpec& prob,
                  const SolverConstants& consts) {
  const Vector c = prob.eval_c(z.x);
  if (!in_domain(z, prob, consts, c)) return {kInf, false};

  const double om = consts.omega, omt = consts.omega_tilde, nu = consts.nu;
  const double tau = p.tau;
  const auto dl = (z.x - prob.x_lower).array();
  const auto dr = (prob.x_upper - z.x).array();

  double v = prob.eval_f(z.x) - p.lambda_hat.dot(c);

  if (consts.tau_tilde > 0) {
    v -= consts.tau_tilde * ((consts.epsilon + c.array()).log().sum() +
                             (consts.epsilon - c.array()).log().sum());
  }

  const Vector r1 = c + om * (p.lambda_hat + z.lambda);
  v += 0.5 / omt * r1.squaredNorm();

  v += 0.5 * consts.rho * z.x.dot(prob.S * z.x) +
       0.5 * om * z.lambda.squaredNorm() -
       tau * (dl.log().sum() + dr.log().sum());

  const Vector r2 = c + om * p.lambda_hat + (om + omt) * z.lambda;
  v += 0.5 * nu / omt * r2.squaredNorm();

  const auto ul = z.mu_l.array() * dl / tau;
  const auto ur = z.mu_r.array() * dr / tau;
  v -= nu * tau * (ul.log() + 1.0 - ul).sum();
  v -= nu * tau * (ur.log() + 1.0 - ur).sum();

  if (!std::isfinite(v)) return {kInf, false};
  return {v, true};
}

Vector eval_grad_M(const Iterate& z, const Params& p, const ProblemSpec& prob,
                   const SolverConstants& consts) {
  const Vector c = prob.eval_c(z.x);
  if (!in_domain(z, prob, consts, c))
    throw DomainError("eval_grad_M: point outside the merit domain");

  const int n = prob.n, m = prob.m;
  const double om = consts.omega, omt = consts.omega_tilde, nu = consts.nu;
  const double tau = p.tau;
  const Matrix J = prob.eval_jac_c(z.x);
  const Vector dl = z.x - prob.x_lower;
  const Vector dr = prob.x_upper - z.x;
  const Vector r1 = c + om * (p.lambda_hat + z.lambda);
  const Vector r2 = c + om * p.lambda_hat + (om + omt) * z.lambda;

  Vector gx = prob.eval_grad_f(z.x) - J * p.lambda_hat +
              (1.0 / omt) * (J * r1) + consts.rho * (prob.S * z.x) -
              tau * dl.cwiseInverse() + tau * dr.cwiseInverse() +
              (nu / omt) * (J * r2);
  if (consts.tau_tilde > 0) {
    // gradient of the funnel barrier is -jac_c * w
    const double eps = consts.epsilon, tt = consts.tau_tilde;
    const Vector w =
        (tt / (eps + c.array()) - tt / (eps - c.array())).matrix();
    gx -= J * w;
  }
  // dual proximity terms
  gx += nu * z.mu_l - nu * tau * dl.cwiseInverse();
  gx -= nu * z.mu_r - nu * tau * dr.cwiseInverse();

  Vector gl = (om / omt) * r1 + om * z.lambda + (nu * (om + omt) / omt) * r2;
  Vector gml = nu * dl - nu * tau * z.mu_l.cwiseInverse();
  Vector gmr = nu * dr - nu * tau * z.mu_r.cwiseInverse();

  Vector g(3 * n + m);
  g << gx, gl, gml, gmr;
  return g;
}

double directional_derivative(const Iterate& z, const Params& p,
                              const ProblemSpec& prob,
                              const SolverConstants& consts,
                              const Vector& dz) {
  return eval_grad_M(z, p, prob, consts).dot(dz);
}

}  // namespace pbip
