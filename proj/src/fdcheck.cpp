#include "pbip/fdcheck.hpp"

#include <algorithm>
#include <cmath>

#include "pbip/merit.hpp"
#include "pbip/residual.hpp"

namespace pbip {

Vector fd_grad5(const std::function<double(const Vector&)>& f, const Vector& x,
                const Vector& h) {
  Vector g(x.size());
  Vector xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double hi = h(i), xi = x(i);
    xp(i) = xi - 2 * hi;
    const double fm2 = f(xp);
    xp(i) = xi - hi;
    const double fm1 = f(xp);
    xp(i) = xi + hi;
    const double fp1 = f(xp);
    xp(i) = xi + 2 * hi;
    const double fp2 = f(xp);
    xp(i) = xi;
    g(i) = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hi);
  }
  return g;
}

Matrix fd_jac(const std::function<Vector(const Vector&)>& f, const Vector& x,
              const Vector& h) {
  Vector xp = x;
  Matrix J;
  for (int i = 0; i < x.size(); ++i) {
    const double hi = h(i), xi = x(i);
    xp(i) = xi + hi;
    const Vector fp = f(xp);
    xp(i) = xi - hi;
    const Vector fm = f(xp);
    xp(i) = xi;
    if (i == 0) J = Matrix::Zero(fp.size(), x.size());
    J.col(i) = (fp - fm) / (2.0 * hi);
  }
  return J;
}

double rel_err(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>() /
         (1.0 + b.lpNorm<Eigen::Infinity>());
}

double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + b.cwiseAbs().maxCoeff());
}

Iterate sample_admissible(const ProblemSpec& prob,
                          const SolverConstants& consts, double tau,
                          std::mt19937& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Vector width = prob.x_upper - prob.x_lower;

  Vector x_rand(prob.n);
  for (int i = 0; i < prob.n; ++i)
    x_rand(i) = prob.x_lower(i) + width(i) * (0.1 + 0.8 * u01(rng));

  // pull toward the (funnel-admissible) default start until inside the
  // funnel with slack
  Vector x = x_rand;
  for (int k = 0; k < 60; ++k) {
    if (consts.tau_tilde == 0 ||
        inf_norm(prob.eval_c(x)) < 0.5 * consts.epsilon)
      break;
    x = prob.x0 + 0.5 * (x - prob.x0);
  }

  Iterate z;
  z.x = x;
  z.lambda = Vector(prob.m);
  for (int i = 0; i < prob.m; ++i) z.lambda(i) = 2.0 * u01(rng) - 1.0;
  z.mu_l = Vector(prob.n);
  z.mu_r = Vector(prob.n);
  for (int i = 0; i < prob.n; ++i) {
    z.mu_l(i) = tau / (x(i) - prob.x_lower(i)) * (0.5 + 1.5 * u01(rng));
    z.mu_r(i) = tau / (prob.x_upper(i) - x(i)) * (0.5 + 1.5 * u01(rng));
  }
  return z;
}

namespace {

// step sizes for the x block, capped so the 5-point stencil stays strictly
// inside the box
Vector x_steps(const Vector& x, const ProblemSpec& prob, double scale) {
  Vector h(x.size());
  for (int i = 0; i < x.size(); ++i) {
    double hi = scale * (1.0 + std::abs(x(i)));
    hi = std::min(hi, 0.05 * (x(i) - prob.x_lower(i)));
    hi = std::min(hi, 0.05 * (prob.x_upper(i) - x(i)));
    h(i) = hi;
  }
  return h;
}

}  // namespace

bool DerivReport::pass() const {
  return err_grad_f <= 1e-6 && err_jac_c <= 1e-6 && err_hess <= 1e-5 &&
         err_df <= 1e-5 && err_grad_m <= 1e-5 && err_grad_phi <= 1e-6;
}

DerivReport check_derivatives(const ProblemSpec& prob,
                              const SolverConstants& consts, unsigned seed,
                              int n_points) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int n = prob.n, m = prob.m;
  const double merit_tau = 0.1;

  SolverConstants consts_nofunnel = consts;
  consts_nofunnel.tau_tilde = 0.0;

  DerivReport rep;
  for (int pt = 0; pt < n_points; ++pt) {
    const Iterate z = sample_admissible(prob, consts, merit_tau, rng);
    Params p;
    p.tau = merit_tau;
    p.lambda_hat = Vector(m);
    for (int i = 0; i < m; ++i) p.lambda_hat(i) = 2.0 * u01(rng) - 1.0;

    // objective gradient
    rep.err_grad_f = std::max(
        rep.err_grad_f,
        rel_err(fd_grad5(prob.eval_f, z.x, x_steps(z.x, prob, 1e-3)),
                prob.eval_grad_f(z.x)));

    // constraint Jacobian (stored n x m, FD gives m x n)
    rep.err_jac_c = std::max(
        rep.err_jac_c,
        rel_err(fd_jac(prob.eval_c, z.x, x_steps(z.x, prob, 1e-6)),
                prob.eval_jac_c(z.x).transpose().eval()));

    // Hessian of the Lagrangian against FD of grad_f - jac_c * y
    Vector y(m);
    for (int i = 0; i < m; ++i) y(i) = 2.0 * u01(rng) - 1.0;
    const auto grad_lag = [&](const Vector& xv) {
      return (prob.eval_grad_f(xv) - prob.eval_jac_c(xv) * y).eval();
    };
    rep.err_hess = std::max(
        rep.err_hess,
        rel_err(fd_jac(grad_lag, z.x, x_steps(z.x, prob, 1e-5)),
                prob.eval_hess_lagrangian(z.x, y)));

    // full Jacobian of F with the funnel off
    {
      const auto F_of = [&](const Vector& zv) {
        return eval_F(Iterate::from_stacked(zv, n, m), p, prob,
                      consts_nofunnel)
            .stacked();
      };
      const Vector z0 = z.stacked();
      Vector h(3 * n + m);
      h.segment(0, n) = x_steps(z.x, prob, 1e-6);
      for (int i = 0; i < m; ++i) h(n + i) = 1e-6 * (1.0 + std::abs(z.lambda(i)));
      for (int i = 0; i < n; ++i) {
        h(n + m + i) = std::min(1e-6 * (1.0 + z.mu_l(i)), 0.4 * z.mu_l(i));
        h(2 * n + m + i) = std::min(1e-6 * (1.0 + z.mu_r(i)), 0.4 * z.mu_r(i));
      }
      const Matrix DF =
          assemble_dense(eval_DF(z, p, prob, consts_nofunnel), consts.rho);
      rep.err_df = std::max(rep.err_df, rel_err(fd_jac(F_of, z0, h), DF));
    }

    // merit gradient
    {
      const auto M_of = [&](const Vector& zv) {
        return eval_M(Iterate::from_stacked(zv, n, m), p, prob, consts).value;
      };
      const Vector z0 = z.stacked();
      Vector h(3 * n + m);
      h.segment(0, n) = x_steps(z.x, prob, 1e-3).cwiseMin(1e-3);
      for (int i = 0; i < m; ++i) h(n + i) = 1e-3 * (1.0 + std::abs(z.lambda(i)));
      for (int i = 0; i < n; ++i) {
        h(n + m + i) = 0.01 * z.mu_l(i);
        h(2 * n + m + i) = 0.01 * z.mu_r(i);
      }
      rep.err_grad_m = std::max(
          rep.err_grad_m,
          rel_err(fd_grad5(M_of, z0, h), eval_grad_M(z, p, prob, consts)));
    }

    // gradient of phi plus the funnel barrier
    {
      const auto phi_funneled = [&](const Vector& xv) {
        double v = eval_phi(xv, prob, consts);
        if (consts.tau_tilde > 0) {
          const Vector c = prob.eval_c(xv);
          v -= consts.tau_tilde *
               ((consts.epsilon + c.array()).log().sum() +
                (consts.epsilon - c.array()).log().sum());
        }
        return v;
      };
      rep.err_grad_phi = std::max(
          rep.err_grad_phi,
          rel_err(fd_grad5(phi_funneled, z.x,
                           x_steps(z.x, prob, 1e-3).cwiseMin(1e-3)),
                  eval_grad_phi_funneled(z.x, prob, consts)));
    }
  }
  return rep;
}

}  // namespace pbip
