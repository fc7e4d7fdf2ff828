#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pbip/fdcheck.hpp"
#include "pbip/residual.hpp"

using namespace pbip;

TEST_CASE("eval_w hand values, odd symmetry, and funnel guard") {
  SolverConstants consts;
  consts.tau_tilde = 1e-6;
  consts.epsilon = 0.1;

  Vector c(1);
  c << 0.05;
  // w = tau_tilde (1/(eps+c) - 1/(eps-c)) = 1e-6 (1/0.15 - 1/0.05).
  const double expected = 1e-6 * (1.0 / 0.15 - 1.0 / 0.05);
  CHECK(eval_w(c, consts)(0) == doctest::Approx(expected).epsilon(1e-14));

  Vector neg = -c;
  CHECK(eval_w(neg, consts)(0) == doctest::Approx(-expected).epsilon(1e-14));

  Vector zero = Vector::Zero(1);
  CHECK(eval_w(zero, consts)(0) == 0.0);

  Vector wide(1);
  wide << 0.1;  // |c| == epsilon: log undefined
  CHECK_THROWS_AS(eval_w(wide, consts), FunnelError);

  consts.tau_tilde = 0.0;  // funnel disabled: w == 0 regardless of c
  CHECK(eval_w(wide, consts)(0) == 0.0);
}

TEST_CASE("eval_F blockwise hand example on a 1d problem") {
  // n = m = 1, f = x^2/2, c = x - 1, box [0, 4], S = 1.
  ProblemSpec p;
  p.n = p.m = 1;
  p.eval_f = [](const Vector& x) { return 0.5 * x(0) * x(0); };
  p.eval_grad_f = [](const Vector& x) { return x; };
  p.eval_c = [](const Vector& x) {
    return Vector::Constant(1, x(0) - 1.0).eval();
  };
  p.eval_jac_c = [](const Vector&) { return Matrix::Ones(1, 1).eval(); };
  p.eval_hess_lagrangian = [](const Vector&, const Vector&) {
    return Matrix::Ones(1, 1).eval();
  };
  p.x_lower = Vector::Zero(1);
  p.x_upper = Vector::Constant(1, 4.0);
  p.S = Matrix::Ones(1, 1);

  SolverConstants consts;
  consts.tau_tilde = 0.0;  // keep the example purely algebraic

  Iterate z;
  z.x = Vector::Constant(1, 1.02);
  z.lambda = Vector::Constant(1, 0.3);
  z.mu_l = Vector::Constant(1, 0.7);
  z.mu_r = Vector::Constant(1, 0.2);
  Params par{1e-2, Vector::Constant(1, -0.5)};

  const ResidualBlocks r = eval_F(z, par, p, consts);
  // r_dual = x - (lambda_hat + lambda) + rho*x - mu_l + mu_r
  CHECK(r.r_dual(0) == doctest::Approx(1.02 - (-0.5 + 0.3) +
                                       consts.rho * 1.02 - 0.7 + 0.2));
  // r_primal = c + omega*lambda_hat + (omega + omega_tilde)*lambda
  CHECK(r.r_primal(0) ==
        doctest::Approx(0.02 + consts.omega * (-0.5) +
                        (consts.omega + consts.omega_tilde) * 0.3));
  // r_comp_l = mu_l (x - xl) - tau,  r_comp_r = mu_r (xu - x) - tau
  CHECK(r.r_comp_l(0) == doctest::Approx(0.7 * 1.02 - 1e-2));
  CHECK(r.r_comp_r(0) == doctest::Approx(0.2 * (4.0 - 1.02) - 1e-2));

  CHECK(r.inf_norm() == doctest::Approx(r.stacked().lpNorm<Eigen::Infinity>()));
  CHECK(r.stacked().size() == 4);
}

TEST_CASE("DF matches finite differences of F with the funnel disabled") {
  SolverConstants consts;
  consts.tau_tilde = 0.0;
  const ProblemSpec prob = make_problem("cvxqp");
  std::mt19937 rng(7);
  const Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  Params p{1e-2, Vector::Zero(prob.m)};

  const Matrix dense = assemble_dense(eval_DF(z, p, prob, consts), consts.rho);

  const int n = prob.n, m = prob.m;
  auto F_of = [&](const Vector& s) {
    return eval_F(Iterate::from_stacked(s, n, m), p, prob, consts).stacked();
  };
  Vector h = Vector::Constant(3 * n + m, 1e-6);
  const Matrix fd = fd_jac(F_of, z.stacked(), h);
  CHECK(rel_err(dense, fd) < 1e-6);
}

TEST_CASE("with the funnel active DF is quasi-Newton: the discrepancy is the "
          "omitted dw/dx term") {
  SolverConstants consts;  // tau_tilde = 1e-6
  const ProblemSpec prob = make_problem("cvxqp");
  std::mt19937 rng(11);
  const Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  Params p{1e-2, Vector::Zero(prob.m)};

  const int n = prob.n, m = prob.m;
  const Matrix dense = assemble_dense(eval_DF(z, p, prob, consts), consts.rho);
  auto F_of = [&](const Vector& s) {
    return eval_F(Iterate::from_stacked(s, n, m), p, prob, consts).stacked();
  };
  Vector h = Vector::Constant(3 * n + m, 1e-6);
  const Matrix fd = fd_jac(F_of, z.stacked(), h);

  // Only the dual-row x-block may differ, by J diag(dw/dc) J' with
  // dw/dc_i = -tau_tilde (1/(eps+c_i)^2 + 1/(eps-c_i)^2).
  const Vector c = prob.eval_c(z.x);
  const Matrix J = prob.eval_jac_c(z.x);
  Matrix dw = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    dw(i, i) = -consts.tau_tilde * (1.0 / std::pow(consts.epsilon + c(i), 2) +
                                    1.0 / std::pow(consts.epsilon - c(i), 2));
  Matrix expected_fd = dense;
  expected_fd.block(0, 0, n, n) -= J * dw * J.transpose();
  CHECK(rel_err(expected_fd, fd) < 1e-5);
  // And the discrepancy itself must be visible (the term is nonzero).
  CHECK((J * dw * J.transpose()).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("eval_phi hand value and +inf sentinel") {
  const ProblemSpec prob = make_problem("cubic1d");
  SolverConstants consts;
  consts.tau_end = 1e-2;

  Vector x(1);
  x << 0.5;
  // phi = f + rho/2 x'Sx - tau_end (log(x-xl) + log(xu-x));
  // box is [-1, 2]: distances 1.5 both sides.
  const double expected = 0.175 + 0.5 * consts.rho * 0.25 -
                          1e-2 * (std::log(1.5) + std::log(1.5));
  CHECK(eval_phi(x, prob, consts) == doctest::Approx(expected).epsilon(1e-12));

  Vector on_edge(1);
  on_edge << 2.0;
  CHECK(std::isinf(eval_phi(on_edge, prob, consts)));
  Vector outside(1);
  outside << 2.5;
  CHECK(std::isinf(eval_phi(outside, prob, consts)));
}

TEST_CASE("grad of phi plus funnel matches finite differences") {
  SolverConstants consts;
  consts.tau_end = 1e-3;
  const ProblemSpec prob = make_problem("overdet");
  std::mt19937 rng(3);
  const Iterate z = sample_admissible(prob, consts, 1e-3, rng);

  auto phi_full = [&](const Vector& x) {
    double v = eval_phi(x, prob, consts);
    const Vector c = prob.eval_c(x);
    for (int i = 0; i < prob.m; ++i)
      v -= consts.tau_tilde * (std::log(consts.epsilon + c(i)) +
                               std::log(consts.epsilon - c(i)));
    return v;
  };
  Vector h = Vector::Constant(prob.n, 1e-4);
  const Vector fd = fd_grad5(phi_full, z.x, h);
  CHECK(rel_err(eval_grad_phi_funneled(z.x, prob, consts), fd) < 1e-7);
}

TEST_CASE("dual residual reduces to grad(phi + funnel) at central "
          "multipliers") {
  // With lambda = 0, lambda_hat = -c/omega (so -J*lambda_hat reproduces
  // the quadratic-penalty gradient), and the bound multipliers exactly
  // central (mu = tau/d) at tau = tau_end, the dual block of F coincides
  // with the gradient of phi plus the funnel barrier: this is the
  // identity behind the stationarity certificate.
  const ProblemSpec prob = make_problem("cvxqp");
  SolverConstants consts;
  std::mt19937 rng(19);
  Iterate z = sample_admissible(prob, consts, consts.tau_end, rng);
  const double tau = consts.tau_end;

  z.mu_l = tau / (z.x - prob.x_lower).array();
  z.mu_r = tau / (prob.x_upper - z.x).array();
  z.lambda = Vector::Zero(prob.m);
  Params p{tau, Vector(-prob.eval_c(z.x) / consts.omega)};

  const ResidualBlocks r = eval_F(z, p, prob, consts);
  CHECK(inf_norm(r.r_comp_l) < 1e-14);
  CHECK(inf_norm(r.r_comp_r) < 1e-14);

  const Vector g = eval_grad_phi_funneled(z.x, prob, consts);
  CHECK(rel_err(g, r.r_dual) < 1e-10);
}
