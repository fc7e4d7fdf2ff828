#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pbip/fdcheck.hpp"
#include "pbip/merit.hpp"
#include "pbip/residual.hpp"

using namespace pbip;

namespace {

Params zero_params(const ProblemSpec& prob, double tau) {
  return Params{tau, Vector::Zero(prob.m)};
}

}  // namespace

TEST_CASE("merit is finite inside the domain, +inf sentinel outside") {
  const ProblemSpec prob = make_problem("cvxqp");
  SolverConstants consts;
  std::mt19937 rng(5);
  Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  const Params p = zero_params(prob, 1e-2);

  const MeritValue inside = eval_M(z, p, prob, consts);
  CHECK(inside.domain_ok);
  CHECK(std::isfinite(inside.value));

  SUBCASE("x outside the box") {
    z.x(0) = prob.x_upper(0) + 0.5;
    const MeritValue out = eval_M(z, p, prob, consts);
    CHECK_FALSE(out.domain_ok);
    CHECK(std::isinf(out.value));
    CHECK_THROWS_AS(eval_grad_M(z, p, prob, consts), std::domain_error);
  }
  SUBCASE("negative bound multiplier") {
    z.mu_l(0) = -1.0;
    const MeritValue out = eval_M(z, p, prob, consts);
    CHECK_FALSE(out.domain_ok);
    CHECK(std::isinf(out.value));
  }
}

TEST_CASE("merit rejects funnel-infeasible trial points") {
  const ProblemSpec prob = make_problem("overdet");
  SolverConstants consts;  // funnel active, epsilon = 0.1
  std::mt19937 rng(9);
  Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  const Params p = zero_params(prob, 1e-2);
  REQUIRE(eval_M(z, p, prob, consts).domain_ok);

  // Push x until some |c_i| >= epsilon while staying inside the box.
  Iterate far = z;
  for (int k = 0; k < 200; ++k) {
    if (inf_norm(prob.eval_c(far.x)) >= consts.epsilon) break;
    far.x = 0.9 * far.x + 0.1 * prob.x_upper - Vector::Constant(prob.n, 1e-3);
  }
  if (inf_norm(prob.eval_c(far.x)) >= consts.epsilon) {
    const MeritValue out = eval_M(far, p, prob, consts);
    CHECK_FALSE(out.domain_ok);
    CHECK(std::isinf(out.value));

    SolverConstants no_funnel = consts;
    no_funnel.tau_tilde = 0.0;
    CHECK(eval_M(far, p, prob, no_funnel).domain_ok);
  }
}

TEST_CASE("merit gradient matches finite differences") {
  SolverConstants consts;
  for (const char* name : {"cvxqp", "overdet", "rosenbrock-eq"}) {
    CAPTURE(name);
    const ProblemSpec prob = make_problem(name);
    std::mt19937 rng(23);
    const Iterate z = sample_admissible(prob, consts, 1e-2, rng);
    Params p{1e-2, Vector::Zero(prob.m)};
    p.lambda_hat.setConstant(0.1);

    const int n = prob.n, m = prob.m;
    auto M_of = [&](const Vector& s) {
      return eval_M(Iterate::from_stacked(s, n, m), p, prob, consts).value;
    };
    Vector h(3 * n + m);
    const Vector s0 = z.stacked();
    for (int i = 0; i < n; ++i) {
      const double room =
          std::min(z.x(i) - prob.x_lower(i), prob.x_upper(i) - z.x(i));
      h(i) = std::min(1e-4, 0.05 * room);
    }
    for (int i = 0; i < m; ++i) h(n + i) = 1e-4;
    for (int i = 0; i < 2 * n; ++i)
      h(n + m + i) = std::min(1e-4, 0.05 * s0(n + m + i));

    const Vector fd = fd_grad5(M_of, s0, h);
    CHECK(rel_err(eval_grad_M(z, p, prob, consts), fd) < 1e-6);
  }
}

TEST_CASE("dM/dmu_l reproduces the closed form of the comp-block terms") {
  // M's mu_l dependence is (nu/2)||mu_l d_l - tau||^2-type weighting plus
  // the dual block coupling; differentiate numerically one coordinate and
  // compare against the analytic gradient entry to pin the layout (x,
  // lambda, mu_l, mu_r) of eval_grad_M.
  const ProblemSpec prob = make_problem("cvxqp");
  SolverConstants consts;
  std::mt19937 rng(31);
  const Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  const Params p = zero_params(prob, 1e-2);

  const Vector g = eval_grad_M(z, p, prob, consts);
  REQUIRE(g.size() == 3 * prob.n + prob.m);

  const int i = prob.n + prob.m;  // first mu_l coordinate
  auto M_of_mu = [&](double v) {
    Iterate zz = z;
    zz.mu_l(0) = v;
    return eval_M(zz, p, prob, consts).value;
  };
  // Step relative to mu itself: the log(u) terms blow up as mu -> 0, so an
  // absolute step would land outside the region where the FD is accurate.
  const Vector h1 = Vector::Constant(1, 1e-5 * z.mu_l(0));
  const Vector fd = fd_grad5(
      [&](const Vector& v) { return M_of_mu(v(0)); },
      Vector::Constant(1, z.mu_l(0)), h1);
  CHECK(g(i) == doctest::Approx(fd(0)).epsilon(1e-6));
}

TEST_CASE("directional_derivative is the inner product with grad_M") {
  const ProblemSpec prob = make_problem("lprand");
  SolverConstants consts;
  std::mt19937 rng(41);
  const Iterate z = sample_admissible(prob, consts, 1e-2, rng);
  const Params p = zero_params(prob, 1e-2);

  Vector dz = Vector::LinSpaced(3 * prob.n + prob.m, -1.0, 1.0);
  const Vector g = eval_grad_M(z, p, prob, consts);
  CHECK(directional_derivative(z, p, prob, consts, dz) ==
        doctest::Approx(g.dot(dz)).epsilon(1e-12));
}

TEST_CASE("merit is stationary exactly at a root of F") {
  // Construct an exact root on overdet (m > n): pick central mu, then
  // solve the dual block for y = lambda_hat + lambda and split y via the
  // primal block. At a root grad_M = 0: roots of F are exactly the
  // stationary points the line search targets.
  const ProblemSpec prob = make_problem("overdet");
  SolverConstants consts;
  consts.tau_tilde = 0.0;  // keep the construction linear in the duals
  std::mt19937 rng(57);
  Iterate z = sample_admissible(prob, consts, 1e-3, rng);
  const double tau = 1e-3;

  z.mu_l = tau / (z.x - prob.x_lower).array();
  z.mu_r = tau / (prob.x_upper - z.x).array();

  // r_dual = g - J (lambda_hat + lambda) = 0 and
  // r_primal = c + omega lambda_hat + (omega + omega_tilde) lambda = 0:
  // two linear systems in (lambda_hat, lambda). Solve the dual block in the
  // least-squares sense for y = lambda_hat + lambda (consistent because J
  // has full column rank... here m > n so J' y = g has solutions), then
  // split y so the primal block closes.
  const Matrix J = prob.eval_jac_c(z.x);  // n x m, m > n
  const Vector g = prob.eval_grad_f(z.x) + consts.rho * prob.S * z.x -
                   z.mu_l + z.mu_r;
  // Minimum-norm solution of J y = g (J is n x m, full row rank).
  const Vector y = J.transpose() * (J * J.transpose()).llt().solve(g);
  const Vector c = prob.eval_c(z.x);
  // lambda = -(c + omega y) / omega_tilde, lambda_hat = y - lambda.
  z.lambda = -(c + consts.omega * y) / consts.omega_tilde;
  Params p{tau, (y - z.lambda).eval()};

  const ResidualBlocks r = eval_F(z, p, prob, consts);
  REQUIRE(r.inf_norm() < 1e-10);

  const MeritValue m0 = eval_M(z, p, prob, consts);
  CHECK(m0.domain_ok);
  CHECK(std::isfinite(m0.value));
  CHECK(inf_norm(eval_grad_M(z, p, prob, consts)) < 1e-9);

  // And perturbing any block never decreases M beyond rounding noise in
  // the (large) merit value: the root is a one-sided-flat minimum along
  // every coordinate.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::abs(m0.value);
  for (int i : {0, prob.n, prob.n + prob.m, 2 * prob.n + prob.m}) {
    Vector s = z.stacked();
    s(i) += 1e-5;
    const Iterate zp = Iterate::from_stacked(s, prob.n, prob.m);
    CHECK(eval_M(zp, p, prob, consts).value >= m0.value - noise);
  }
}
