#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pbip/fdcheck.hpp"
#include "pbip/problem.hpp"

using namespace pbip;

TEST_CASE("registry lists every problem and round-trips by name") {
  const auto names = problem_names();
  CHECK(names.size() == 6);
  for (const auto& name : names) {
    const ProblemSpec p = make_problem(name);
    CHECK(p.name == name);
    CHECK(p.n > 0);
    CHECK(p.x_lower.size() == p.n);
    CHECK(p.x_upper.size() == p.n);
    CHECK(p.x0.size() == p.n);
    CHECK(p.S.rows() == p.n);
    CHECK_NOTHROW(p.validate());
    // The default start must be strictly interior.
    for (int i = 0; i < p.n; ++i) {
      CHECK(p.x0(i) > p.x_lower(i));
      CHECK(p.x0(i) < p.x_upper(i));
    }
  }
}

TEST_CASE("unknown registry name throws RegistryError") {
  CHECK_THROWS_AS(make_problem("no-such-problem"), RegistryError);
  CHECK_THROWS_AS(make_problem(""), RegistryError);
}

TEST_CASE("cubic1d evaluates to hand values") {
  const ProblemSpec p = make_problem("cubic1d");
  REQUIRE(p.n == 1);
  REQUIRE(p.m == 1);
  Vector x(1);
  x << 0.5;
  // f(x) = x^3 + 0.1 x, c identically zero.
  CHECK(p.eval_f(x) == doctest::Approx(0.175));
  CHECK(p.eval_grad_f(x)(0) == doctest::Approx(0.85));
  CHECK(p.eval_hess_lagrangian(x, Vector::Zero(1))(0, 0) ==
        doctest::Approx(3.0));
  CHECK(p.eval_c(x)(0) == 0.0);
}

TEST_CASE("lp2 is the pinned two-variable LP") {
  const ProblemSpec p = make_problem("lp2");
  REQUIRE(p.n == 2);
  REQUIRE(p.m == 1);
  CHECK(p.is_linear);
  Vector x(2);
  x << 0.3, 0.4;
  CHECK(p.eval_f(x) == doctest::Approx(0.3));
  CHECK(p.eval_c(x)(0) == doctest::Approx(0.5 * 0.3 - 0.4));
  const Matrix j = p.eval_jac_c(x);
  CHECK(j(0, 0) == doctest::Approx(0.5));
  CHECK(j(1, 0) == doctest::Approx(-1.0));
  CHECK(p.x_lower.isApprox(Vector::Zero(2)));
  CHECK(p.x_upper.isApprox(Vector::Ones(2)));
}

TEST_CASE("every registry instance passes its own derivative check") {
  SolverConstants consts;
  for (const auto& name : problem_names()) {
    CAPTURE(name);
    const ProblemSpec p = make_problem(name);
    const DerivReport rep = check_derivatives(p, consts, 42u, 3);
    CHECK(rep.pass());
  }
}

TEST_CASE("validate_initial_point") {
  const ProblemSpec p = make_problem("cvxqp");
  SolverConstants consts;

  SUBCASE("accepts the registry default") {
    CHECK_NOTHROW(validate_initial_point(p, consts, p.x0));
  }
  SUBCASE("rejects a point on the boundary") {
    Vector x = p.x0;
    x(0) = p.x_lower(0);
    CHECK_THROWS_AS(validate_initial_point(p, consts, x), DomainError);
  }
  SUBCASE("rejects a point outside the box") {
    Vector x = p.x0;
    x(0) = p.x_upper(0) + 1.0;
    CHECK_THROWS_AS(validate_initial_point(p, consts, x), DomainError);
  }
  SUBCASE("rejects a funnel-infeasible point, accepts it with funnel off") {
    // Find an interior point with ||c||_inf >= epsilon by scaling away
    // from the (feasible) default start.
    Vector x = p.x0;
    double cn = 0.0;
    for (int k = 0; k < 50 && cn < consts.epsilon; ++k) {
      x = p.x_lower + 0.98 * (x - p.x_lower) +
          0.02 * (p.x_upper - p.x_lower) * (k % 2 ? 0.9 : 0.1);
      cn = inf_norm(p.eval_c(x));
    }
    if (cn >= consts.epsilon) {
      CHECK_THROWS_AS(validate_initial_point(p, consts, x), FunnelError);
      SolverConstants no_funnel = consts;
      no_funnel.tau_tilde = 0.0;
      CHECK_NOTHROW(validate_initial_point(p, no_funnel, x));
    }
  }
}

TEST_CASE("ProblemSpec::validate rejects bad data") {
  ProblemSpec p = make_problem("cvxqp");
  SUBCASE("crossed bounds") {
    p.x_lower(0) = p.x_upper(0) + 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("indefinite scaling matrix") {
    p.S(0, 0) = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}

TEST_CASE("SolverConstants validation and key-value assignment") {
  SolverConstants c;
  CHECK_NOTHROW(c.validate());

  SUBCASE("set parses known keys") {
    CHECK(c.set("tol", "1e-6"));
    CHECK(c.tol == doctest::Approx(1e-6));
    CHECK(c.set("max_inner", "17"));
    CHECK(c.max_inner == 17);
    CHECK(c.set("tau_tilde", "0"));
    CHECK(c.tau_tilde == 0.0);
  }
  SUBCASE("set rejects unknown keys") { CHECK_FALSE(c.set("no_such_key", "1")); }
  SUBCASE("set throws on garbage values") {
    CHECK_THROWS_AS(c.set("tol", "abc"), std::invalid_argument);
  }
  SUBCASE("validate rejects omega_tilde <= omega") {
    c.omega_tilde = c.omega;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("validate rejects sigma outside (0,1)") {
    c.sigma = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("Iterate stacking round-trip") {
  const ProblemSpec p = make_problem("cvxqp");
  Iterate z;
  z.x = p.x0;
  z.lambda = Vector::Constant(p.m, 0.25);
  z.mu_l = Vector::Constant(p.n, 1.5);
  z.mu_r = Vector::Constant(p.n, 2.5);
  const Vector s = z.stacked();
  REQUIRE(s.size() == 3 * p.n + p.m);
  const Iterate back = Iterate::from_stacked(s, p.n, p.m);
  CHECK(back.x.isApprox(z.x));
  CHECK(back.lambda.isApprox(z.lambda));
  CHECK(back.mu_l.isApprox(z.mu_l));
  CHECK(back.mu_r.isApprox(z.mu_r));
}
