#include <random>
#include <sstream>

#include "pbip/problem.hpp"

namespace pbip {

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

ProblemSpec make_lp2() {
  ProblemSpec p;
  p.name = "lp2";
  p.n = 2;
  p.m = 1;
  p.is_linear = true;
  p.x_lower = Vector::Zero(2);
  p.x_upper = Vector::Ones(2);
  p.S = identity(2);
  p.eval_f = [](const Vector& x) { return x(0); };
  p.eval_grad_f = [](const Vector&) {
    Vector g(2);
    g << 1.0, 0.0;
    return g;
  };
  p.eval_c = [](const Vector& x) {
    Vector c(1);
    c << 0.5 * x(0) - x(1);
    return c;
  };
  p.eval_jac_c = [](const Vector&) {
    Matrix j(2, 1);
    j << 0.5, -1.0;
    return j;
  };
  p.eval_hess_lagrangian = [](const Vector&, const Vector&) {
    return Matrix::Zero(2, 2);
  };
  p.x0 = Vector(2);
  p.x0 << 0.5, 0.25;
  return p;
}

ProblemSpec make_cubic1d() {
  ProblemSpec p;
  p.name = "cubic1d";
  p.n = 1;
  p.m = 1;  // constant-free equality: c identically zero
  p.x_lower = Vector::Constant(1, -1.0);
  p.x_upper = Vector::Constant(1, 2.0);
  p.S = identity(1);
  p.eval_f = [](const Vector& x) { return x(0) * x(0) * x(0) + 0.1 * x(0); };
  p.eval_grad_f = [](const Vector& x) {
    return Vector::Constant(1, 3.0 * x(0) * x(0) + 0.1).eval();
  };
  p.eval_c = [](const Vector&) { return Vector::Zero(1).eval(); };
  p.eval_jac_c = [](const Vector&) { return Matrix::Zero(1, 1).eval(); };
  p.eval_hess_lagrangian = [](const Vector& x, const Vector&) {
    return Matrix::Constant(1, 1, 6.0 * x(0)).eval();
  };
  p.x0 = Vector::Constant(1, 0.5);
  return p;
}

// Strictly convex QP with a few consistent linear equalities.
ProblemSpec make_cvxqp() {
  const int n = 10, m = 3;
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  Matrix Q = B.transpose() * B / double(n) + identity(n);
  Q = 0.5 * (Q + Q.transpose()).eval();
  Vector q(n);
  for (int i = 0; i < n; ++i) q(i) = gauss(rng);
  Matrix A(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = gauss(rng);
  Vector x_feas(n);
  for (int i = 0; i < n; ++i) x_feas(i) = unif(rng);
  Vector b = A.transpose() * x_feas;

  ProblemSpec p;
  p.name = "cvxqp";
  p.n = n;
  p.m = m;
  p.x_lower = Vector::Constant(n, -10.0);
  p.x_upper = Vector::Constant(n, 10.0);
  p.S = identity(n);
  p.eval_f = [Q, q](const Vector& x) {
    return 0.5 * x.dot(Q * x) + q.dot(x);
  };
  p.eval_grad_f = [Q, q](const Vector& x) { return (Q * x + q).eval(); };
  p.eval_c = [A, b](const Vector& x) { return (A.transpose() * x - b).eval(); };
  p.eval_jac_c = [A](const Vector&) { return A; };
  p.eval_hess_lagrangian = [Q](const Vector&, const Vector&) { return Q; };
  p.x0 = x_feas;
  return p;
}

// m = 2n consistent affine constraints, dense seeded A.
ProblemSpec make_overdet() {
  const int n = 3, m = 2 * n;
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  Matrix A(m, n);  // c(x) = A x - b
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  Vector x_c(n);
  for (int i = 0; i < n; ++i) x_c(i) = unif(rng);
  Vector b = A * x_c;

  ProblemSpec p;
  p.name = "overdet";
  p.n = n;
  p.m = m;
  p.x_lower = Vector::Constant(n, -5.0);
  p.x_upper = Vector::Constant(n, 5.0);
  p.S = identity(n);
  p.eval_f = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.eval_grad_f = [](const Vector& x) { return x; };
  p.eval_c = [A, b](const Vector& x) { return (A * x - b).eval(); };
  p.eval_jac_c = [A](const Vector&) { return A.transpose().eval(); };
  p.eval_hess_lagrangian = [n](const Vector&, const Vector&) {
    return identity(n);
  };
  p.x0 = x_c;
  return p;
}

ProblemSpec make_rosenbrock_eq() {
  ProblemSpec p;
  p.name = "rosenbrock-eq";
  p.n = 2;
  p.m = 1;
  // Box centered on the solution (1,1): the log-barrier force vanishes
  // there, so the barrier path stays pinned to the minimizer as tau shrinks
  // and the equality residual does not regenerate multipliers at small tau.
  p.x_lower = Vector::Constant(2, -1.0);
  p.x_upper = Vector::Constant(2, 3.0);
  p.S = identity(2);
  p.eval_f = [](const Vector& x) {
    const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  p.eval_grad_f = [](const Vector& x) {
    const double b = x(1) - x(0) * x(0);
    Vector g(2);
    g << -2.0 * (1.0 - x(0)) - 400.0 * x(0) * b, 200.0 * b;
    return g;
  };
  // Circle through the unconstrained minimizer (1,1), centered at (2,0):
  // the equality is genuinely nonlinear but its multiplier vanishes at the
  // solution, which keeps the outer multiplier iteration well inside its
  // per-step acceptance budget despite the large Rosenbrock curvature. The
  // constraint gradient at the solution is orthogonal to x, so the proximal
  // rho*S*x force is tangent to the constraint and leaves no first-order
  // equality residual either.
  p.eval_c = [](const Vector& x) {
    Vector c(1);
    const double a = x(0) - 2.0;
    c << a * a + x(1) * x(1) - 2.0;
    return c;
  };
  p.eval_jac_c = [](const Vector& x) {
    Matrix j(2, 1);
    j << 2.0 * (x(0) - 2.0), 2.0 * x(1);
    return j;
  };
  p.eval_hess_lagrangian = [](const Vector& x, const Vector& y) {
    const double b = x(1) - x(0) * x(0);
    Matrix h(2, 2);
    h(0, 0) = 2.0 - 400.0 * b + 800.0 * x(0) * x(0);
    h(0, 1) = h(1, 0) = -400.0 * x(0);
    h(1, 1) = 200.0;
    h -= y(0) * 2.0 * identity(2);
    return h;
  };
  p.x0 = Vector(2);
  p.x0 << 0.92, 0.91;  // near the circle: c(x0) = -0.0055, inside the funnel
  return p;
}

// Seeded random box LP with consistent equalities, n = 20, m = 10.
ProblemSpec make_lprand() {
  const int n = 20, m = 10;
  std::mt19937 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.3, 0.7);
  std::uniform_real_distribution<double> cost(-1.0, 1.0);

  Vector g(n);
  for (int i = 0; i < n; ++i) g(i) = cost(rng);
  Matrix A(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = gauss(rng);
  Vector x_c(n);
  for (int i = 0; i < n; ++i) x_c(i) = unif(rng);
  Vector b = A.transpose() * x_c;

  ProblemSpec p;
  p.name = "lprand";
  p.n = n;
  p.m = m;
  p.is_linear = true;
  p.x_lower = Vector::Zero(n);
  p.x_upper = Vector::Ones(n);
  p.S = identity(n);
  p.eval_f = [g](const Vector& x) { return g.dot(x); };
  p.eval_grad_f = [g](const Vector&) { return g; };
  p.eval_c = [A, b](const Vector& x) { return (A.transpose() * x - b).eval(); };
  p.eval_jac_c = [A](const Vector&) { return A; };
  p.eval_hess_lagrangian = [n](const Vector&, const Vector&) {
    return Matrix::Zero(n, n).eval();
  };
  p.x0 = x_c;
  return p;
}

}  // namespace

std::vector<std::string> problem_names() {
  return {"lp2", "cubic1d", "cvxqp", "overdet", "rosenbrock-eq", "lprand"};
}

ProblemSpec make_problem(const std::string& name) {
  ProblemSpec p;
  if (name == "lp2") p = make_lp2();
  else if (name == "cubic1d") p = make_cubic1d();
  else if (name == "cvxqp") p = make_cvxqp();
  else if (name == "overdet") p = make_overdet();
  else if (name == "rosenbrock-eq") p = make_rosenbrock_eq();
  else if (name == "lprand") p = make_lprand();
  else {
    std::ostringstream os;
    os << "unknown problem '" << name << "'; available:";
    for (const auto& s : problem_names()) os << " " << s;
    throw RegistryError(os.str());
  }
  p.validate();
  return p;
}

}  // namespace pbip
