#include "pbip/inner.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pbip/merit.hpp"

namespace pbip {

namespace {

Iterate advance(const Iterate& z, const Vector& dz, double alpha, int n, int m) {
  Iterate t;
  t.x = z.x + alpha * dz.segment(0, n);
  t.lambda = z.lambda + alpha * dz.segment(n, m);
  t.mu_l = z.mu_l + alpha * dz.segment(n + m, n);
  t.mu_r = z.mu_r + alpha * dz.segment(2 * n + m, n);
  return t;
}

}  // namespace

InnerResult inner_solve(const Iterate& z0, const Params& p,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        SolveContext* ctx) {
  const int n = prob.n, m = prob.m;
  InnerResult res;
  res.z = z0;

  double warm = ctx ? std::max(consts.rho, ctx->rho_tilde_warm * 0.5) : 0.0;
  Counters local_counters;
  Counters* counters = ctx ? &ctx->counters : &local_counters;

  for (int iter = 0;; ++iter) {
    const ResidualBlocks F_val = eval_F(res.z, p, prob, consts);
    const double f_norm = F_val.inf_norm();
    if (f_norm <= consts.tol) break;

    if (iter >= consts.max_inner) {
      std::ostringstream os;
      os << "inner iteration cap " << consts.max_inner
         << " reached, ||F||_inf = " << f_norm;
      throw SolverStop(SolveStatus::iteration_cap, os.str());
    }

    const JacobianParts parts = eval_DF(res.z, p, prob, consts);
    StepResult step = solve_step(res.z, p, F_val, parts, consts, warm, counters);
    double g = directional_derivative(res.z, p, prob, consts, step.dz);
    // The inertia-corrected step is a descent direction in exact
    // arithmetic; keep growing the shift if roundoff says otherwise.
    while (g >= 0.0) {
      step = solve_step(res.z, p, F_val, parts, consts,
                        step.rho_tilde_used * consts.rho_tilde_growth, counters);
      step.inertia_shifts += 1;
      g = directional_derivative(res.z, p, prob, consts, step.dz);
      if (step.rho_tilde_used > 1e39 && g >= 0.0) {
        throw SolverStop(SolveStatus::line_search_failure,
                         "no descent direction despite maximal inertia shift");
      }
    }
    warm = step.inertia_shifts > 0 ? step.rho_tilde_used : 0.0;
    if (ctx) ctx->rho_tilde_warm = warm;

    const double alpha_box = max_step_to_boundary(res.z, step.dz, prob, consts);
    const double alpha0 = std::min(1.0, consts.theta * alpha_box);

    const MeritValue m0 = eval_M(res.z, p, prob, consts);
    double alpha = alpha0;
    int backtracks = 0;
    Iterate trial;
    MeritValue mt;
    for (;;) {
      trial = advance(res.z, step.dz, alpha, n, m);
      mt = eval_M(trial, p, prob, consts);
      // The noise allowance keeps the test meaningful when the predicted
      // decrease c*alpha*g is below the rounding error of M itself (short
      // dual-space steps near the central path).
      const double noise =
          10.0 * std::numeric_limits<double>::epsilon() * std::abs(m0.value);
      if (mt.value <= m0.value + consts.armijo_c * alpha * g + noise) break;
      ++backtracks;
      if (backtracks > consts.max_backtracks) {
        std::ostringstream os;
        os << "line search failed after " << backtracks
           << " backtracks (grad_M'dz = " << g << ", ||F||_inf = " << f_norm
           << ")";
        throw SolverStop(SolveStatus::line_search_failure, os.str());
      }
      alpha *= consts.backtrack;
    }

    res.z = trial;
    ++counters->inner_steps;

    TraceEvent ev;
    ev.level = TraceEvent::Level::inner;
    ev.outermost_iter = ctx ? ctx->outermost_iter : 0;
    ev.outer_iter = ctx ? ctx->outer_iter : 0;
    ev.inner_iter = iter;
    ev.tau = p.tau;
    ev.f_norm = f_norm;
    ev.f_norm_after = eval_F(res.z, p, prob, consts).inf_norm();
    ev.merit = m0.value;
    ev.merit_after = mt.value;
    ev.alpha = alpha;
    ev.alpha_box = alpha_box;
    ev.dir_deriv = g;
    ev.rho_tilde = step.rho_tilde_used;
    ev.backtracks = backtracks;
    ev.inertia_shifts = step.inertia_shifts;
    ev.lambda_norm = inf_norm(res.z.lambda);
    ev.c_norm = inf_norm(prob.eval_c(res.z.x));
    res.trace.push_back(ev);
    if (ctx && ctx->trace) ctx->trace->events.push_back(ev);
  }
  return res;
}

}  // namespace pbip
