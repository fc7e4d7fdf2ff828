#include "pbip/outer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pbip/merit.hpp"

namespace pbip {

namespace {

// Residual of the auxiliary optimality system at z_t, with gradient data
// g0 and constraint data J, d frozen at the incumbent point.
ResidualBlocks aux_residual(const Iterate& z_t, const Vector& g0,
                            const Matrix& J, const Vector& d,
                            const ProblemSpec& prob,
                            const SolverConstants& consts, double tau) {
  ResidualBlocks r;
  r.r_dual = consts.rho * (prob.S * z_t.x) + g0 - J * z_t.lambda - z_t.mu_l +
             z_t.mu_r;
  r.r_primal = J.transpose() * z_t.x - d +
               (consts.omega + consts.omega_tilde) * z_t.lambda;
  r.r_comp_l =
      (z_t.mu_l.array() * (z_t.x - prob.x_lower).array() - tau).matrix();
  r.r_comp_r =
      (z_t.mu_r.array() * (prob.x_upper - z_t.x).array() - tau).matrix();
  return r;
}

// Refines an inner-converged iterate with clipped full Newton steps on F.
// The auxiliary QP of malm_step has curvature only ~(rho + tau/d^2) in the
// directions orthogonal to range(J), so a residual of order tol at z shifts
// the auxiliary solution by tol/(rho + tau/d^2); driving the residual to the
// rounding floor first keeps the trial residuals proportional to alpha.
Iterate polish(Iterate z, const Params& p, const ProblemSpec& prob,
               const SolverConstants& consts, Counters* counters) {
  ResidualBlocks F_val = eval_F(z, p, prob, consts);
  double best = F_val.inf_norm();
  // No absolute floor: the quadratic tail bottoms out at the rounding
  // plateau, where the improvement guard below stops the loop. Components
  // of grad(phi) divide the residual by the distance to active bounds, so
  // every decade of residual gained here matters for the certificate.
  for (int k = 0; k < 10 && best > 0.0; ++k) {
    Iterate trial;
    ResidualBlocks F_trial;
    try {
      const JacobianParts parts = eval_DF(z, p, prob, consts);
      const StepResult step =
          solve_step(z, p, F_val, parts, consts, 0.0, counters);
      const double alpha = std::min(
          1.0, consts.theta * max_step_to_boundary(z, step.dz, prob, consts));
      trial = z;
      trial.x += alpha * step.dz.segment(0, prob.n);
      trial.lambda += alpha * step.dz.segment(prob.n, prob.m);
      trial.mu_l += alpha * step.dz.segment(prob.n + prob.m, prob.n);
      trial.mu_r += alpha * step.dz.segment(2 * prob.n + prob.m, prob.n);
      F_trial = eval_F(trial, p, prob, consts);
    } catch (const std::exception&) {
      break;  // keep the last good iterate
    }
    const double fn = F_trial.inf_norm();
    if (fn >= 0.9 * best) break;
    z = std::move(trial);
    F_val = std::move(F_trial);
    best = fn;
  }
  return z;
}

}  // namespace

Iterate solve_auxiliary(const Iterate& z, const Params& p_alpha,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        const Vector* lambda_init, SolveContext* ctx) {
  const int n = prob.n, m = prob.m;
  const Matrix J = prob.eval_jac_c(z.x);
  const Vector g0 = prob.eval_grad_f(z.x) - J * p_alpha.lambda_hat;
  const Vector d = J.transpose() * z.x - prob.eval_c(z.x) -
                   consts.omega * p_alpha.lambda_hat;
  const double aux_tol = 0.1 * consts.tol;

  Iterate z_t = z;
  if (lambda_init) z_t.lambda = *lambda_init;

  Counters local_counters;
  Counters* counters = ctx ? &ctx->counters : &local_counters;

  // The system is the barrier-KKT of a strictly convex QP: the condensed
  // matrix is positive definite for every interior z_t, so the damped
  // Newton iteration needs no inertia handling.
  JacobianParts parts;
  parts.H = Matrix::Zero(n, n);
  parts.jac_c = J;
  parts.S = prob.S;
  parts.rho = consts.rho;
  parts.omega = consts.omega;
  parts.omega_tilde = consts.omega_tilde;

  // Once the residual target is met, further Newton steps run the quadratic
  // tail down to the rounding floor. The flat directions of the QP have
  // curvature only ~(rho + tau/d^2) and the lambda block divides by
  // (omega+omega_tilde), so the solution error is the exit residual amplified
  // by up to 1e8; only the rounding plateau itself is good enough. Keep
  // stepping while each step still halves the residual.
  Iterate best = z_t;
  double best_norm = std::numeric_limits<double>::infinity();
  double prev_norm = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= 100; ++iter) {
    const ResidualBlocks r = aux_residual(z_t, g0, J, d, prob, consts,
                                          p_alpha.tau);
    const double rn = r.inf_norm();
    if (rn < best_norm) {
      best = z_t;
      best_norm = rn;
    }
    if (best_norm <= aux_tol && (rn == 0.0 || rn > 0.5 * prev_norm))
      return best;
    prev_norm = rn;
    if (iter == 100) break;

    parts.d_l = z_t.x - prob.x_lower;
    parts.d_r = prob.x_upper - z_t.x;
    parts.mu_l = z_t.mu_l;
    parts.mu_r = z_t.mu_r;
    const StepResult step =
        solve_step(z_t, p_alpha, r, parts, consts, 0.0, counters);

    const double alpha_box = max_step_to_boundary(z_t, step.dz, prob, consts);
    const double alpha = std::min(1.0, consts.theta * alpha_box);
    z_t.x += alpha * step.dz.segment(0, n);
    z_t.lambda += alpha * step.dz.segment(n, m);
    z_t.mu_l += alpha * step.dz.segment(n + m, n);
    z_t.mu_r += alpha * step.dz.segment(2 * n + m, n);
    ++counters->aux_newton_steps;
  }
  throw std::runtime_error("auxiliary system solve stalled after 100 steps");
}

MalmResult malm_step(const Iterate& z, const Params& p,
                     const ProblemSpec& prob, const SolverConstants& consts,
                     SolveContext* ctx) {
  const double f_norm_pre = [&] {
    try {
      return eval_F(z, p, prob, consts).inf_norm();
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }();

  for (double alpha = 1.0;; alpha *= 0.5) {
    if (alpha < 1e-8) {
      std::ostringstream os;
      os << "multiplier step size underflow (alpha < 1e-8, ||lambda||_inf = "
         << inf_norm(z.lambda) << ")";
      throw SolverStop(SolveStatus::outer_stall, os.str());
    }

    Params p_alpha{p.tau, p.lambda_hat + alpha * z.lambda};
    const Vector lambda_guess = (1.0 - alpha) * z.lambda;
    Iterate z_trial;
    double f_norm_trial;
    try {
      z_trial = solve_auxiliary(z, p_alpha, prob, consts, &lambda_guess, ctx);
      f_norm_trial = eval_F(z_trial, p_alpha, prob, consts).inf_norm();
    } catch (const std::domain_error&) {
      continue;  // trial left the funnel or the interior
    } catch (const std::runtime_error& e) {
      if (dynamic_cast<const SolverStop*>(&e)) throw;
      continue;  // auxiliary Newton stalled at this alpha
    }
    if (f_norm_trial <= consts.chi * consts.tol) {
      if (ctx) {
        ++ctx->counters.outer_steps;
        if (ctx->trace) {
          TraceEvent ev;
          ev.level = TraceEvent::Level::outer;
          ev.outermost_iter = ctx->outermost_iter;
          ev.outer_iter = ctx->outer_iter;
          ev.tau = p.tau;
          ev.f_norm = f_norm_pre;
          ev.f_norm_after = f_norm_trial;
          ev.alpha = alpha;
          ev.lambda_norm = inf_norm(z_trial.lambda);
          ev.c_norm = inf_norm(prob.eval_c(z_trial.x));
          ctx->trace->events.push_back(ev);
        }
      }
      return {std::move(z_trial), std::move(p_alpha), alpha};
    }
  }
}

OuterResult outer_solve(const Iterate& z0, const Params& p0,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        bool lp_mode, SolveContext* ctx) {
  OuterResult r{z0, p0};

  Counters local_counters;
  Counters* counters = ctx ? &ctx->counters : &local_counters;

  if (!lp_mode) {
    // Recenter for the current parameters before touching lambda_hat.
    r.z = inner_solve(r.z, r.p, prob, consts, ctx).z;
    r.z = polish(r.z, r.p, prob, consts, counters);
  }

  for (int it = 0;; ++it) {
    const bool need_step =
        inf_norm(r.z.lambda) > consts.tol || (lp_mode && it == 0);
    if (!need_step) break;
    if (it >= consts.max_outer) {
      std::ostringstream os;
      os << "outer iteration cap " << consts.max_outer
         << " reached, ||lambda||_inf = " << inf_norm(r.z.lambda);
      throw SolverStop(SolveStatus::iteration_cap, os.str());
    }
    if (ctx) ctx->outer_iter = it;

    MalmResult step = malm_step(r.z, r.p, prob, consts, ctx);
    r.z = std::move(step.z);
    r.p = std::move(step.p);
    r.z = inner_solve(r.z, r.p, prob, consts, ctx).z;
    if (!lp_mode) r.z = polish(r.z, r.p, prob, consts, counters);
  }
  return r;
}

}  // namespace pbip
