#include "pbip/driver.hpp"

#include <cmath>
#include <sstream>

namespace pbip {

double lp_sigma(int n) { return 1.0 - 0.1 / std::sqrt(2.0 * n); }

Params update_tau(const Params& p, const SolverConstants& consts, int n,
                  bool lp_mode) {
  const double sigma_eff = lp_mode ? lp_sigma(n) : consts.sigma;
  return {std::max(sigma_eff * p.tau, consts.tau_end), p.lambda_hat};
}

std::pair<Iterate, Params> initialize(const ProblemSpec& prob,
                                      const SolverConstants& consts,
                                      const Vector& x0) {
  validate_initial_point(prob, consts, x0);
  const double tau0 = std::max(consts.tau0, consts.tau_end);

  Iterate z;
  z.x = x0;
  z.lambda = Vector::Zero(prob.m);
  z.mu_l = tau0 * (x0 - prob.x_lower).cwiseInverse();
  z.mu_r = tau0 * (prob.x_upper - x0).cwiseInverse();

  Params p;
  p.tau = tau0;
  p.lambda_hat = Vector::Zero(prob.m);
  return {std::move(z), std::move(p)};
}

SolveReport solve(const ProblemSpec& prob, const SolverConstants& consts,
                  const Vector& x0, bool lp_mode, Trace* trace) {
  consts.validate();
  prob.validate();
  if (lp_mode && !prob.is_linear)
    throw std::invalid_argument(
        "lp-mode requires an affine problem (is_linear)");

  auto [z, p] = initialize(prob, consts, x0);

  SolveContext ctx;
  ctx.trace = trace;

  SolveReport rep;
  rep.status = SolveStatus::converged;

  try {
    int outermost = 0;
    while (p.tau > consts.tau_end) {
      if (outermost >= consts.max_outermost) {
        std::ostringstream os;
        os << "outermost iteration cap " << consts.max_outermost
           << " reached at tau = " << p.tau;
        throw SolverStop(SolveStatus::iteration_cap, os.str());
      }
      p = update_tau(p, consts, prob.n, lp_mode);
      ++outermost;
      ctx.outermost_iter = outermost;
      ++ctx.counters.outermost_steps;
      if (trace) {
        TraceEvent ev;
        ev.level = TraceEvent::Level::outermost;
        ev.outermost_iter = outermost;
        ev.tau = p.tau;
        ev.lambda_norm = inf_norm(z.lambda);
        ev.c_norm = inf_norm(prob.eval_c(z.x));
        trace->events.push_back(ev);
      }
      OuterResult r = outer_solve(z, p, prob, consts, lp_mode, &ctx);
      z = std::move(r.z);
      p = std::move(r.p);
    }
    if (ctx.counters.outermost_steps == 0) {
      // tau0 == tau_end: a single pass at the final barrier parameter.
      OuterResult r = outer_solve(z, p, prob, consts, lp_mode, &ctx);
      z = std::move(r.z);
      p = std::move(r.p);
    }

    // Stationarity refinement at the final barrier parameter: grad(phi)
    // carries a (omega_tilde/omega) * J * lambda term, so the certificate
    // needs ||lambda|| well below tol; extra multiplier steps at tau_end
    // drive it there (one accepted alpha = 1 step typically suffices).
    for (int round = 0; round < 5 && prob.m > 0; ++round) {
      const double amp =
          consts.omega_tilde / consts.omega * inf_norm(z.lambda);
      if (amp <= consts.tol || inf_norm(z.lambda) == 0.0) break;
      // Best-effort refinement: the iterate already satisfies the stopping
      // test, so a stalled multiplier step here must not fail the solve.
      try {
        MalmResult step = malm_step(z, p, prob, consts, &ctx);
        z = std::move(step.z);
        p = std::move(step.p);
        OuterResult r = outer_solve(z, p, prob, consts, lp_mode, &ctx);
        z = std::move(r.z);
        p = std::move(r.p);
      } catch (const SolverStop&) {
        break;
      }
    }
  } catch (const SolverStop& e) {
    rep.status = e.status;
    rep.message = e.what();
  }

  rep.x = z.x;
  rep.lambda = z.lambda;
  rep.lambda_hat = p.lambda_hat;
  rep.mu_l = z.mu_l;
  rep.mu_r = z.mu_r;
  rep.tau = p.tau;
  rep.counters = ctx.counters;
  rep.objective = prob.eval_f(z.x);
  rep.c_norm = inf_norm(prob.eval_c(z.x));
  rep.lambda_norm = inf_norm(z.lambda);
  rep.grad_f_norm = inf_norm(prob.eval_grad_f(z.x));
  try {
    rep.f_norm = eval_F(z, p, prob, consts).inf_norm();
    rep.grad_phi_norm = inf_norm(eval_grad_phi_funneled(z.x, prob, consts));
  } catch (const std::domain_error&) {
    rep.f_norm = std::numeric_limits<double>::infinity();
    rep.grad_phi_norm = std::numeric_limits<double>::infinity();
  }

  if (rep.status == SolveStatus::converged) {
    // the three while-guards at exit
    if (!(rep.tau == consts.tau_end && rep.lambda_norm <= consts.tol &&
          rep.f_norm <= consts.tol)) {
      rep.status = SolveStatus::iteration_cap;
      rep.message = "loop exit without satisfied termination conditions";
    } else {
      rep.certificate_ok = rep.grad_phi_norm <=
                           10.0 * consts.tol * (1.0 + rep.grad_f_norm);
    }
  }
  return rep;
}

}  // namespace pbip
