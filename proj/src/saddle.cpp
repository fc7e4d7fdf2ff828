#include "pbip/saddle.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <sstream>

namespace pbip {

CondensedSystem condense(const JacobianParts& parts, double rho_tilde) {
  if (!((parts.d_l.array() > 0).all() && (parts.d_r.array() > 0).all() &&
        (parts.mu_l.array() > 0).all() && (parts.mu_r.array() > 0).all()))
    throw DomainError("condense: nonpositive diagonal, iterate not interior");

  CondensedSystem cs;
  cs.jac_c = parts.jac_c;
  cs.d_l = parts.d_l;
  cs.d_r = parts.d_r;
  cs.mu_l = parts.mu_l;
  cs.mu_r = parts.mu_r;
  cs.om_sum = parts.omega + parts.omega_tilde;

  cs.K = parts.H + rho_tilde * parts.S;
  cs.K += Matrix((parts.mu_l.array() / parts.d_l.array()).matrix().asDiagonal());
  cs.K += Matrix((parts.mu_r.array() / parts.d_r.array()).matrix().asDiagonal());
  cs.K += parts.jac_c * parts.jac_c.transpose() / cs.om_sum;
  return cs;
}

Vector condensed_rhs(const CondensedSystem& cs, const ResidualBlocks& F_val) {
  return -F_val.r_dual - cs.jac_c * F_val.r_primal / cs.om_sum -
         (F_val.r_comp_l.array() / cs.d_l.array()).matrix() +
         (F_val.r_comp_r.array() / cs.d_r.array()).matrix();
}

Vector recover_full_step(const CondensedSystem& cs, const ResidualBlocks& F_val,
                         const Vector& dx) {
  const Vector dlambda =
      -(cs.jac_c.transpose() * dx + F_val.r_primal) / cs.om_sum;
  const Vector dmu_l =
      -((F_val.r_comp_l.array() + cs.mu_l.array() * dx.array()) /
        cs.d_l.array())
           .matrix();
  const Vector dmu_r =
      ((cs.mu_r.array() * dx.array() - F_val.r_comp_r.array()) /
       cs.d_r.array())
          .matrix();

  Vector dz(dx.size() + dlambda.size() + dmu_l.size() + dmu_r.size());
  dz << dx, dlambda, dmu_l, dmu_r;
  return dz;
}

StepResult solve_step(const Iterate& /*z*/, const Params& /*p*/,
                      const ResidualBlocks& F_val, const JacobianParts& parts,
                      const SolverConstants& consts, double rho_tilde_start,
                      Counters* counters) {
  const double h_norm = parts.H.size() > 0
                            ? parts.H.cwiseAbs().maxCoeff()
                            : 0.0;
  double rho_t = std::max(consts.rho, rho_tilde_start);
  int shifts = 0;
  Eigen::LLT<Matrix> llt;
  CondensedSystem cs;

  for (;;) {
    cs = condense(parts, rho_t);
    bool ok = cs.K.allFinite();
    if (ok) {
      llt.compute(cs.K);
      if (counters) ++counters->factorizations;
      ok = llt.info() == Eigen::Success;
    }
    if (ok) break;

    ++shifts;
    if (counters) ++counters->inertia_shifts;
    if (shifts == 1) {
      const double base =
          std::max({consts.rho, 1e-8 * h_norm, 1e-20});
      rho_t = std::max(base, rho_t * consts.rho_tilde_growth);
    } else {
      rho_t *= consts.rho_tilde_growth;
    }
    if (rho_t > 1e40) {
      std::ostringstream os;
      os << "inertia correction failed: rho_tilde exceeded 1e40 (||H||_inf = "
         << h_norm << ")";
      throw SolverStop(SolveStatus::conditioning_error, os.str());
    }
  }

  StepResult res;
  const Vector dx = llt.solve(condensed_rhs(cs, F_val));
  res.dz = recover_full_step(cs, F_val, dx);
  res.rho_tilde_used = rho_t;
  res.inertia_shifts = shifts;
  res.newton_residual =
      inf_norm(assemble_dense(parts, rho_t) * res.dz + F_val.stacked());
  return res;
}

double max_step_to_boundary(const Iterate& z, const Vector& dz,
                            const ProblemSpec& prob,
                            const SolverConstants& /*consts*/) {
  const int n = prob.n, m = prob.m;
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double dx = dz(i);
    if (dx > 0) a = std::min(a, (prob.x_upper(i) - z.x(i)) / dx);
    else if (dx < 0) a = std::min(a, (prob.x_lower(i) - z.x(i)) / dx);
    const double dml = dz(n + m + i);
    if (dml < 0) a = std::min(a, -z.mu_l(i) / dml);
    const double dmr = dz(2 * n + m + i);
    if (dmr < 0) a = std::min(a, -z.mu_r(i) / dmr);
  }
  return a;
}

}  // namespace pbip
