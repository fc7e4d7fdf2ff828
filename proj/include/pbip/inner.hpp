#pragma once

#include "pbip/saddle.hpp"

namespace pbip {

using InnerTrace = std::vector<TraceEvent>;

struct InnerResult {
  Iterate z;
  InnerTrace trace;
};

/// Globalized quasi-Newton root finding on F(., p): inertia-corrected
/// steps, fraction-to-the-boundary clipping, Armijo backtracking on M.
/// Returns z with ||F(z,p)||_inf <= consts.tol. Throws
/// SolverStop(iteration_cap) past max_inner and
/// SolverStop(line_search_failure) past max_backtracks.
InnerResult inner_solve(const Iterate& z0, const Params& p,
                        const ProblemSpec& prob, const SolverConstants& consts,
                        SolveContext* ctx = nullptr);

}  // namespace pbip
