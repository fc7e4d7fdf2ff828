#include "pbip/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbip/driver.hpp"
#include "pbip/fdcheck.hpp"
#include "pbip/residual.hpp"

namespace pbip {

namespace {

using nlohmann::json;

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

const char* level_name(TraceEvent::Level lvl) {
  switch (lvl) {
    case TraceEvent::Level::inner:
      return "inner";
    case TraceEvent::Level::outer:
      return "outer";
    default:
      return "outermost";
  }
}

json event_to_json(const TraceEvent& e) {
  return json{{"level", level_name(e.level)},
              {"outermost_iter", e.outermost_iter},
              {"outer_iter", e.outer_iter},
              {"inner_iter", e.inner_iter},
              {"tau", e.tau},
              {"f_norm", e.f_norm},
              {"f_norm_after", e.f_norm_after},
              {"merit", e.merit},
              {"merit_after", e.merit_after},
              {"alpha", e.alpha},
              {"alpha_box", e.alpha_box},
              {"dir_deriv", e.dir_deriv},
              {"rho_tilde", e.rho_tilde},
              {"backtracks", e.backtracks},
              {"inertia_shifts", e.inertia_shifts},
              {"lambda_norm", e.lambda_norm},
              {"c_norm", e.c_norm}};
}

json report_to_json(const SolveReport& rep) {
  return json{{"status", to_string(rep.status)},
              {"message", rep.message},
              {"certificate_ok", rep.certificate_ok},
              {"objective", rep.objective},
              {"tau", rep.tau},
              {"f_norm", rep.f_norm},
              {"lambda_norm", rep.lambda_norm},
              {"grad_phi_norm", rep.grad_phi_norm},
              {"c_norm", rep.c_norm},
              {"grad_f_norm", rep.grad_f_norm},
              {"x", vec_to_json(rep.x)},
              {"lambda", vec_to_json(rep.lambda)},
              {"lambda_hat", vec_to_json(rep.lambda_hat)},
              {"mu_l", vec_to_json(rep.mu_l)},
              {"mu_r", vec_to_json(rep.mu_r)},
              {"counters",
               {{"inner_steps", rep.counters.inner_steps},
                {"outer_steps", rep.counters.outer_steps},
                {"outermost_steps", rep.counters.outermost_steps},
                {"factorizations", rep.counters.factorizations},
                {"inertia_shifts", rep.counters.inertia_shifts},
                {"aux_newton_steps", rep.counters.aux_newton_steps}}}};
}

// Applies "key=value" to consts. Returns false (after printing a
// diagnostic) on unknown keys or unparsable values.
bool apply_kv(SolverConstants& consts, const std::string& kv,
              const std::string& origin) {
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  const auto eq = kv.find('=');
  const std::string key = eq == std::string::npos ? "" : trim(kv.substr(0, eq));
  const std::string value =
      eq == std::string::npos ? "" : trim(kv.substr(eq + 1));
  if (key.empty()) {
    std::cerr << origin << ": expected key=value, got '" << kv << "'\n";
    return false;
  }
  try {
    if (!consts.set(key, value)) {
      std::cerr << origin << ": unknown constant '" << key << "'\n";
      return false;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << origin << ": " << e.what() << "\n";
    return false;
  }
  return true;
}

bool load_config(SolverConstants& consts, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open config file '" << path << "'\n";
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    if (!apply_kv(consts, line.substr(first, last - first + 1),
                  path + ":" + std::to_string(lineno)))
      return false;
  }
  return true;
}

bool parse_x0(const std::string& s, Vector& out) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      vals.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  out = Eigen::Map<const Vector>(vals.data(), static_cast<long>(vals.size()));
  return out.size() > 0;
}

int run_solve(const std::string& problem_name, const std::string& x0_str,
              const std::string& config_path,
              const std::vector<std::string>& sets, bool lp_mode,
              const std::string& trace_path, const std::string& report_path) {
  ProblemSpec prob;
  try {
    prob = make_problem(problem_name);
  } catch (const RegistryError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  SolverConstants consts;
  if (!config_path.empty() && !load_config(consts, config_path)) return 2;
  for (const auto& kv : sets)
    if (!apply_kv(consts, kv, "--set")) return 2;
  try {
    consts.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid constants: " << e.what() << "\n";
    return 2;
  }

  Vector x0 = prob.x0;
  if (!x0_str.empty()) {
    if (!parse_x0(x0_str, x0)) {
      std::cerr << "--x0: expected a comma-separated list of numbers\n";
      return 2;
    }
    if (x0.size() != prob.n) {
      std::cerr << "--x0: expected " << prob.n << " components, got "
                << x0.size() << "\n";
      return 2;
    }
    try {
      validate_initial_point(prob, consts, x0);
    } catch (const std::exception& e) {
      std::cerr << "--x0: " << e.what() << "\n";
      return 2;
    }
  }

  Trace trace;
  SolveReport rep;
  try {
    rep = solve(prob, consts, x0, lp_mode, &trace);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    return 1;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) {
      std::cerr << "cannot open trace file '" << trace_path << "'\n";
      return 2;
    }
    for (const auto& e : trace.events) out << event_to_json(e) << "\n";
  }
  const json rep_json = report_to_json(rep);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot open report file '" << report_path << "'\n";
      return 2;
    }
    out << rep_json.dump(2) << "\n";
  }

  std::cout << problem_name << ": " << to_string(rep.status)
            << "  objective=" << rep.objective << "  ||F||=" << rep.f_norm
            << "  ||lambda||=" << rep.lambda_norm
            << "  certificate=" << (rep.certificate_ok ? "ok" : "n/a") << "\n";
  if (!rep.message.empty()) std::cout << "  " << rep.message << "\n";
  return rep.status == SolveStatus::converged ? 0 : 1;
}

int run_check(const std::string& problem_name,
              const std::string& config_path,
              const std::vector<std::string>& sets, unsigned seed,
              int points) {
  ProblemSpec prob;
  try {
    prob = make_problem(problem_name);
  } catch (const RegistryError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  SolverConstants consts;
  if (!config_path.empty() && !load_config(consts, config_path)) return 2;
  for (const auto& kv : sets)
    if (!apply_kv(consts, kv, "--set")) return 2;

  const DerivReport rep = check_derivatives(prob, consts, seed, points);
  std::cout << problem_name << " derivative check (" << points
            << " points, seed " << seed << "):\n"
            << "  grad_f    " << rep.err_grad_f << "\n"
            << "  jac_c     " << rep.err_jac_c << "\n"
            << "  hess      " << rep.err_hess << "\n"
            << "  DF        " << rep.err_df << "\n"
            << "  grad_M    " << rep.err_grad_m << "\n"
            << "  grad_phi  " << rep.err_grad_phi << "\n"
            << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Penalty-barrier interior-point solver"};
  app.require_subcommand(1);

  std::string problem_name, x0_str, config_path, trace_path, report_path;
  std::vector<std::string> sets;
  bool lp_mode = false;
  unsigned seed = 0;
  int points = 20;

  auto* solve_cmd = app.add_subcommand("solve", "Run the full solver");
  solve_cmd->add_option("--problem", problem_name, "Registry problem name")
      ->required();
  solve_cmd->add_option("--x0", x0_str,
                        "Comma-separated initial point (default: built-in)");
  solve_cmd->add_option("--config", config_path,
                        "key=value config file, applied before --set");
  solve_cmd->add_option("--set", sets, "Override a constant, key=value");
  solve_cmd->add_flag("--lp-mode", lp_mode,
                      "Long-step barrier schedule (linear problems only)");
  solve_cmd->add_option("--trace", trace_path, "Write JSONL trace here");
  solve_cmd->add_option("--report", report_path, "Write JSON report here");

  auto* check_cmd = app.add_subcommand("check-derivatives",
                                       "Run the finite-difference suites");
  check_cmd->add_option("--problem", problem_name, "Registry problem name")
      ->required();
  check_cmd->add_option("--config", config_path,
                        "key=value config file, applied before --set");
  check_cmd->add_option("--set", sets, "Override a constant, key=value");
  check_cmd->add_option("--seed", seed, "Sampling seed");
  check_cmd->add_option("--points", points, "Number of sample points")
      ->check(CLI::PositiveNumber);

  auto* list_cmd =
      app.add_subcommand("list-problems", "List registry problem names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_cmd->parsed()) {
    for (const auto& name : problem_names()) std::cout << name << "\n";
    return 0;
  }
  if (check_cmd->parsed())
    return run_check(problem_name, config_path, sets, seed, points);
  return run_solve(problem_name, x0_str, config_path, sets, lp_mode,
                   trace_path, report_path);
}

}  // namespace pbip
