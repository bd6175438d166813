// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gdsm/core.hpp"
#include "gdsm/diagnostics.hpp"
#include "gdsm/io.hpp"
#include "gdsm/library.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/qp.hpp"
#include "gdsm/surrogate.hpp"

namespace gdsm {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitMaxIter = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitSubsolver = 4;

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text,
                                             const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(item, &pos));
      while (pos < item.size() &&
             std::isspace(static_cast<unsigned char>(item[pos]))) {
        ++pos;
      }
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse " + what + " entry '" + item + "'");
    }
  }
  if (values.empty()) throw ConfigError(what + " must not be empty");
  return values;
}

inline std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt_compact(v(i));
  }
  return s + "]";
}

inline int exit_code_for(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return kExitOk;
    case StopReason::MaxIterations: return kExitMaxIter;
    default: return kExitSubsolver;
  }
}

inline int command_run(const RunConfig& cfg) {
  const RunOutcome out = execute_run(cfg);
  const RunResult& r = out.result;
  std::cout << "problem: " << out.instance.id << "\n"
            << "algorithm: " << out.algorithm << "\n"
            << "stop: " << to_string(r.stop_reason) << " after "
            << r.iterations << " steps\n"
            << "final x: " << format_vector(r.final_x) << "\n"
            << "phi: " << fmt_compact(r.classification.evidence.phi)
            << "  theta: " << fmt_compact(r.classification.evidence.theta)
            << "  d_norm: " << fmt_compact(r.classification.evidence.d_norm)
            << "  kkt_residual: "
            << fmt_compact(r.classification.evidence.kkt_residual) << "\n"
            << "classification: " << to_string(r.classification.kind) << "\n";
  if (!r.error_message.empty()) {
    std::cerr << "error (subsolver): " << r.error_message << "\n";
  }
  return exit_code_for(r.stop_reason);
}

inline int command_check(const std::string& problem_spec, int samples,
                         unsigned seed) {
  const LibraryInstance inst = resolve_problem(problem_spec);
  bool ok = true;
  auto report = [&ok](bool pass, const std::string& what) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << what << "\n";
    ok = ok && pass;
  };

  report(certify_nonempty(inst.problem.K), "feasible-set nonemptiness");
  if (inst.problem.p() > 0) {
    const bool indep = equality_rows_independent(inst.problem);
    std::cout << (indep ? "[PASS] " : "[WARN] ")
              << "equality rows linearly independent\n";
  }
  const GradientCheckReport grad =
      check_gradients(inst.problem, samples, seed);
  report(grad.passed,
         "gradient callbacks match finite differences (max relative error " +
             fmt_compact(std::max(grad.max_rel_error_f, grad.max_rel_error_g)) +
             ")");
  const SurrogateModel model = make_default_model(inst.problem);
  const SurrogateConsistencyReport sur =
      check_surrogate_consistency(inst.problem, model, samples, seed);
  report(sur.passed, "default surrogate model consistency");
  for (const Vector& x : inst.facts.known_kkt_points) {
    const double phi = phi_infeasibility(inst.problem, x);
    report(phi <= 1e-8, "known point " + format_vector(x) +
                            " is feasible (phi = " + fmt_compact(phi) + ")");
  }
  std::cout << (ok ? "check passed" : "check failed") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

inline int command_batch(const std::string& dir,
                         const std::string& summary_out) {
  const BatchSummary summary = run_batch(dir, summary_out);
  std::cout << batch_summary_header() << "\n";
  for (const BatchRow& row : summary.rows) {
    std::cout << row.id << ',' << row.stop_reason << ',' << row.iterations
              << ',' << fmt_double(row.final_phi) << ','
              << fmt_double(row.final_theta) << ',' << fmt_double(row.final_kkt)
              << ',' << row.classification << "\n";
  }
  std::cout << "batch: " << summary.succeeded << " succeeded, "
            << summary.failed << " failed (summary: " << summary_out << ")\n";
  return summary.failed > 0 ? kExitMaxIter : kExitOk;
}

}  // namespace detail

// Entry point of the ghost-dsm tool; returns the process exit code.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "ghost-dsm: diminishing-stepsize methods for constrained composite "
      "optimization"};
  app.set_version_flag("--version", "ghost-dsm 0.1.0");
  app.require_subcommand(1);

  // ---- run ----
  CLI::App* run = app.add_subcommand(
      "run", "Run a solver on a catalog instance or problem JSON file");
  std::string problem, algorithm = "general", x0_text = "center";
  std::string trace_out, report_out;
  double gamma0 = -1, gamma_exponent = -1, beta = -1, rho = -1, lambda = -1;
  double tol_d = -1, tol_theta = -1, tol_feas = -1;
  int max_iter = -1;
  std::string ghost_eps_text;
  unsigned seed = 0;
  bool trace_timing = false;
  run->add_option("--problem", problem,
                  "Catalog id (T1..T4, RAND-QP(seed,n,m)) or JSON path")
      ->required();
  run->add_option("--algorithm", algorithm, "general | convex")
      ->check(CLI::IsMember({"general", "convex"}));
  run->add_option("--x0", x0_text,
                  "Comma-separated start point, or 'center' / 'random'");
  run->add_option("--gamma0", gamma0, "Initial stepsize");
  run->add_option("--gamma-exponent", gamma_exponent,
                  "Stepsize decay exponent in (0.5, 1]");
  run->add_option("--beta", beta, "Direction trust-region radius");
  run->add_option("--rho", rho, "Inner-relaxation trust-region radius");
  run->add_option("--lambda", lambda, "Relaxation mixing weight in (0, 1]");
  run->add_option("--tol-d", tol_d, "Termination tolerance on |d|_inf");
  run->add_option("--tol-theta", tol_theta,
                  "Termination tolerance on the relaxation gap");
  run->add_option("--tol-feas", tol_feas,
                  "Feasibility threshold for classification");
  run->add_option("--max-iter", max_iter, "Iteration cap");
  run->add_option("--ghost-eps", ghost_eps_text,
                  "Comma-separated ghost-penalty eps grid");
  run->add_option("--trace-out", trace_out, "Write the per-iteration CSV here");
  run->add_option("--report-out", report_out, "Write the run report JSON here");
  run->add_option("--seed", seed, "Seed for --x0 random");
  run->add_flag("--trace-timing", trace_timing,
                "Emit real per-iteration times in the trace CSV (makes the "
                "file non-reproducible)");

  // ---- check ----
  CLI::App* check = app.add_subcommand(
      "check", "Validate a problem: set nonemptiness, gradients, surrogate");
  std::string check_problem;
  int check_samples = 25;
  unsigned check_seed = 0;
  check->add_option("--problem", check_problem, "Catalog id or JSON path")
      ->required();
  check->add_option("--samples", check_samples, "Sample count for the checks");
  check->add_option("--seed", check_seed, "Sampling seed");

  // ---- batch ----
  CLI::App* batch = app.add_subcommand(
      "batch", "Run every run-config *.json in a directory");
  std::string batch_dir, summary_out;
  batch->add_option("dir", batch_dir, "Directory of run configs")->required();
  batch->add_option("--summary-out", summary_out,
                    "Summary CSV path (default: <dir>/batch_summary.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg;
      cfg.problem = problem;
      cfg.algorithm = algorithm;
      if (x0_text == "center" || x0_text == "random") {
        cfg.x0_mode = x0_text;
      } else {
        cfg.x0 = detail::parse_double_list(x0_text, "--x0");
      }
      cfg.seed = seed;
      if (gamma0 >= 0) cfg.gamma0 = gamma0;
      if (gamma_exponent >= 0) cfg.gamma_exponent = gamma_exponent;
      if (beta >= 0) cfg.beta = beta;
      if (rho >= 0) cfg.rho = rho;
      if (lambda >= 0) cfg.lambda = lambda;
      if (tol_d >= 0) cfg.tol_d = tol_d;
      if (tol_theta >= 0) cfg.tol_theta = tol_theta;
      if (tol_feas >= 0) cfg.tol_feas = tol_feas;
      if (max_iter >= 0) cfg.max_iter = max_iter;
      if (!ghost_eps_text.empty()) {
        cfg.ghost_eps = detail::parse_double_list(ghost_eps_text,
                                                  "--ghost-eps");
      }
      cfg.trace_out = trace_out;
      cfg.report_out = report_out;
      cfg.trace_timing = trace_timing;
      return detail::command_run(cfg);
    }
    if (check->parsed()) {
      return detail::command_check(check_problem, check_samples, check_seed);
    }
    if (batch->parsed()) {
      if (summary_out.empty()) {
        summary_out =
            (std::filesystem::path(batch_dir) / "batch_summary.csv").string();
      }
      return detail::command_batch(batch_dir, summary_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "error (precondition): " << e.what() << "\n";
    return kExitConfig;
  } catch (const SubsolverError& e) {
    std::cerr << "error (subsolver): " << e.what() << "\n";
    return kExitSubsolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSubsolver;
  }
  return kExitConfig;
}

}  // namespace gdsm
