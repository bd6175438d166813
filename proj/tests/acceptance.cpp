// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Acceptance suite: ten numbered end-to-end criteria, each printing a single
// [PASS]/[FAIL] line (with indented witness details on failure). Run with a
// criterion number 1..10 as the only argument, or no argument for all.
// The exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gdsm/gdsm.hpp"
#include "oracles.hpp"

namespace {

using gdsm::AlgoParams;
using gdsm::ConicQP;
using gdsm::DirectionResult;
using gdsm::LibraryInstance;
using gdsm::Matrix;
using gdsm::QPSolution;
using gdsm::RelaxationReport;
using gdsm::RunResult;
using gdsm::StationarityKind;
using gdsm::StopReason;
using gdsm::Vector;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    ok = false;
    if (notes.size() < 12) notes.push_back(why);
  }
  void note(const std::string& what) {
    if (notes.size() < 12) notes.push_back(what);
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_point(const Vector& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt(x(i));
  }
  return s + ")";
}

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---------------------------------------------------------------------------
// C1 / C2 share one sample sweep over the catalog.
// ---------------------------------------------------------------------------
void sweep_relaxation(Check& c, bool check_order_bounds,
                      bool check_jacobian_bound) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> ids = {"T1", "T2", "T3", "T4",
                                        "RAND-QP(13,8,5)"};
  std::mt19937_64 rng(0xACCE5501ULL);
  int tested = 0;
  for (const std::string& id : ids) {
    const LibraryInstance inst = gdsm::get_instance(id);
    const AlgoParams params = AlgoParams::defaults_for(inst.problem.K);
    for (int t = 0; t < 200; ++t) {
      const Vector x = gdsm::detail::sample_in_set(inst.problem.K, rng);
      const RelaxationReport rep =
          gdsm::compute_kappa(inst.problem, x, params);
      ++tested;
      if (check_order_bounds) {
        if (rep.inner_min > rep.kappa + 1e-8) {
          c.fail(id + " at " + fmt_point(x) + ": inner_min " +
                 fmt(rep.inner_min) + " > kappa " + fmt(rep.kappa));
        }
        if (rep.kappa > rep.phi + 1e-8) {
          c.fail(id + " at " + fmt_point(x) + ": kappa " + fmt(rep.kappa) +
                 " > phi " + fmt(rep.phi));
        }
        if (rep.theta < -1e-8) {
          c.fail(id + " at " + fmt_point(x) + ": theta " + fmt(rep.theta) +
                 " < 0");
        }
        const double mixing =
            params.lambda * (rep.phi - rep.inner_min);
        if (std::abs(rep.theta - mixing) > 1e-8) {
          c.fail(id + " at " + fmt_point(x) + ": theta " + fmt(rep.theta) +
                 " != lambda*(phi - inner_min) " + fmt(mixing));
        }
      }
      if (check_jacobian_bound) {
        const double bound = gdsm::theta_upper_bound(inst.problem, x, rep);
        if (rep.theta > bound) {
          c.fail(id + " at " + fmt_point(x) + ": theta " + fmt(rep.theta) +
                 " exceeds the jacobian sweep bound " + fmt(bound));
        }
      }
    }
  }
  const double secs = elapsed_s(start);
  if (tested != 1000) c.fail("expected 1000 sampled points");
  if (secs >= 30.0) {
    c.fail("sweep took " + fmt(secs) + " s (budget 30 s)");
  }
}

void criterion1(Check& c) { sweep_relaxation(c, true, false); }
void criterion2(Check& c) { sweep_relaxation(c, false, true); }

// ---------------------------------------------------------------------------
// C3: pinned hand-derived relaxation and direction values on the 1-D
// instance (mixing weight 0.5, inner radius 0.5).
// ---------------------------------------------------------------------------
void criterion3(Check& c) {
  const LibraryInstance t1 = gdsm::get_instance("T1");
  const auto model = gdsm::make_default_model(t1.problem);
  AlgoParams params = AlgoParams::defaults_for(t1.problem.K);
  params.lambda = 0.5;
  params.rho = 0.5;

  const RelaxationReport at0 =
      gdsm::compute_kappa(t1.problem, vec1(0.0), params);
  if (std::abs(at0.kappa - 0.75) > 1e-7) {
    c.fail("kappa(0) = " + fmt(at0.kappa) + ", expected 0.75");
  }
  if (std::abs(at0.theta - 0.25) > 1e-7) {
    c.fail("theta(0) = " + fmt(at0.theta) + ", expected 0.25");
  }

  const RelaxationReport at2 =
      gdsm::compute_kappa(t1.problem, vec1(2.0), params);
  const DirectionResult d2 = gdsm::solve_direction_general(
      t1.problem, model, vec1(2.0), at2.kappa, params);
  if (std::abs(d2.d(0) - (-1.0)) > 1e-7) {
    c.fail("d(2) = " + fmt(d2.d(0)) + ", expected -1");
  }
  if (d2.xi.size() != 1 || std::abs(d2.xi(0) - 3.0) > 1e-7) {
    c.fail("multiplier at x=2 is " +
           (d2.xi.size() == 1 ? fmt(d2.xi(0)) : std::string("missing")) +
           ", expected 3");
  }

  const RelaxationReport at1 =
      gdsm::compute_kappa(t1.problem, vec1(1.0), params);
  const DirectionResult d1 = gdsm::solve_direction_general(
      t1.problem, model, vec1(1.0), at1.kappa, params);
  if (std::abs(d1.d(0)) > 1e-7) {
    c.fail("d(1) = " + fmt(d1.d(0)) + ", expected 0");
  }
}

// ---------------------------------------------------------------------------
// C4: the inner engine against brute-force active-set enumeration.
// ---------------------------------------------------------------------------
double complementarity(const ConicQP& qp, const QPSolution& sol) {
  if (qp.num_ineq() == 0) return 0.0;
  const Vector slack = qp.u - qp.G * sol.z;
  return (sol.lam_ineq.array() * slack.array()).abs().maxCoeff();
}

void criterion4(Check& c) {
  const Matrix E = Matrix::Zero(0, 2);
  const Vector e = Vector::Zero(0);
  int solved = 0;

  // 250 strongly convex QPs with 1..4 random inequality rows (0 feasible).
  std::mt19937_64 rng(0xACCE5504ULL);
  for (int trial = 0; trial < 250; ++trial) {
    Matrix L(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) L(i, j) = oracles::uniform(rng, -1.0, 1.0);
    ConicQP qp;
    qp.Q = L.transpose() * L + Matrix::Identity(2, 2);
    qp.c = vec2(oracles::uniform(rng, -2.0, 2.0),
                oracles::uniform(rng, -2.0, 2.0));
    const int k = 1 + static_cast<int>(rng() % 4);
    qp.G = Matrix(k, 2);
    qp.u = Vector(k);
    for (int i = 0; i < k; ++i) {
      qp.G(i, 0) = oracles::uniform(rng, -1.0, 1.0);
      qp.G(i, 1) = oracles::uniform(rng, -1.0, 1.0);
      qp.u(i) = oracles::uniform(rng, 0.1, 1.5);
    }
    qp.E = E;
    qp.e = e;

    const oracles::EnumerationResult oracle =
        oracles::enumerate_qp(qp.Q, qp.c, qp.G, qp.u, E, e);
    if (!oracle.found) continue;  // should not happen: 0 is feasible
    const QPSolution sol = gdsm::solve_qp(qp);
    ++solved;
    if (sol.status != gdsm::SolveStatus::Optimal) {
      c.fail("QP trial " + std::to_string(trial) + ": status " +
             std::string(gdsm::to_string(sol.status)));
      continue;
    }
    const double val = 0.5 * sol.z.dot(qp.Q * sol.z) + qp.c.dot(sol.z);
    if (std::abs(val - oracle.value) > 1e-8 * (1.0 + std::abs(oracle.value))) {
      c.fail("QP trial " + std::to_string(trial) + ": value " + fmt(val) +
             " vs enumeration " + fmt(oracle.value));
    }
    if (complementarity(qp, sol) > 1e-8) {
      c.fail("QP trial " + std::to_string(trial) + ": complementarity " +
             fmt(complementarity(qp, sol)));
    }
  }

  // 250 bounded LPs: unit box plus 0..2 extra rows.
  std::mt19937_64 lrng(0xACCE5505ULL);
  for (int trial = 0; trial < 250; ++trial) {
    const int extra = static_cast<int>(lrng() % 3);
    ConicQP lp;
    lp.Q = Matrix::Zero(2, 2);
    lp.c = vec2(oracles::uniform(lrng, -1.0, 1.0),
                oracles::uniform(lrng, -1.0, 1.0));
    lp.G = Matrix(4 + extra, 2);
    lp.u = Vector(4 + extra);
    lp.G.topRows(2) = Matrix::Identity(2, 2);
    lp.G.block(2, 0, 2, 2) = -Matrix::Identity(2, 2);
    lp.u.head(4).setOnes();
    for (int i = 0; i < extra; ++i) {
      lp.G(4 + i, 0) = oracles::uniform(lrng, -1.0, 1.0);
      lp.G(4 + i, 1) = oracles::uniform(lrng, -1.0, 1.0);
      lp.u(4 + i) = oracles::uniform(lrng, 0.1, 1.0);
    }
    lp.E = E;
    lp.e = e;

    const oracles::EnumerationResult oracle =
        oracles::enumerate_qp(lp.Q, lp.c, lp.G, lp.u, E, e);
    if (!oracle.found) continue;
    const QPSolution sol = gdsm::solve_qp(lp);
    ++solved;
    if (sol.status != gdsm::SolveStatus::Optimal) {
      c.fail("LP trial " + std::to_string(trial) + ": status " +
             std::string(gdsm::to_string(sol.status)));
      continue;
    }
    const double val = lp.c.dot(sol.z);
    if (std::abs(val - oracle.value) > 1e-8 * (1.0 + std::abs(oracle.value))) {
      c.fail("LP trial " + std::to_string(trial) + ": value " + fmt(val) +
             " vs enumeration " + fmt(oracle.value));
    }
    if (complementarity(lp, sol) > 1e-8) {
      c.fail("LP trial " + std::to_string(trial) + ": complementarity " +
             fmt(complementarity(lp, sol)));
    }
  }

  if (solved < 480) {
    c.fail("only " + std::to_string(solved) +
           " of 500 trials reached the oracle comparison");
  }
}

// ---------------------------------------------------------------------------
// C5: the direction vanishes at the documented stationary points and is
// bounded away from zero at feasible points excluded from their vicinity.
// ---------------------------------------------------------------------------
double t2_stationary_distance(const Vector& x) {
  double best = std::hypot(x(0) - 1.0, x(1));
  best = std::min(best, std::hypot(x(0) + 1.0, x(1)));
  for (double cc : {-0.5, 0.0, 0.5}) {
    const double s = std::sqrt(1.0 - cc * cc);
    double dy = 0.0;
    if (x(1) > 0.0) dy = x(1);
    if (x(1) < -s) dy = -s - x(1);
    best = std::min(best, std::hypot(x(0) - cc, dy));
  }
  return best;
}

void criterion5(Check& c) {
  // Zero direction at every documented stationary point.
  for (const std::string& id : {"T1", "T2", "T4"}) {
    const LibraryInstance inst = gdsm::get_instance(id);
    const auto model = gdsm::make_default_model(inst.problem);
    const AlgoParams params = AlgoParams::defaults_for(inst.problem.K);
    for (const Vector& x : inst.facts.known_kkt_points) {
      const DirectionResult dir =
          gdsm::solve_direction_convex(inst.problem, model, x, params);
      const double norm = dir.d.lpNorm<Eigen::Infinity>();
      if (norm > 1e-7) {
        c.fail(id + " at stationary point " + fmt_point(x) +
               ": |d| = " + fmt(norm) + " > 1e-7");
      }
    }
  }

  // Nonzero direction at 100 feasible points sampled away from the
  // stationary sets (exclusion radius 0.05 / 0.02).
  std::mt19937_64 rng(0xACCE5505ULL);
  double smallest = gdsm::kInf;
  Vector smallest_at;
  std::string smallest_id;
  auto probe = [&](const std::string& id, const gdsm::ProblemSpec& problem,
                   const gdsm::SurrogateModel& model, const AlgoParams& params,
                   const Vector& x) {
    const DirectionResult dir =
        gdsm::solve_direction_convex(problem, model, x, params);
    const double norm = dir.d.lpNorm<Eigen::Infinity>();
    if (norm < smallest) {
      smallest = norm;
      smallest_at = x;
      smallest_id = id;
    }
    if (norm < 1e-4) {
      c.fail(id + " at non-stationary " + fmt_point(x) +
             ": |d| = " + fmt(norm) + " < 1e-4");
    }
  };

  {
    const LibraryInstance t1 = gdsm::get_instance("T1");
    const auto model = gdsm::make_default_model(t1.problem);
    const AlgoParams params = AlgoParams::defaults_for(t1.problem.K);
    for (int t = 0; t < 34; ++t) {
      probe("T1", t1.problem, model, params,
            vec1(oracles::uniform(rng, 1.02, 2.0)));
    }
  }
  {
    const LibraryInstance t2 = gdsm::get_instance("T2");
    const auto model = gdsm::make_default_model(t2.problem);
    const AlgoParams params = AlgoParams::defaults_for(t2.problem.K);
    int accepted = 0;
    while (accepted < 33) {
      const Vector x = vec2(oracles::uniform(rng, -1.0, 1.0),
                            oracles::uniform(rng, -1.0, 1.0));
      if (x.norm() > 0.999) continue;              // keep strictly feasible
      if (t2_stationary_distance(x) < 0.05) continue;
      probe("T2", t2.problem, model, params, x);
      ++accepted;
    }
  }
  {
    const LibraryInstance t4 = gdsm::get_instance("T4");
    const auto model = gdsm::make_default_model(t4.problem);
    const AlgoParams params = AlgoParams::defaults_for(t4.problem.K);
    int accepted = 0;
    while (accepted < 33) {
      const double t = oracles::uniform(rng, 0.0, 1.0);
      if (std::min({t, std::abs(t - 0.5), 1.0 - t}) < 0.02) continue;
      probe("T4", t4.problem, model, params, vec2(t, 1.0 - t));
      ++accepted;
    }
  }
  c.note("smallest non-stationary |d| observed: " + fmt(smallest) + " (" +
         smallest_id + " at " + fmt_point(smallest_at) + ")");
}

// ---------------------------------------------------------------------------
// C6: convex-path end-to-end from random starts.
// ---------------------------------------------------------------------------
void criterion6(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xACC60000ULL);
  int worst_iters = 0;
  double worst_phi = 0.0, worst_res = 0.0;
  for (const std::string& id : {"T1", "T2", "T4"}) {
    const LibraryInstance inst = gdsm::get_instance(id);
    const auto model = gdsm::make_default_model(inst.problem);
    const AlgoParams params = AlgoParams::defaults_for(inst.problem.K);
    for (int t = 0; t < 20; ++t) {
      const Vector x0 = gdsm::detail::sample_in_set(inst.problem.K, rng);
      const RunResult run =
          gdsm::run_algorithm2(inst.problem, model, x0, params);
      const auto& ev = run.classification.evidence;
      worst_iters = std::max(worst_iters, run.iterations);
      worst_phi = std::max(worst_phi, ev.phi);
      worst_res = std::max(worst_res, ev.kkt_residual);
      if (run.stop_reason != StopReason::Converged) {
        c.fail(id + " start " + std::to_string(t) + " " + fmt_point(x0) +
               ": stop " + std::string(gdsm::to_string(run.stop_reason)) +
               " after " + std::to_string(run.iterations) + " iterations");
        continue;
      }
      if (run.iterations > 10000) {
        c.fail(id + " start " + std::to_string(t) + ": " +
               std::to_string(run.iterations) + " iterations > 10000");
      }
      if (ev.phi > 1e-6) {
        c.fail(id + " start " + std::to_string(t) + ": final phi " +
               fmt(ev.phi) + " > 1e-6");
      }
      if (ev.kkt_residual > 1e-4) {
        c.fail(id + " start " + std::to_string(t) + ": final residual " +
               fmt(ev.kkt_residual) + " > 1e-4");
      }
    }
  }
  const double secs = elapsed_s(start);
  if (secs >= 60.0) c.fail("runs took " + fmt(secs) + " s (budget 60 s)");
  c.note("60 runs in " + fmt(secs) + " s; worst iterations " +
         std::to_string(worst_iters) + ", worst phi " + fmt(worst_phi) +
         ", worst residual " + fmt(worst_res));
}

// ---------------------------------------------------------------------------
// C7: convex-path structural invariants.
// ---------------------------------------------------------------------------
void criterion7(Check& c) {
  struct Start {
    std::string id;
    Vector x0;
  };
  const std::vector<Start> starts = {
      {"T4", vec2(1.0, 1.0)},  {"T4", vec2(0.0, 0.0)},
      {"T4", vec2(0.2, 0.9)},  {"T1", vec1(-2.0)},
      {"T1", vec1(0.0)},       {"T1", vec1(0.3)},
      {"T2", vec2(2.0, 2.0)},  {"T2", vec2(1.5, -1.0)},
      {"T2", vec2(-1.2, 0.8)},
  };
  bool contraction_violated = false;
  for (const Start& s : starts) {
    const LibraryInstance inst = gdsm::get_instance(s.id);
    const auto model = gdsm::make_default_model(inst.problem);
    AlgoParams params = AlgoParams::defaults_for(inst.problem.K);
    params.max_iter = 300;
    const RunResult run =
        gdsm::run_algorithm2(inst.problem, model, s.x0, params);
    if (run.stop_reason == StopReason::SubsolverFailure) {
      c.fail(s.id + " from " + fmt_point(s.x0) + ": " + run.error_message);
      continue;
    }

    // Equality rows must be preserved exactly along the whole run.
    if (inst.problem.p() > 0) {
      for (const auto& rec : run.trace) {
        const double viol =
            inst.problem.eval_h(rec.x).lpNorm<Eigen::Infinity>();
        if (viol > 1e-9) {
          c.fail(s.id + " from " + fmt_point(s.x0) + " at step " +
                 std::to_string(rec.nu) + ": equality violation " +
                 fmt(viol));
          break;
        }
      }
    }

    // Per-step contraction of the infeasibility on infeasible-start runs.
    if (!run.trace.empty() && run.trace.front().phi > 0.0) {
      for (std::size_t i = 0; i + 1 < run.trace.size(); ++i) {
        const double bound =
            (1.0 - run.trace[i].gamma) * run.trace[i].phi + 1e-10;
        if (run.trace[i + 1].phi > bound && !contraction_violated) {
          contraction_violated = true;
          c.fail(s.id + " from " + fmt_point(s.x0) + ", step " +
                 std::to_string(run.trace[i].nu) + " -> " +
                 std::to_string(run.trace[i + 1].nu) + ": phi " +
                 fmt(run.trace[i].phi) + " -> " + fmt(run.trace[i + 1].phi) +
                 " exceeds the contraction bound " + fmt(bound));
          c.note("x^nu = " + fmt_point(run.trace[i].x) + ", x^nu+1 = " +
                 fmt_point(run.trace[i + 1].x) + ", gamma = " +
                 fmt(run.trace[i].gamma));
          c.note("known limitation: the direction subproblem enforces only "
                 "the linearized constraints, which under-estimate a "
                 "non-affine convex constraint, so one full step can "
                 "overshoot its violation; see the T2 analysis in the "
                 "project decision log");
        } else if (run.trace[i + 1].phi > bound) {
          c.ok = false;  // count silently after the first witness
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// C8: general path on the nonconvex equality instance.
// ---------------------------------------------------------------------------
void criterion8(Check& c) {
  const LibraryInstance t3 = gdsm::get_instance("T3");
  const auto model = gdsm::make_default_model(t3.problem);
  const AlgoParams params = AlgoParams::defaults_for(t3.problem.K);
  const RunResult run =
      gdsm::run_algorithm1(t3.problem, model, vec2(0.0, 0.0), params);

  double min_theta = gdsm::kInf;
  for (const auto& rec : run.trace) {
    min_theta = std::min(min_theta, rec.theta);
    if (!t3.problem.K.contains(rec.x, 1e-7)) {
      c.fail("iterate " + std::to_string(rec.nu) + " = " + fmt_point(rec.x) +
             " left the set");
      break;
    }
  }
  if (min_theta > 1e-6) {
    c.fail("theta never fell below 1e-6 (min " + fmt(min_theta) + ")");
  }

  const StationarityKind kind = run.classification.kind;
  if (kind != StationarityKind::KKT &&
      kind != StationarityKind::ESCandidate &&
      kind != StationarityKind::FJCandidate) {
    c.fail("terminal classification is " +
           std::string(gdsm::to_string(kind)));
  }
  // The label must be reproducible from its own evidence under the default
  // thresholds.
  if (gdsm::classify_evidence(run.classification.evidence) != kind) {
    c.fail("classification does not match its recorded evidence");
  }
  c.note("stop " + std::string(gdsm::to_string(run.stop_reason)) + " after " +
         std::to_string(run.iterations) + " iterations at " +
         fmt_point(run.final_x) + ", classified " +
         std::string(gdsm::to_string(kind)));
}

// ---------------------------------------------------------------------------
// C9: byte-identical traces on repeated runs.
// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9(Check& c) {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() /
      ("gdsm_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  struct Config {
    std::string id;
    std::string algorithm;
    std::vector<double> x0;
    int max_iter;
  };
  const std::vector<Config> configs = {
      {"T3", "general", {0.0, 0.0}, 40},
      {"T2", "convex", {0.9, -0.9}, 200},
  };
  for (std::size_t k = 0; k < configs.size(); ++k) {
    gdsm::RunConfig cfg;
    cfg.problem = configs[k].id;
    cfg.algorithm = configs[k].algorithm;
    cfg.x0 = configs[k].x0;
    cfg.max_iter = configs[k].max_iter;

    const fs::path a = dir / ("trace_" + std::to_string(k) + "_a.csv");
    const fs::path b = dir / ("trace_" + std::to_string(k) + "_b.csv");
    cfg.trace_out = a.string();
    gdsm::execute_run(cfg);
    cfg.trace_out = b.string();
    gdsm::execute_run(cfg);
    const std::string ta = slurp(a), tb = slurp(b);
    if (ta.empty()) {
      c.fail(configs[k].id + ": empty trace file");
    } else if (ta != tb) {
      c.fail(configs[k].id + " " + configs[k].algorithm +
             ": repeated runs wrote different bytes");
    }
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// C10: a surrogate whose gradient disagrees at d = 0 is rejected, and the
// report names the violated consistency item.
// ---------------------------------------------------------------------------
void criterion10(Check& c) {
  const LibraryInstance t1 = gdsm::get_instance("T1");
  gdsm::SurrogateModel broken = gdsm::make_default_model(t1.problem);
  const auto base = broken.f_tilde_grad;
  broken.f_tilde_grad = [base](const Vector& d, const Vector& x) {
    return Vector(base(d, x) + Vector::Ones(d.size()));
  };
  const gdsm::SurrogateConsistencyReport rep =
      gdsm::check_surrogate_consistency(t1.problem, broken, 25, 7);
  if (rep.passed) {
    c.fail("the inconsistent model was accepted");
    return;
  }
  if (rep.failed_item !=
      gdsm::SurrogateCheckItem::GradientConsistencyAtZero) {
    c.fail("wrong item named: " +
           std::string(gdsm::to_string(rep.failed_item)));
  }
  if (rep.message.find(gdsm::to_string(
          gdsm::SurrogateCheckItem::GradientConsistencyAtZero)) ==
      std::string::npos) {
    c.fail("report message does not name the violated item: " + rep.message);
  }
  if (std::abs(rep.max_gradient_mismatch - 1.0) > 1e-9) {
    c.fail("expected unit gradient mismatch, got " +
           fmt(rep.max_gradient_mismatch));
  }
  c.note("rejected with: " + rep.message);
}

struct Criterion {
  int id;
  const char* description;
  std::function<void(Check&)> run;
};

const std::vector<Criterion>& all_criteria() {
  static const std::vector<Criterion> criteria = {
      {1, "relaxation bounds hold on 1000 sampled set points", criterion1},
      {2, "relaxation gap obeys the jacobian sweep bound on the same sample",
       criterion2},
      {3, "hand-derived relaxation and direction values at pinned points",
       criterion3},
      {4, "inner solver matches active-set enumeration on 500 random "
          "problems",
       criterion4},
      {5, "direction vanishes at stationary points and only there",
       criterion5},
      {6, "convex-path runs converge from 20 random starts per instance",
       criterion6},
      {7, "convex-path invariants: equality preservation and per-step "
          "contraction",
       criterion7},
      {8, "general path reaches classified stationarity on the nonconvex "
          "equality instance",
       criterion8},
      {9, "repeated runs produce byte-identical trace files", criterion9},
      {10, "inconsistent surrogate gradients are rejected with the item "
           "named",
       criterion10},
  };
  return criteria;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1 && std::strcmp(argv[1], "all") != 0) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [1..10|all]\n", argv[0]);
      return 64;
    }
  }

  int failures = 0;
  for (const Criterion& criterion : all_criteria()) {
    if (only != 0 && criterion.id != only) continue;
    Check check;
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.fail(std::string("unexpected exception: ") + e.what());
    }
    std::printf("[%s] C%d: %s\n", check.ok ? "PASS" : "FAIL", criterion.id,
                criterion.description);
    for (const std::string& note : check.notes) {
      std::printf("       - %s\n", note.c_str());
    }
    if (!check.ok) ++failures;
  }
  return failures;
}
