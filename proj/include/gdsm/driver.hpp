// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/diagnostics.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/qp.hpp"
#include "gdsm/subproblems.hpp"
#include "gdsm/surrogate.hpp"

namespace gdsm {

// --------------------------------------------------------------------------
// Diminishing stepsize schedule: gamma(nu) = gamma0 / (nu + 1)^p.
// --------------------------------------------------------------------------
struct StepsizeSchedule {
  double gamma0 = 1.0;
  double exponent = 0.7;

  void validate() const {
    if (!(std::isfinite(gamma0) && gamma0 > 0.0)) {
      throw ConfigError("stepsize: gamma0 must be finite > 0");
    }
    if (!(exponent > 0.5 && exponent <= 1.0)) {
      throw ConfigError("stepsize: exponent must lie in (0.5, 1]");
    }
  }

  double gamma(int nu) const {
    if (nu < 0) throw PreconditionError("stepsize: nu must be >= 0");
    return gamma0 / std::pow(static_cast<double>(nu) + 1.0, exponent);
  }

  // Lower bound on the partial sum  sum_{nu < N} gamma(nu), by the integral
  // comparison: >= gamma0 ((N + 1)^(1-p) - 1) / (1 - p)   (log form at p = 1).
  double partial_sum_lower_bound(int N) const {
    if (N < 0) throw PreconditionError("stepsize: N must be >= 0");
    const double np1 = static_cast<double>(N) + 1.0;
    if (exponent == 1.0) return gamma0 * std::log(np1);
    return gamma0 * (std::pow(np1, 1.0 - exponent) - 1.0) / (1.0 - exponent);
  }
};

// --------------------------------------------------------------------------
// Run records.
// --------------------------------------------------------------------------
struct IterationRecord {
  int nu = 0;
  Vector x;
  double gamma = 0.0;    // stepsize that applies to the step taken from x
  double d_norm = 0.0;   // infinity norm of the direction at x
  double phi = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double kkt_residual = 0.0;
  std::vector<std::pair<double, double>> ghost_values;  // (eps, W(x; eps))
  std::int64_t wall_time_ns = 0;  // time spent computing this iteration
};

enum class StopReason { Converged, MaxIterations, SubsolverFailure };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxIterations: return "MaxIterations";
    default: return "SubsolverFailure";
  }
}

struct RunResult {
  Vector final_x;
  StationarityLabel classification;
  int iterations = 0;  // number of update steps taken
  std::vector<IterationRecord> trace;
  StopReason stop_reason = StopReason::Converged;
  std::string error_message;
  std::int64_t total_wall_ns = 0;
};

using TraceSink = std::function<void(const IterationRecord&)>;

namespace detail {

inline std::int64_t ns_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Euclidean projection onto K (optionally intersected with {Az = -b}).
inline Vector project_onto_set(const PolyhedralSet& set, const Vector& x0,
                               const Matrix* A = nullptr,
                               const Vector* b = nullptr) {
  const int n = set.dim();
  ConicQP qp;
  qp.Q = Matrix::Identity(n, n);
  qp.c = Vector(-x0);
  const int rows = count_set_rows(set);
  qp.G = Matrix::Zero(rows, n);
  qp.u = Vector::Zero(rows);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(set.upper(i))) {
      qp.G(row, i) = 1.0;
      qp.u(row) = set.upper(i);
      ++row;
    }
    if (std::isfinite(set.lower(i))) {
      qp.G(row, i) = -1.0;
      qp.u(row) = -set.lower(i);
      ++row;
    }
  }
  for (int k = 0; k < set.num_halfspaces(); ++k) {
    qp.G.block(row, 0, 1, n) = set.C.row(k);
    qp.u(row) = set.u(k);
    ++row;
  }
  if (A != nullptr && A->rows() > 0) {
    qp.E = *A;
    qp.e = Vector(-*b);
  }
  const QPSolution sol = solve_qp(qp, kSubsolveTol, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) {
    throw ConfigError(
        "starting-point projection failed: the feasible region appears "
        "empty or degenerate (" +
        std::string(to_string(sol.status)) + ")");
  }
  return sol.z;
}

// Reports whether K is bounded, checking the box first and falling back to
// coordinate-wise LPs for coordinates the box leaves open.
inline bool set_is_bounded(const PolyhedralSet& set) {
  if (set.box_is_bounded()) return true;
  const int n = set.dim();
  const int rows = count_set_rows(set);
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      if (sign > 0 && std::isfinite(set.upper(i))) continue;
      if (sign < 0 && std::isfinite(set.lower(i))) continue;
      ConicQP lp;
      lp.Q = Matrix::Zero(n, n);
      lp.c = Vector::Zero(n);
      lp.c(i) = -sign;  // maximize sign * z_i
      lp.G = Matrix::Zero(rows, n);
      lp.u = Vector::Zero(rows);
      int row = 0;
      for (int j = 0; j < n; ++j) {
        if (std::isfinite(set.upper(j))) {
          lp.G(row, j) = 1.0;
          lp.u(row) = set.upper(j);
          ++row;
        }
        if (std::isfinite(set.lower(j))) {
          lp.G(row, j) = -1.0;
          lp.u(row) = -set.lower(j);
          ++row;
        }
      }
      for (int k = 0; k < set.num_halfspaces(); ++k) {
        lp.G.block(row, 0, 1, n) = set.C.row(k);
        lp.u(row) = set.u(k);
        ++row;
      }
      const QPSolution sol = solve_qp(lp, 1e-9, kSubsolveIters);
      if (sol.status == SolveStatus::Unbounded) return false;
      if (sol.status != SolveStatus::Optimal) return false;  // conservative
    }
  }
  return true;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Algorithm runner (general path).
// --------------------------------------------------------------------------
// Iterates x <- x + gamma(nu) d with d from the relaxed direction subproblem,
// recording one trace row per evaluated point (including the terminal one).
// Stops when |d|_inf <= tol_d and theta <= tol_theta, at the iteration cap,
// or on a subproblem failure.
inline RunResult run_algorithm1(const ProblemSpec& problem,
                                const SurrogateModel& model, const Vector& x0,
                                const AlgoParams& params,
                                const TraceSink& sink = nullptr) {
  problem.validate();
  params.validate();
  detail::require_quadratic_linear(model);
  if (x0.size() != problem.n) {
    throw ConfigError("starting point has wrong dimension");
  }
  if (!x0.allFinite()) throw ConfigError("starting point must be finite");

  const auto run_start = std::chrono::steady_clock::now();
  StepsizeSchedule schedule{params.gamma0, params.gamma_exponent};
  schedule.validate();

  RunResult result;
  Vector x = x0;
  if (!problem.K.contains(x, kSetMembershipTol)) {
    log(LogLevel::Warn,
        "starting point lies outside the set; projecting onto it");
    x = detail::project_onto_set(problem.K, x);
  }

  ClassificationThresholds tols;
  tols.tol_feas = params.tol_feas;
  tols.tol_theta = params.tol_theta;
  tols.tol_d = params.tol_d;

  for (int nu = 0;; ++nu) {
    const auto iter_start = std::chrono::steady_clock::now();
    RelaxationReport rel;
    DirectionResult dir;
    double res = 0.0;
    try {
      rel = compute_kappa(problem, x, params);
      dir = solve_direction_general(problem, model, x, rel.kappa, params);
      res = kkt_residual(problem, x, dir.xi, dir.pi);
    } catch (const SubsolverError& err) {
      result.stop_reason = StopReason::SubsolverFailure;
      result.error_message = err.what();
      result.iterations = nu;
      break;
    }

    IterationRecord rec;
    rec.nu = nu;
    rec.x = x;
    rec.gamma = schedule.gamma(nu);
    rec.d_norm = dir.d.lpNorm<Eigen::Infinity>();
    rec.phi = rel.phi;
    rec.kappa = rel.kappa;
    rec.theta = rel.theta;
    rec.kkt_residual = res;
    rec.ghost_values =
        ghost_penalty_samples(problem, x, params.ghost_eps_grid);
    rec.wall_time_ns = detail::ns_since(iter_start);
    result.trace.push_back(rec);
    if (sink) sink(rec);

    StationarityEvidence ev;
    ev.phi = rel.phi;
    ev.theta = rel.theta;
    ev.d_norm = rec.d_norm;
    ev.kkt_residual = res;
    ev.multiplier_norm = dir.multiplier_norm();

    if (rec.d_norm <= params.tol_d && rel.theta <= params.tol_theta) {
      result.stop_reason = StopReason::Converged;
      result.iterations = nu;
      result.classification.evidence = ev;
      result.classification.kind = classify_evidence(ev, tols);
      break;
    }
    if (nu == params.max_iter) {
      result.stop_reason = StopReason::MaxIterations;
      result.iterations = nu;
      result.classification.evidence = ev;
      result.classification.kind = classify_evidence(ev, tols);
      break;
    }
    x += rec.gamma * dir.d;
  }

  result.final_x = x;
  result.total_wall_ns = detail::ns_since(run_start);
  return result;
}

// --------------------------------------------------------------------------
// Algorithm runner (convex path).
// --------------------------------------------------------------------------
// Requires convex inequality constraints and a bounded set. The relaxation
// is not used: directions solve the fully constrained linearized subproblem
// (kappa = 0); the trace reports kappa = 0 and theta = phi accordingly. The
// starting point is projected onto K intersected with the equality
// hyperplanes, so equalities hold along the whole run. Stops when
// |d|_inf <= tol_d and phi <= tol_feas.
inline RunResult run_algorithm2(const ProblemSpec& problem,
                                const SurrogateModel& model, const Vector& x0,
                                const AlgoParams& params,
                                const TraceSink& sink = nullptr) {
  problem.validate();
  params.validate();
  detail::require_quadratic_linear(model);
  if (x0.size() != problem.n) {
    throw ConfigError("starting point has wrong dimension");
  }
  if (!x0.allFinite()) throw ConfigError("starting point must be finite");
  if (!problem.g_convex_flag) {
    throw ConfigError(
        "the convex-case algorithm requires convex inequality constraints");
  }
  if (!detail::set_is_bounded(problem.K)) {
    throw ConfigError(
        "the convex-case algorithm requires a bounded polyhedral set");
  }

  const auto run_start = std::chrono::steady_clock::now();
  StepsizeSchedule schedule{params.gamma0, params.gamma_exponent};
  schedule.validate();

  const int p = problem.p();
  Eigen::CompleteOrthogonalDecomposition<Matrix> eq_cod;
  if (p > 0) eq_cod.compute(problem.eq_A);

  RunResult result;
  Vector x = x0;
  {
    const bool in_set = problem.K.contains(x, kSetMembershipTol);
    const bool eq_ok =
        p == 0 ||
        (problem.eq_A * x + problem.eq_b).lpNorm<Eigen::Infinity>() <= 1e-12;
    if (!in_set || !eq_ok) {
      if (!in_set) {
        log(LogLevel::Warn,
            "starting point lies outside the set; projecting onto it");
      }
      x = detail::project_onto_set(problem.K, x,
                                   p > 0 ? &problem.eq_A : nullptr,
                                   p > 0 ? &problem.eq_b : nullptr);
      // Polish the equality residual down to machine precision; the
      // correction is of the order of the subsolver tolerance and keeps the
      // point inside the set for every practical purpose.
      for (int pass = 0; pass < 2 && p > 0; ++pass) {
        x -= eq_cod.solve(Vector(problem.eq_A * x + problem.eq_b));
      }
    }
  }

  ClassificationThresholds tols;
  tols.tol_feas = params.tol_feas;
  tols.tol_theta = params.tol_theta;
  tols.tol_d = params.tol_d;

  for (int nu = 0;; ++nu) {
    const auto iter_start = std::chrono::steady_clock::now();
    const double phi = phi_infeasibility(problem, x);
    DirectionResult dir;
    double res = 0.0;
    try {
      dir = solve_direction_convex(problem, model, x, params);
      if (p > 0) {
        // Remove the residual equality error of the subproblem solution so
        // x + d satisfies the equalities to machine precision.
        dir.d -= eq_cod.solve(
            Vector(problem.eq_A * Vector(x + dir.d) + problem.eq_b));
      }
      res = kkt_residual(problem, x, dir.xi, dir.pi);
    } catch (const SubsolverError& err) {
      result.stop_reason = StopReason::SubsolverFailure;
      result.error_message = err.what();
      result.iterations = nu;
      break;
    }

    IterationRecord rec;
    rec.nu = nu;
    rec.x = x;
    rec.gamma = schedule.gamma(nu);
    rec.d_norm = dir.d.lpNorm<Eigen::Infinity>();
    rec.phi = phi;
    rec.kappa = 0.0;
    rec.theta = phi;
    rec.kkt_residual = res;
    rec.ghost_values =
        ghost_penalty_samples(problem, x, params.ghost_eps_grid);
    rec.wall_time_ns = detail::ns_since(iter_start);
    result.trace.push_back(rec);
    if (sink) sink(rec);

    StationarityEvidence ev;
    ev.phi = phi;
    ev.theta = phi;
    ev.d_norm = rec.d_norm;
    ev.kkt_residual = res;
    ev.multiplier_norm = dir.multiplier_norm();

    if (rec.d_norm <= params.tol_d && phi <= params.tol_feas) {
      result.stop_reason = StopReason::Converged;
      result.iterations = nu;
      result.classification.evidence = ev;
      result.classification.kind = classify_evidence(ev, tols);
      break;
    }
    if (nu == params.max_iter) {
      result.stop_reason = StopReason::MaxIterations;
      result.iterations = nu;
      result.classification.evidence = ev;
      result.classification.kind = classify_evidence(ev, tols);
      break;
    }
    x += rec.gamma * dir.d;
  }

  result.final_x = x;
  result.total_wall_ns = detail::ns_since(run_start);
  return result;
}

}  // namespace gdsm
