// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/polyhedral_set.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/qp.hpp"
#include "gdsm/surrogate.hpp"

namespace gdsm {

// Tolerances used by the driver-facing subproblem solves.
inline constexpr double kSubsolveTol = 1e-10;
inline constexpr int kSubsolveIters = 200;
inline constexpr double kActiveSlackTol = 1e-8;
inline constexpr double kSetMembershipTol = 1e-7;

// --------------------------------------------------------------------------
// Algorithm parameters.
// --------------------------------------------------------------------------
struct AlgoParams {
  double beta = 10.0;            // direction trust-region radius (general)
  double rho = 1.0;              // inner-relaxation trust-region radius
  double lambda = 0.5;           // relaxation mixing weight in (0, 1]
  double gamma0 = 1.0;           // initial stepsize
  double gamma_exponent = 0.7;   // stepsize decay exponent p in (0.5, 1]
  double tol_d = 1e-7;           // termination: direction infinity-norm
  double tol_theta = 1e-9;       // termination: relaxation gap
  double tol_feas = 1e-6;        // classification: infeasibility threshold
  int max_iter = 10000;
  std::vector<double> ghost_eps_grid = {1.0, 0.1, 0.01};

  static AlgoParams defaults_for(const PolyhedralSet& set) {
    AlgoParams p;
    p.beta = 10.0 * (1.0 + set.diameter_inf_estimate());
    p.rho = std::min(1.0, p.beta / 2.0);
    return p;
  }

  void validate() const {
    auto positive_finite = [](double v) {
      return std::isfinite(v) && v > 0.0;
    };
    if (!positive_finite(beta)) throw ConfigError("beta must be finite > 0");
    if (!positive_finite(rho)) throw ConfigError("rho must be finite > 0");
    if (rho > beta) throw ConfigError("rho must not exceed beta");
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw ConfigError("lambda must lie in (0, 1]");
    }
    if (!positive_finite(gamma0)) {
      throw ConfigError("gamma0 must be finite > 0");
    }
    if (!(gamma_exponent > 0.5 && gamma_exponent <= 1.0)) {
      throw ConfigError("gamma exponent must lie in (0.5, 1]");
    }
    if (!positive_finite(tol_d) || !positive_finite(tol_theta) ||
        !positive_finite(tol_feas)) {
      throw ConfigError("tolerances must be finite > 0");
    }
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    for (double eps : ghost_eps_grid) {
      if (!positive_finite(eps)) {
        throw ConfigError("ghost-penalty grid entries must be finite > 0");
      }
    }
  }
};

// --------------------------------------------------------------------------
// Inner relaxation: phi, its trust-region linearized minimum, kappa, theta.
// --------------------------------------------------------------------------
struct RelaxationReport {
  double phi = 0.0;        // constraint violation at x
  double inner_min = 0.0;  // min of linearized violation over the inner region
  double kappa = 0.0;      // (1 - lambda) * phi + lambda * inner_min
  double theta = 0.0;      // phi - kappa  (the stationarity gap surrogate)
  Vector d_tilde;          // minimizer of the inner linearized problem
};

namespace detail {

// Appends the rows describing K - x (finite box faces and halfspaces) to
// (G, u) starting at row `row`, acting on the leading n columns. Returns the
// next free row.
inline int append_set_rows(const PolyhedralSet& set, const Vector& x, Matrix& G,
                           Vector& u, int row) {
  const int n = set.dim();
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(set.upper(i))) {
      G(row, i) = 1.0;
      u(row) = set.upper(i) - x(i);
      ++row;
    }
    if (std::isfinite(set.lower(i))) {
      G(row, i) = -1.0;
      u(row) = x(i) - set.lower(i);
      ++row;
    }
  }
  for (int k = 0; k < set.num_halfspaces(); ++k) {
    G.block(row, 0, 1, n) = set.C.row(k);
    u(row) = set.u(k) - set.C.row(k).dot(x);
    ++row;
  }
  return row;
}

inline int count_set_rows(const PolyhedralSet& set) {
  int rows = set.num_halfspaces();
  for (int i = 0; i < set.dim(); ++i) {
    rows += static_cast<int>(std::isfinite(set.upper(i)));
    rows += static_cast<int>(std::isfinite(set.lower(i)));
  }
  return rows;
}

}  // namespace detail

// Evaluates the relaxed constraint-violation measure at x:
//   inner_min = min { max(g~_i(d)_+, |h~_j(d)|) : |d|_inf <= rho, x + d in K }
// with g~, h~ the linearizations at x, solved as an epigraph LP, then
//   kappa = (1 - lambda) phi(x) + lambda inner_min,   theta = phi - kappa.
// Precondition: x in K (within a small tolerance).
inline RelaxationReport compute_kappa(const ProblemSpec& problem,
                                      const Vector& x,
                                      const AlgoParams& params) {
  params.validate();
  const int n = problem.n;
  if (x.size() != n) throw PreconditionError("compute_kappa: x has wrong size");
  if (!problem.K.contains(x, kSetMembershipTol)) {
    throw PreconditionError("compute_kappa: x must lie in the polyhedral set");
  }
  RelaxationReport rep;
  rep.phi = phi_infeasibility(problem, x);
  rep.d_tilde = Vector::Zero(n);
  const int m = problem.m;
  const int p = problem.p();
  if (m == 0 && p == 0) return rep;  // phi = 0, nothing to relax

  // Epigraph LP over z = [d; t]: minimize t subject to
  //   -t <= 0,
  //   grad g_i(x)' d - t <= -g_i(x),            i = 1..m
  //   +- (A d)_j - t <= -+ h_j(x),              j = 1..p
  //   +- d_i <= rho,                            i = 1..n
  //   d in K - x.
  const int set_rows = detail::count_set_rows(problem.K);
  const int rows = 1 + m + 2 * p + 2 * n + set_rows;
  ConicQP lp;
  lp.Q = Matrix::Zero(n + 1, n + 1);
  lp.c = Vector::Zero(n + 1);
  lp.c(n) = 1.0;
  lp.G = Matrix::Zero(rows, n + 1);
  lp.u = Vector::Zero(rows);

  int row = 0;
  lp.G(row, n) = -1.0;
  lp.u(row) = 0.0;
  ++row;
  if (m > 0) {
    const Matrix J = problem.eval_g_jac(x);
    const Vector g = problem.eval_g(x);
    for (int i = 0; i < m; ++i) {
      lp.G.block(row, 0, 1, n) = J.row(i);
      lp.G(row, n) = -1.0;
      lp.u(row) = -g(i);
      ++row;
    }
  }
  if (p > 0) {
    const Vector h = problem.eval_h(x);
    for (int j = 0; j < p; ++j) {
      lp.G.block(row, 0, 1, n) = problem.eq_A.row(j);
      lp.G(row, n) = -1.0;
      lp.u(row) = -h(j);
      ++row;
      lp.G.block(row, 0, 1, n) = -problem.eq_A.row(j);
      lp.G(row, n) = -1.0;
      lp.u(row) = h(j);
      ++row;
    }
  }
  for (int i = 0; i < n; ++i) {
    lp.G(row, i) = 1.0;
    lp.u(row) = params.rho;
    ++row;
    lp.G(row, i) = -1.0;
    lp.u(row) = params.rho;
    ++row;
  }
  row = detail::append_set_rows(problem.K, x, lp.G, lp.u, row);

  const QPSolution sol = solve_qp(lp, kSubsolveTol, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) {
    throw SubsolverError(
        "inner relaxation subproblem did not reach optimality (" +
            std::string(to_string(sol.status)) + ")",
        lp.dump());
  }
  rep.d_tilde = sol.z.head(n);
  rep.inner_min = std::clamp(sol.z(n), 0.0, rep.phi);
  rep.kappa = (1.0 - params.lambda) * rep.phi + params.lambda * rep.inner_min;
  rep.theta = rep.phi - rep.kappa;
  return rep;
}

// Data-driven upper bound for theta: the relaxation gap can never exceed the
// Lipschitz sweep of the linearized violation over the inner step, i.e.
//   theta <= |J|_inf * |d_tilde|_2 + 1e-8
// with J the stacked constraint Jacobian at x (max absolute row sum norm).
inline double theta_upper_bound(const ProblemSpec& problem, const Vector& x,
                                const RelaxationReport& rep) {
  const int m = problem.m;
  const int p = problem.p();
  double max_row_sum = 0.0;
  if (m > 0) {
    const Matrix J = problem.eval_g_jac(x);
    for (int i = 0; i < m; ++i) {
      max_row_sum = std::max(max_row_sum, J.row(i).lpNorm<1>());
    }
  }
  for (int j = 0; j < p; ++j) {
    max_row_sum = std::max(max_row_sum, problem.eq_A.row(j).lpNorm<1>());
  }
  const double d_norm = rep.d_tilde.size() > 0 ? rep.d_tilde.norm() : 0.0;
  return max_row_sum * d_norm + 1e-8;
}

// --------------------------------------------------------------------------
// Direction subproblems.
// --------------------------------------------------------------------------
struct ActiveSetInfo {
  std::vector<int> g_rows;        // active linearized inequality constraints
  std::vector<int> h_rows;        // equality rows active on either side
  std::vector<int> set_rows;      // active halfspaces of K
  std::vector<int> lower_coords;  // coordinates at their lower bound
  std::vector<int> upper_coords;  // coordinates at their upper bound
  std::vector<int> trust_coords;  // coordinates at the trust-region radius
};

struct DirectionResult {
  Vector d;                          // the computed direction
  Vector xi;                         // multipliers of the inequality models
  Vector pi;                         // multipliers of the equality models
  double subproblem_objective = 0.0; // f~(d; x) + q(x + d)
  ActiveSetInfo active_set;
  SolveStatus solver_status = SolveStatus::Optimal;

  double multiplier_norm() const {
    const double xs = xi.size() > 0 ? xi.lpNorm<1>() : 0.0;
    const double ps = pi.size() > 0 ? pi.lpNorm<1>() : 0.0;
    return xs + ps;
  }
};

namespace detail {

struct L1Epigraph {
  std::vector<int> coords;  // coordinates with positive l1 weight
  Vector weights;           // matching weights
};

inline L1Epigraph l1_epigraph(const NonsmoothTerm& q) {
  L1Epigraph e;
  if (q.is_zero()) return e;
  for (int i = 0; i < q.weights.size(); ++i) {
    if (q.weights(i) > 0.0) e.coords.push_back(i);
  }
  e.weights = Vector::Zero(static_cast<int>(e.coords.size()));
  for (std::size_t k = 0; k < e.coords.size(); ++k) {
    e.weights(static_cast<int>(k)) = q.weights(e.coords[k]);
  }
  return e;
}

// Shared assembly of the direction-subproblem objective and the K / l1 rows.
// Layout: z = [d (n); t (one epigraph variable per positive-weight coord)].
struct DirectionAssembly {
  ConicQP qp;
  int set_row_begin = 0;  // first row of the K description
  int l1_row_begin = 0;   // first row of the l1 epigraph pairs
  L1Epigraph l1;
};

inline DirectionAssembly assemble_direction_core(const ProblemSpec& problem,
                                                 const SurrogateModel& model,
                                                 const Vector& x,
                                                 int leading_rows) {
  const int n = problem.n;
  DirectionAssembly a;
  a.l1 = l1_epigraph(problem.q);
  const int k = static_cast<int>(a.l1.coords.size());
  const int nv = n + k;
  const int set_rows = count_set_rows(problem.K);
  const int rows = leading_rows + set_rows + 2 * k;

  a.qp.Q = Matrix::Zero(nv, nv);
  a.qp.Q.topLeftCorner(n, n) = model.B;
  a.qp.c = Vector::Zero(nv);
  a.qp.c.head(n) = problem.f_grad(x);
  if (k > 0) a.qp.c.tail(k) = a.l1.weights;
  a.qp.G = Matrix::Zero(rows, nv);
  a.qp.u = Vector::Zero(rows);

  a.set_row_begin = leading_rows;
  int row = append_set_rows(problem.K, x, a.qp.G, a.qp.u, leading_rows);
  a.l1_row_begin = row;
  // t_j >= |x_j + d_j|  <=>  +-(x_j + d_j) - t_j <= 0.
  for (int j = 0; j < k; ++j) {
    const int coord = a.l1.coords[static_cast<std::size_t>(j)];
    a.qp.G(row, coord) = 1.0;
    a.qp.G(row, n + j) = -1.0;
    a.qp.u(row) = -x(coord);
    ++row;
    a.qp.G(row, coord) = -1.0;
    a.qp.G(row, n + j) = -1.0;
    a.qp.u(row) = x(coord);
    ++row;
  }
  return a;
}

inline void collect_set_activity(const PolyhedralSet& set, const Vector& slack,
                                 int set_row_begin, ActiveSetInfo* info) {
  int row = set_row_begin;
  for (int i = 0; i < set.dim(); ++i) {
    if (std::isfinite(set.upper(i))) {
      if (slack(row) <= kActiveSlackTol) info->upper_coords.push_back(i);
      ++row;
    }
    if (std::isfinite(set.lower(i))) {
      if (slack(row) <= kActiveSlackTol) info->lower_coords.push_back(i);
      ++row;
    }
  }
  for (int c = 0; c < set.num_halfspaces(); ++c) {
    if (slack(row) <= kActiveSlackTol) info->set_rows.push_back(c);
    ++row;
  }
}

inline void require_quadratic_linear(const SurrogateModel& model) {
  model.validate();
  if (!model.is_quadratic_linear || model.B.size() == 0) {
    throw ConfigError(
        "direction subproblems require the quadratic/linear surrogate model");
  }
}

// Minimum achievable linearized violation over K - x (no trust region),
// solved as a phase-1 LP. Used to tell 'genuinely infeasible linearization'
// apart from solver breakdown in the convex path.
inline double linearized_violation_minimum(const ProblemSpec& problem,
                                           const Vector& x) {
  const int n = problem.n;
  const int m = problem.m;
  const int p = problem.p();
  const int set_rows = count_set_rows(problem.K);
  const int rows = 1 + m + 2 * p + set_rows;
  ConicQP lp;
  lp.Q = Matrix::Zero(n + 1, n + 1);
  lp.c = Vector::Zero(n + 1);
  lp.c(n) = 1.0;
  lp.G = Matrix::Zero(rows, n + 1);
  lp.u = Vector::Zero(rows);
  int row = 0;
  lp.G(row, n) = -1.0;
  ++row;
  if (m > 0) {
    const Matrix J = problem.eval_g_jac(x);
    const Vector g = problem.eval_g(x);
    for (int i = 0; i < m; ++i) {
      lp.G.block(row, 0, 1, n) = J.row(i);
      lp.G(row, n) = -1.0;
      lp.u(row) = -g(i);
      ++row;
    }
  }
  if (p > 0) {
    const Vector h = problem.eval_h(x);
    for (int j = 0; j < p; ++j) {
      lp.G.block(row, 0, 1, n) = problem.eq_A.row(j);
      lp.G(row, n) = -1.0;
      lp.u(row) = -h(j);
      ++row;
      lp.G.block(row, 0, 1, n) = -problem.eq_A.row(j);
      lp.G(row, n) = -1.0;
      lp.u(row) = h(j);
      ++row;
    }
  }
  row = append_set_rows(problem.K, x, lp.G, lp.u, row);
  const QPSolution sol = solve_qp(lp, 1e-9, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) return kInf;
  return std::max(0.0, sol.z(n));
}

}  // namespace detail

// General direction subproblem at x with relaxation level kappa:
//   min  f~(d; x) + q(x + d)
//   s.t. g~_i(d; x) <= kappa,  |h_j(x) + (A d)_j| <= kappa,
//        |d|_inf <= beta,  x + d in K,
// solved as a convex QP (epigraph form for the l1 term). Returns the
// direction, the multipliers of the relaxed constraint models, and the
// active-set snapshot.
inline DirectionResult solve_direction_general(const ProblemSpec& problem,
                                               const SurrogateModel& model,
                                               const Vector& x, double kappa,
                                               const AlgoParams& params) {
  detail::require_quadratic_linear(model);
  params.validate();
  const int n = problem.n;
  if (x.size() != n) {
    throw PreconditionError("direction subproblem: x has wrong size");
  }
  if (!problem.K.contains(x, kSetMembershipTol)) {
    throw PreconditionError(
        "direction subproblem: x must lie in the polyhedral set");
  }
  if (!(kappa >= -1e-12) || !std::isfinite(kappa)) {
    throw PreconditionError(
        "direction subproblem: kappa must be finite and nonnegative");
  }
  kappa = std::max(kappa, 0.0);
  const int m = problem.m;
  const int p = problem.p();

  const int leading = m + 2 * p + 2 * n;
  detail::DirectionAssembly a =
      detail::assemble_direction_core(problem, model, x, leading);

  int row = 0;
  if (m > 0) {
    const Matrix J = problem.eval_g_jac(x);
    const Vector g = problem.eval_g(x);
    for (int i = 0; i < m; ++i) {
      a.qp.G.block(row, 0, 1, n) = J.row(i);
      a.qp.u(row) = kappa - g(i);
      ++row;
    }
  }
  if (p > 0) {
    const Vector h = problem.eval_h(x);
    for (int j = 0; j < p; ++j) {
      a.qp.G.block(row, 0, 1, n) = problem.eq_A.row(j);
      a.qp.u(row) = kappa - h(j);
      ++row;
      a.qp.G.block(row, 0, 1, n) = -problem.eq_A.row(j);
      a.qp.u(row) = kappa + h(j);
      ++row;
    }
  }
  for (int i = 0; i < n; ++i) {
    a.qp.G(row, i) = 1.0;
    a.qp.u(row) = params.beta;
    ++row;
    a.qp.G(row, i) = -1.0;
    a.qp.u(row) = params.beta;
    ++row;
  }

  const QPSolution sol = solve_qp(a.qp, kSubsolveTol, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) {
    throw SubsolverError("general direction subproblem did not solve (" +
                             std::string(to_string(sol.status)) + ")",
                         a.qp.dump());
  }

  DirectionResult res;
  res.solver_status = sol.status;
  res.d = sol.z.head(n);
  res.xi = Vector::Zero(m);
  res.pi = Vector::Zero(p);
  const Vector slack = Vector(a.qp.u - a.qp.G * sol.z);
  for (int i = 0; i < m; ++i) {
    res.xi(i) = sol.lam_ineq(i);
    if (slack(i) <= kActiveSlackTol) res.active_set.g_rows.push_back(i);
  }
  for (int j = 0; j < p; ++j) {
    const int plus = m + 2 * j;
    const int minus = m + 2 * j + 1;
    res.pi(j) = sol.lam_ineq(plus) - sol.lam_ineq(minus);
    if (slack(plus) <= kActiveSlackTol || slack(minus) <= kActiveSlackTol) {
      res.active_set.h_rows.push_back(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    const int plus = m + 2 * p + 2 * i;
    const int minus = m + 2 * p + 2 * i + 1;
    if (slack(plus) <= kActiveSlackTol || slack(minus) <= kActiveSlackTol) {
      res.active_set.trust_coords.push_back(i);
    }
  }
  detail::collect_set_activity(problem.K, slack, a.set_row_begin,
                               &res.active_set);
  res.subproblem_objective =
      model.f_tilde_eval(res.d, x) + problem.q.eval(Vector(x + res.d));
  return res;
}

// Convex-case direction subproblem at x (no trust region, no relaxation):
//   min  f~(d; x) + q(x + d)
//   s.t. g_i(x) + grad g_i(x)' d <= 0,   A (x + d) + b = 0,   x + d in K.
// Requires the problem's inequality constraints to be convex. If the
// linearized system is infeasible, the problem's convex feasible set is
// empty and a SubsolverError naming the convex-feasibility violation is
// thrown.
inline DirectionResult solve_direction_convex(const ProblemSpec& problem,
                                              const SurrogateModel& model,
                                              const Vector& x,
                                              const AlgoParams& params) {
  detail::require_quadratic_linear(model);
  params.validate();
  const int n = problem.n;
  if (x.size() != n) {
    throw PreconditionError("direction subproblem: x has wrong size");
  }
  if (!problem.K.contains(x, kSetMembershipTol)) {
    throw PreconditionError(
        "direction subproblem: x must lie in the polyhedral set");
  }
  if (!problem.g_convex_flag) {
    throw ConfigError(
        "convex direction subproblem requires convex inequality constraints");
  }
  const int m = problem.m;
  const int p = problem.p();

  detail::DirectionAssembly a =
      detail::assemble_direction_core(problem, model, x, m);
  const int nv = static_cast<int>(a.qp.c.size());

  if (m > 0) {
    const Matrix J = problem.eval_g_jac(x);
    const Vector g = problem.eval_g(x);
    a.qp.G.block(0, 0, m, n) = J;
    a.qp.u.head(m) = -g;
  }
  if (p > 0) {
    a.qp.E = Matrix::Zero(p, nv);
    a.qp.E.leftCols(n) = problem.eq_A;
    a.qp.e = Vector(-problem.eval_h(x));
  }

  const QPSolution sol = solve_qp(a.qp, kSubsolveTol, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) {
    if (sol.status == SolveStatus::Infeasible ||
        sol.status == SolveStatus::MaxIter) {
      const double viol = detail::linearized_violation_minimum(problem, x);
      if (viol > 1e-7) {
        throw SubsolverError(
            "convex direction subproblem infeasible: the linearized "
            "constraint system has no solution in the set, so the problem "
            "violates the convex-feasibility requirement (minimum achievable "
            "violation " +
                std::to_string(viol) + ")",
            a.qp.dump());
      }
    }
    throw SubsolverError("convex direction subproblem did not solve (" +
                             std::string(to_string(sol.status)) + ")",
                         a.qp.dump());
  }

  DirectionResult res;
  res.solver_status = sol.status;
  res.d = sol.z.head(n);
  res.xi = Vector::Zero(m);
  res.pi = sol.lam_eq;
  const Vector slack = Vector(a.qp.u - a.qp.G * sol.z);
  for (int i = 0; i < m; ++i) {
    res.xi(i) = sol.lam_ineq(i);
    if (slack(i) <= kActiveSlackTol) res.active_set.g_rows.push_back(i);
  }
  for (int j = 0; j < p; ++j) res.active_set.h_rows.push_back(j);
  detail::collect_set_activity(problem.K, slack, a.set_row_begin,
                               &res.active_set);
  res.subproblem_objective =
      model.f_tilde_eval(res.d, x) + problem.q.eval(Vector(x + res.d));
  return res;
}

}  // namespace gdsm
