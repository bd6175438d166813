// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/qp.hpp"
#include "gdsm/subproblems.hpp"

namespace gdsm {

// Must dominate the drivers' direction-norm stopping tolerance: terminal
// iterates sit within roughly that distance of the faces/kinks that are
// active at their limit, and a missed face loses its normal-cone generator
// entirely (an O(1) error in the residual, far worse than the O(tol)
// perturbation of admitting a nearly active face).
inline constexpr double kActivityTol = 1e-6;

// --------------------------------------------------------------------------
// KKT residual.
// --------------------------------------------------------------------------
// Distance (Euclidean) from -[grad f(x) + grad g(x)' xi + A' pi] to the sum
// of the l1 subdifferential at x and the normal cone of K at x:
//
//   residual = min | grad f + grad g' xi + A' pi + r + z |_2
//              over r in subdiff q(x), z in N_K(x).
//
// N_K(x) is generated by the active halfspace rows (nonnegative weights) and
// the active box faces (+e_i at the upper bound, -e_i at the lower bound);
// activity is decided within kActivityTol. The minimization is a small
// bound/cone-constrained least-squares problem solved exactly.
inline double kkt_residual(const ProblemSpec& problem, const Vector& x,
                           const Vector& xi, const Vector& pi) {
  const int n = problem.n;
  if (x.size() != n) throw PreconditionError("kkt_residual: x has wrong size");
  if (!x.allFinite()) throw PreconditionError("kkt_residual: x not finite");
  if (xi.size() != problem.m) {
    throw PreconditionError("kkt_residual: xi must have one entry per "
                            "inequality constraint");
  }
  if (pi.size() != problem.p()) {
    throw PreconditionError("kkt_residual: pi must have one entry per "
                            "equality row");
  }

  Vector v = problem.f_grad(x);
  if (problem.m > 0) v += problem.eval_g_jac(x).transpose() * xi;
  if (problem.p() > 0) v += problem.eq_A.transpose() * pi;

  // Columns of the free part: l1 subgradient coordinates still free at x
  // (weight > 0 and x_i at the kink), then normal-cone generators.
  struct Column {
    Vector dir;
    double lo, hi;  // coefficient bounds (lo = 0 for cone generators)
  };
  std::vector<Column> cols;
  if (!problem.q.is_zero()) {
    for (int i = 0; i < n; ++i) {
      const double w = problem.q.weights(i);
      if (w <= 0.0) continue;
      if (std::abs(x(i)) <= kActivityTol) {
        cols.push_back({Vector(Vector::Unit(n, i)), -w, w});
      } else {
        v(i) += w * (x(i) > 0.0 ? 1.0 : -1.0);  // fixed subgradient entry
      }
    }
  }
  const PolyhedralSet& K = problem.K;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(K.upper(i)) && x(i) >= K.upper(i) - kActivityTol) {
      cols.push_back({Vector(Vector::Unit(n, i)), 0.0, kInf});
    }
    if (std::isfinite(K.lower(i)) && x(i) <= K.lower(i) + kActivityTol) {
      cols.push_back({Vector(-Vector::Unit(n, i)), 0.0, kInf});
    }
  }
  for (int k = 0; k < K.num_halfspaces(); ++k) {
    if (K.C.row(k).dot(x) >= K.u(k) - kActivityTol) {
      cols.push_back({Vector(K.C.row(k).transpose()), 0.0, kInf});
    }
  }

  if (cols.empty()) return v.norm();

  const int nc = static_cast<int>(cols.size());
  Matrix M(n, nc);
  for (int j = 0; j < nc; ++j) M.col(j) = cols[static_cast<std::size_t>(j)].dir;

  // min |v + M y|^2 over box/cone bounds on y, as a QP in y.
  ConicQP qp;
  qp.Q = Matrix(M.transpose() * M);
  qp.c = Vector(M.transpose() * v);
  // Every column has a finite lower bound (either -w or 0); upper bounds are
  // finite only for the subgradient columns.
  int rows = 0;
  for (const Column& c : cols) {
    if (std::isfinite(c.hi)) ++rows;
    ++rows;
  }
  qp.G = Matrix::Zero(rows, nc);
  qp.u = Vector::Zero(rows);
  int row = 0;
  for (int j = 0; j < nc; ++j) {
    const Column& c = cols[static_cast<std::size_t>(j)];
    if (std::isfinite(c.hi)) {
      qp.G(row, j) = 1.0;
      qp.u(row) = c.hi;
      ++row;
    }
    qp.G(row, j) = -1.0;
    qp.u(row) = -c.lo;
    ++row;
  }
  const QPSolution sol = solve_qp(qp, 1e-10, kSubsolveIters);
  if (sol.status != SolveStatus::Optimal) {
    throw SubsolverError("stationarity-residual subproblem did not solve (" +
                             std::string(to_string(sol.status)) + ")",
                         qp.dump());
  }
  return Vector(v + M * sol.z).norm();
}

struct KKTResidualReport {
  double stationarity_residual = 0.0;   // the minimized gradient residual
  double complementarity_residual = 0.0;  // max |xi_i g_i(x)|
  double primal_infeasibility = 0.0;    // phi(x)
};

inline KKTResidualReport kkt_report(const ProblemSpec& problem,
                                    const Vector& x, const Vector& xi,
                                    const Vector& pi) {
  KKTResidualReport rep;
  rep.stationarity_residual = kkt_residual(problem, x, xi, pi);
  rep.primal_infeasibility = phi_infeasibility(problem, x);
  if (problem.m > 0) {
    const Vector g = problem.eval_g(x);
    for (int i = 0; i < problem.m; ++i) {
      rep.complementarity_residual =
          std::max(rep.complementarity_residual, std::abs(xi(i) * g(i)));
    }
  }
  return rep;
}

// --------------------------------------------------------------------------
// Terminal-point classification.
// --------------------------------------------------------------------------
struct ClassificationThresholds {
  double tol_feas = 1e-6;
  double tol_theta = 1e-9;
  double tol_d = 1e-7;
  double tol_kkt = 1e-5;
  double multiplier_blowup = 1e6;
};

enum class StationarityKind {
  KKT,           // feasible and the KKT residual vanishes
  ESCandidate,   // infeasible but the relaxation gap vanished:
                 //   candidate external stationary point of the violation
  FJCandidate,   // feasible, direction vanished, multipliers blew up while
                 //   the KKT residual stayed large: degenerate-multiplier
                 //   (Fritz-John-like) candidate
  Unclassified,
};

inline const char* to_string(StationarityKind k) {
  switch (k) {
    case StationarityKind::KKT: return "KKT";
    case StationarityKind::ESCandidate: return "ESCandidate";
    case StationarityKind::FJCandidate: return "FJCandidate";
    default: return "Unclassified";
  }
}

struct StationarityEvidence {
  double phi = 0.0;
  double theta = 0.0;
  double d_norm = 0.0;           // infinity norm of the last direction
  double kkt_residual = 0.0;
  double multiplier_norm = 0.0;  // |xi|_1 + |pi|_1
};

struct StationarityLabel {
  StationarityKind kind = StationarityKind::Unclassified;
  StationarityEvidence evidence;
};

// Pure decision tree over already-assembled evidence.
inline StationarityKind classify_evidence(const StationarityEvidence& e,
                                          const ClassificationThresholds& tols =
                                              ClassificationThresholds{}) {
  if (e.phi <= tols.tol_feas && e.kkt_residual <= tols.tol_kkt) {
    return StationarityKind::KKT;
  }
  if (e.phi > tols.tol_feas && e.theta <= tols.tol_theta) {
    return StationarityKind::ESCandidate;
  }
  if (e.phi <= tols.tol_feas && e.d_norm <= tols.tol_d &&
      e.kkt_residual > tols.tol_kkt &&
      e.multiplier_norm >= tols.multiplier_blowup) {
    return StationarityKind::FJCandidate;
  }
  return StationarityKind::Unclassified;
}

// Classifies a terminal point, evaluating the KKT residual from the last
// direction subproblem's multipliers.
inline StationarityLabel classify_point(const ProblemSpec& problem,
                                        const Vector& x,
                                        const RelaxationReport& relaxation,
                                        const DirectionResult& direction,
                                        const ClassificationThresholds& tols =
                                            ClassificationThresholds{}) {
  StationarityLabel label;
  StationarityEvidence& e = label.evidence;
  e.phi = relaxation.phi;
  e.theta = relaxation.theta;
  e.d_norm =
      direction.d.size() > 0 ? direction.d.lpNorm<Eigen::Infinity>() : 0.0;
  e.kkt_residual = kkt_residual(problem, x, direction.xi, direction.pi);
  e.multiplier_norm = direction.multiplier_norm();
  label.kind = classify_evidence(e, tols);
  return label;
}

// --------------------------------------------------------------------------
// Ghost-penalty diagnostics.
// --------------------------------------------------------------------------
// W(x; eps) = f(x) + q(x) + phi(x) / eps, sampled on a grid of eps values.
inline std::vector<std::pair<double, double>> ghost_penalty_samples(
    const ProblemSpec& problem, const Vector& x,
    const std::vector<double>& eps_grid) {
  const double base = problem.f_eval(x) + problem.q.eval(x);
  const double phi = phi_infeasibility(problem, x);
  std::vector<std::pair<double, double>> samples;
  samples.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw PreconditionError("ghost-penalty eps values must be finite > 0");
    }
    samples.emplace_back(eps, base + phi / eps);
  }
  return samples;
}

}  // namespace gdsm
