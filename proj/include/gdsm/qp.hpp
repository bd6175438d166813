// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/polyhedral_set.hpp"

namespace gdsm {

// Canonical convex subproblem hosting every inner solve of the package:
//   minimize    1/2 z'Qz + c'z
//   subject to  G z <= u,   E z = e
// Q is symmetric PSD (zero for an LP). Dense, desk scale (n_v up to ~300).
struct ConicQP {
  Matrix Q;
  Vector c;
  Matrix G;
  Vector u;
  Matrix E;
  Vector e;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_ineq() const { return static_cast<int>(u.size()); }
  int num_eq() const { return static_cast<int>(e.size()); }

  void validate() const {
    const int n = num_vars();
    if (n < 1) throw ConfigError("qp: at least one variable required");
    if (Q.rows() != n || Q.cols() != n) throw ConfigError("qp: Q shape");
    if (G.rows() != u.size() || (G.rows() > 0 && G.cols() != n)) {
      throw ConfigError("qp: inequality shape");
    }
    if (E.rows() != e.size() || (E.rows() > 0 && E.cols() != n)) {
      throw ConfigError("qp: equality shape");
    }
    if (!Q.allFinite() || !c.allFinite() || (G.size() > 0 && !G.allFinite()) ||
        (u.size() > 0 && !u.allFinite()) || (E.size() > 0 && !E.allFinite()) ||
        (e.size() > 0 && !e.allFinite())) {
      throw ConfigError("qp: data must be finite");
    }
  }

  double objective(const Vector& z) const {
    return 0.5 * z.dot(Q * z) + c.dot(z);
  }

  // Plain-text dump for bug reports when a solve that must succeed does not.
  std::string dump() const {
    std::ostringstream os;
    os.precision(17);
    os << "n_v=" << num_vars() << " k=" << num_ineq() << " l=" << num_eq()
       << "\nQ=\n"
       << Q << "\nc=" << c.transpose() << "\nG=\n"
       << G << "\nu=" << u.transpose() << "\nE=\n"
       << E << "\ne=" << e.transpose() << "\n";
    return os.str();
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::Infeasible:
      return "Infeasible";
    case SolveStatus::Unbounded:
      return "Unbounded";
    default:
      return "MaxIter";
  }
}

struct QPSolution {
  Vector z;
  Vector lam_ineq;  // >= 0 (strictly positive along the interior-point path)
  Vector lam_eq;
  SolveStatus status = SolveStatus::MaxIter;
  double kkt_residual = kInf;  // max of stationarity/feasibility/complementarity
  int iterations = 0;
};

namespace detail {

// Solves the symmetric quasi-definite augmented system
//   [ M  E' ] [dz]   [r1]
//   [ E  0  ] [dy] = [r2]
// through an LU factorization of the regularized matrix, with iterative
// refinement against the unregularized operator.
struct AugmentedSolver {
  Eigen::PartialPivLU<Matrix> lu;
  Matrix A;  // unregularized
  int n = 0, l = 0;

  void factor(const Matrix& M, const Matrix& E, double reg) {
    n = static_cast<int>(M.rows());
    l = static_cast<int>(E.rows());
    A.setZero(n + l, n + l);
    A.topLeftCorner(n, n) = M;
    if (l > 0) {
      A.topRightCorner(n, l) = E.transpose();
      A.bottomLeftCorner(l, n) = E;
    }
    Matrix A_reg = A;
    A_reg.topLeftCorner(n, n).diagonal().array() += reg;
    if (l > 0) A_reg.bottomRightCorner(l, l).diagonal().array() -= reg;
    lu.compute(A_reg);
  }

  Vector solve(const Vector& rhs) const {
    Vector x = lu.solve(rhs);
    for (int pass = 0; pass < 4; ++pass) {
      Vector resid = rhs - A * x;
      if (resid.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
      x += lu.solve(resid);
    }
    return x;
  }
};

inline double max_step_to_boundary(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

}  // namespace detail

// Dense Mehrotra-style predictor-corrector primal-dual interior-point method.
// Returns high-accuracy primal AND dual solutions; the duals feed multiplier
// recovery and stationarity diagnostics downstream, which is why a
// first-order/operator-splitting scheme is not used here.
//
// Deterministic: identical inputs produce identical outputs.
inline QPSolution solve_qp(const ConicQP& qp, double tol = 1e-9,
                           int max_iter = 100) {
  qp.validate();
  if (tol < 1e-12 || tol > 1e-4) {
    throw ConfigError("solve_qp: tol outside [1e-12, 1e-4]");
  }
  const int n = qp.num_vars(), k = qp.num_ineq(), l = qp.num_eq();
  constexpr double kReg = 1e-10;          // diagonal regularization
  constexpr double kDualBlowup = 1e10;    // infeasibility certificate proxy
  constexpr double kPrimalBlowup = 1e12;  // unboundedness proxy

  QPSolution sol;
  sol.lam_ineq = Vector::Zero(k);
  sol.lam_eq = Vector::Zero(l);

  const bool is_lp = (qp.Q.size() == 0) || qp.Q.lpNorm<Eigen::Infinity>() == 0.0;

  // True (not slack-variable) optimality measures.
  const auto measure = [&](const Vector& z, const Vector& lam,
                           const Vector& y) {
    Vector rd = qp.Q * z + qp.c;
    if (k > 0) rd.noalias() += qp.G.transpose() * lam;
    if (l > 0) rd.noalias() += qp.E.transpose() * y;
    double res = rd.lpNorm<Eigen::Infinity>();
    if (k > 0) {
      const Vector slack = qp.u - qp.G * z;
      res = std::max(res, std::max(0.0, -slack.minCoeff()));
      res = std::max(res, (lam.array() * slack.array()).abs().maxCoeff());
    }
    if (l > 0) res = std::max(res, (qp.E * z - qp.e).lpNorm<Eigen::Infinity>());
    return res;
  };

  // ---- No inequalities: a single (regularized, refined) KKT solve. ----
  if (k == 0) {
    detail::AugmentedSolver aug;
    aug.factor(qp.Q, qp.E, kReg);
    Vector rhs(n + l);
    rhs.head(n) = -qp.c;
    if (l > 0) rhs.tail(l) = qp.e;
    const Vector zy = aug.solve(rhs);
    sol.z = zy.head(n);
    sol.lam_eq = zy.tail(l);
    sol.kkt_residual = measure(sol.z, sol.lam_ineq, sol.lam_eq);
    sol.iterations = 1;
    if (sol.kkt_residual <= tol) {
      sol.status = SolveStatus::Optimal;
    } else if (sol.z.lpNorm<Eigen::Infinity>() > kPrimalBlowup ||
               (is_lp && l == 0)) {
      sol.status = SolveStatus::Unbounded;
    } else {
      sol.status = SolveStatus::MaxIter;
    }
    return sol;
  }

  // ---- Starting point. ----
  Vector z = Vector::Zero(n), y = Vector::Zero(l);
  {
    detail::AugmentedSolver aug;
    Matrix M0 = qp.Q;
    M0.diagonal().array() += 1.0;
    aug.factor(M0, qp.E, kReg);
    Vector rhs(n + l);
    rhs.head(n) = -qp.c;
    if (l > 0) rhs.tail(l) = qp.e;
    const Vector zy = aug.solve(rhs);
    z = zy.head(n);
    if (l > 0) y = zy.tail(l);
  }
  Vector s_hat = qp.u - qp.G * z;
  const double base =
      std::max(1.0, 0.1 * s_hat.lpNorm<Eigen::Infinity>());
  Vector s(k), lam(k);
  for (int i = 0; i < k; ++i) {
    s(i) = std::max(s_hat(i), base);
    lam(i) = 1.0;
  }

  detail::AugmentedSolver aug;
  Vector rhs(n + l);
  double best_res = kInf;
  Vector best_z = z, best_s = s, best_lam = lam, best_y = y;
  for (int it = 1; it <= max_iter; ++it) {
    sol.iterations = it;
    const double res = measure(z, lam, y);
    const double mu_now = s.dot(lam) / k;
    if (log_level() == LogLevel::Debug) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "ipm it=%d residual=%.3e mu=%.3e |z|=%.3e |lam|=%.3e", it,
                    res, mu_now, z.lpNorm<Eigen::Infinity>(),
                    lam.lpNorm<1>());
      log(LogLevel::Debug, line);
    }
    if (res < best_res) {
      best_res = res;
      best_z = z;
      best_s = s;
      best_lam = lam;
      best_y = y;
    }
    if (res <= tol) {
      sol.status = SolveStatus::Optimal;
      sol.kkt_residual = res;
      break;
    }
    if (lam.lpNorm<1>() > kDualBlowup) {
      sol.status = SolveStatus::Infeasible;
      sol.kkt_residual = res;
      break;
    }
    if (z.lpNorm<Eigen::Infinity>() > kPrimalBlowup ||
        (is_lp && qp.objective(z) < -kPrimalBlowup)) {
      sol.status = SolveStatus::Unbounded;
      sol.kkt_residual = res;
      break;
    }
    // Stop before the complementarity products underflow into numerical
    // garbage, and bail out of a post-plateau divergence; the active-set
    // polish below recovers full accuracy from the best iterate.
    if (mu_now < 1e-15 && it > 5) break;
    if (best_res < 1e-6 && res > 1e4 * best_res) break;

    // Residuals of the perturbed KKT system (s is the internal slack).
    Vector rd = qp.Q * z + qp.c + qp.G.transpose() * lam;
    if (l > 0) rd.noalias() += qp.E.transpose() * y;
    const Vector rp = qp.G * z + s - qp.u;
    const Vector re = (l > 0) ? Vector(qp.E * z - qp.e) : Vector();
    const double mu = mu_now;

    // Normal-equations style reduction: M = Q + G' diag(lam/s) G.
    Matrix M = qp.Q;
    Vector dvec(k);
    for (int i = 0; i < k; ++i) {
      dvec(i) = std::min(std::max(lam(i) / s(i), 1e-14), 1e16);
    }
    M.noalias() += qp.G.transpose() * dvec.asDiagonal() * qp.G;
    aug.factor(M, qp.E, kReg);

    const auto newton = [&](const Vector& rmu, Vector& dz, Vector& dy,
                            Vector& ds, Vector& dlam) {
      Vector w(k);  // S^{-1}(Lam rp - rmu)
      for (int i = 0; i < k; ++i) w(i) = (lam(i) * rp(i) - rmu(i)) / s(i);
      rhs.head(n) = -rd - qp.G.transpose() * w;
      if (l > 0) rhs.tail(l) = -re;
      const Vector dzy = aug.solve(rhs);
      dz = dzy.head(n);
      dy = (l > 0) ? Vector(dzy.tail(l)) : Vector();
      ds = -rp - qp.G * dz;
      dlam.resize(k);
      for (int i = 0; i < k; ++i) dlam(i) = (-rmu(i) - lam(i) * ds(i)) / s(i);
    };

    // Predictor (affine scaling) direction.
    Vector rmu_aff(k);
    for (int i = 0; i < k; ++i) rmu_aff(i) = s(i) * lam(i);
    Vector dz_a, dy_a, ds_a, dlam_a;
    newton(rmu_aff, dz_a, dy_a, ds_a, dlam_a);
    const double ap_a = detail::max_step_to_boundary(s, ds_a);
    const double ad_a = detail::max_step_to_boundary(lam, dlam_a);
    const double mu_aff =
        (s + ap_a * ds_a).dot(lam + ad_a * dlam_a) / k;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3);
    sigma = std::min(std::max(sigma, 0.0), 1.0);

    // Corrector with Mehrotra's second-order term.
    Vector rmu(k);
    for (int i = 0; i < k; ++i) {
      rmu(i) = s(i) * lam(i) + ds_a(i) * dlam_a(i) - sigma * mu;
    }
    Vector dz, dy, ds, dlam;
    newton(rmu, dz, dy, ds, dlam);

    const double tau = (mu < 1e-7) ? 0.99995 : 0.995;
    const double ap = std::min(1.0, tau * detail::max_step_to_boundary(s, ds));
    const double ad =
        std::min(1.0, tau * detail::max_step_to_boundary(lam, dlam));
    z += ap * dz;
    s += ap * ds;
    lam += ad * dlam;
    if (l > 0) y += ad * dy;
  }

  sol.z = z;
  sol.lam_ineq = lam;
  sol.lam_eq = y;
  if (sol.status == SolveStatus::MaxIter ||
      sol.status == SolveStatus::Optimal) {
    // Cross over to an active-set solve: seed the active set from the best
    // iterate, solve the equality-KKT system directly, then refine the set
    // by adding violated rows and dropping negative multipliers. Keep
    // whichever of the two solutions measures better.
    //
    // This runs on *both* exit paths. On a stalled path it recovers the
    // accuracy the IPM could not reach (typical cause: degenerate rows whose
    // slack and multiplier both vanish like sqrt(mu)). On a converged path
    // it repairs weakly active rows, where slack ~ lam ~ sqrt(mu) keeps the
    // complementarity measure at mu while the primal is still off by
    // sqrt(mu): the KKT measure meets tol but z does not.
    const Vector slack_best = qp.u - qp.G * best_z;
    std::vector<int> act;
    for (int i = 0; i < k; ++i) {
      if (slack_best(i) <= best_lam(i)) act.push_back(i);
    }
    for (int pass = 0; pass < 8; ++pass) {
      const int a = static_cast<int>(act.size());
      Matrix KKT = Matrix::Zero(n + l + a, n + l + a);
      KKT.topLeftCorner(n, n) = qp.Q;
      if (l > 0) {
        KKT.block(0, n, n, l) = qp.E.transpose();
        KKT.block(n, 0, l, n) = qp.E;
      }
      for (int j = 0; j < a; ++j) {
        KKT.block(0, n + l + j, n, 1) = qp.G.row(act[j]).transpose();
        KKT.block(n + l + j, 0, 1, n) = qp.G.row(act[j]);
      }
      Vector r(n + l + a);
      r.head(n) = -qp.c;
      if (l > 0) r.segment(n, l) = qp.e;
      for (int j = 0; j < a; ++j) r(n + l + j) = qp.u(act[j]);
      const Vector w =
          Eigen::CompleteOrthogonalDecomposition<Matrix>(KKT).solve(r);
      Vector lam_raw = Vector::Zero(k), lam_p = Vector::Zero(k);
      for (int j = 0; j < a; ++j) {
        lam_raw(act[j]) = w(n + l + j);
        lam_p(act[j]) = std::max(w(n + l + j), 0.0);
      }
      const Vector z_p = w.head(n);
      const Vector y_p = (l > 0) ? Vector(w.segment(n, l)) : Vector();
      const double res_p = measure(z_p, lam_p, y_p);
      if (log_level() == LogLevel::Debug) {
        char line[160];
        std::snprintf(line, sizeof(line),
                      "ipm crossover pass=%d active=%d residual=%.3e "
                      "(best %.3e)",
                      pass, a, res_p, best_res);
        log(LogLevel::Debug, line);
      }
      if (res_p < best_res) {
        best_res = res_p;
        best_z = z_p;
        best_lam = lam_p;
        best_y = y_p;
      }
      if (res_p <= tol) break;
      // Refine the working set: add primal-violated rows, drop rows whose
      // multiplier came out meaningfully negative.
      const Vector slack_p = qp.u - qp.G * z_p;
      std::vector<int> next;
      bool changed = false;
      for (int j = 0; j < a; ++j) {
        if (lam_raw(act[j]) < -1e-9) {
          changed = true;  // dropped
        } else {
          next.push_back(act[j]);
        }
      }
      for (int i = 0; i < k; ++i) {
        const bool in_set =
            std::find(next.begin(), next.end(), i) != next.end();
        if (!in_set && slack_p(i) < -1e-11 * (1.0 + std::abs(qp.u(i)))) {
          next.push_back(i);
          changed = true;
        }
      }
      if (!changed) break;
      std::sort(next.begin(), next.end());
      act = std::move(next);
    }
    sol.z = best_z;
    sol.lam_ineq = best_lam;
    sol.lam_eq = best_y;
    sol.kkt_residual = best_res;
    if (best_res <= tol) sol.status = SolveStatus::Optimal;
  }
  if (sol.kkt_residual == kInf) sol.kkt_residual = measure(z, lam, y);
  return sol;
}

// Load-time nonemptiness certificate for a polyhedral set. The box is kept
// hard; the halfspace rows are relaxed by one slack t >= 0 which is then
// minimized (phase-1 LP). Nonempty iff the optimal slack is ~0.
inline bool certify_nonempty(const PolyhedralSet& set, double tol = 1e-7) {
  if (!set.bounds_consistent()) return false;
  const int r = set.num_halfspaces();
  if (r == 0) return true;
  const int n = set.dim();

  // Variables (x, t): minimize t s.t. Cx - t e <= u, x in box, t >= 0.
  int rows = r + 1;
  for (int i = 0; i < n; ++i) {
    if (set.lower(i) > -kInf) ++rows;
    if (set.upper(i) < kInf) ++rows;
  }
  ConicQP lp;
  lp.Q = Matrix::Zero(n + 1, n + 1);
  lp.c = Vector::Zero(n + 1);
  lp.c(n) = 1.0;
  lp.G = Matrix::Zero(rows, n + 1);
  lp.u = Vector::Zero(rows);
  lp.E = Matrix::Zero(0, n + 1);
  lp.e = Vector::Zero(0);
  int row = 0;
  for (int i = 0; i < r; ++i, ++row) {
    lp.G.block(row, 0, 1, n) = set.C.row(i);
    lp.G(row, n) = -1.0;
    lp.u(row) = set.u(i);
  }
  lp.G(row, n) = -1.0;
  lp.u(row) = 0.0;  // t >= 0
  ++row;
  for (int i = 0; i < n; ++i) {
    if (set.upper(i) < kInf) {
      lp.G(row, i) = 1.0;
      lp.u(row) = set.upper(i);
      ++row;
    }
    if (set.lower(i) > -kInf) {
      lp.G(row, i) = -1.0;
      lp.u(row) = -set.lower(i);
      ++row;
    }
  }
  const QPSolution s = solve_qp(lp, 1e-9, 100);
  return s.status == SolveStatus::Optimal && s.z(n) <= tol;
}

}  // namespace gdsm
