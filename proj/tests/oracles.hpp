// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Test-side oracles. Everything in this header is deliberately independent of
// the library under test: brute-force enumeration, grid search, finite
// differences, and closed-form recursions derived by hand. Test expectations
// are frozen against these procedures, never against solver output.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracles {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Deterministic U[0,1) from raw mt19937_64 output (independent of libstdc++
// distribution internals).
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

// ---------------------------------------------------------------------------
// Active-set enumeration for  min 1/2 z'Qz + c'z  s.t. Gz <= u, Ez = e.
//
// For every subset S of inequality rows, solve the equality-restricted KKT
// system; keep candidates that are primal feasible; return the best value.
// Correct for strongly convex QPs (the optimizer's active set yields the
// restricted minimizer) and for bounded LPs (some vertex subset is optimal).
// ---------------------------------------------------------------------------
struct EnumerationResult {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  Vector z;
};

inline EnumerationResult enumerate_qp(const Matrix& Q, const Vector& c,
                                      const Matrix& G, const Vector& u,
                                      const Matrix& E, const Vector& e,
                                      double feas_tol = 1e-9) {
  const int n = static_cast<int>(c.size());
  const int k = static_cast<int>(u.size());
  const int l = static_cast<int>(e.size());
  EnumerationResult best;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) S.push_back(i);
    const int ns = static_cast<int>(S.size());
    const int dim = n + ns + l;
    Matrix kkt = Matrix::Zero(dim, dim);
    Vector rhs = Vector::Zero(dim);
    kkt.topLeftCorner(n, n) = Q;
    rhs.head(n) = -c;
    for (int i = 0; i < ns; ++i) {
      kkt.block(n + i, 0, 1, n) = G.row(S[i]);
      kkt.block(0, n + i, n, 1) = G.row(S[i]).transpose();
      rhs(n + i) = u(S[i]);
    }
    if (l > 0) {
      kkt.block(n + ns, 0, l, n) = E;
      kkt.block(0, n + ns, n, l) = E.transpose();
      rhs.tail(l) = e;
    }
    Eigen::FullPivLU<Matrix> lu(kkt);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) continue;
    Vector sol = lu.solve(rhs);
    if ((kkt * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-8) continue;
    Vector z = sol.head(n);
    if (k > 0 && ((G * z - u).maxCoeff() > feas_tol)) continue;
    if (l > 0 && ((E * z - e).lpNorm<Eigen::Infinity>() > feas_tol)) continue;
    const double val = 0.5 * z.dot(Q * z) + c.dot(z);
    if (!best.found || val < best.value) {
      best.found = true;
      best.value = val;
      best.z = z;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Grid search (value bound / argmin cross-checks).
// ---------------------------------------------------------------------------
inline double grid_argmin_1d(const std::function<double(double)>& fn,
                             double lo, double hi, double step) {
  double best_x = lo, best_v = fn(lo);
  for (double x = lo; x <= hi + 0.5 * step; x += step) {
    const double v = fn(std::min(x, hi));
    if (v < best_v) {
      best_v = v;
      best_x = std::min(x, hi);
    }
  }
  return best_x;
}

inline double grid_min_2d(const std::function<double(double, double)>& fn,
                          double lo, double hi, double step) {
  double best = std::numeric_limits<double>::infinity();
  for (double x = lo; x <= hi + 0.5 * step; x += step)
    for (double y = lo; y <= hi + 0.5 * step; y += step)
      best = std::min(best, fn(std::min(x, hi), std::min(y, hi)));
  return best;
}

// Central finite differences, step h*(1+|x|) per coordinate.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f,
                          const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double hi = h * (1.0 + std::abs(x(i)));
    Vector xp = x, xm = x;
    xp(i) += hi;
    xm(i) -= hi;
    g(i) = (f(xp) - f(xm)) / (2.0 * hi);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Closed-form directions, derived by hand.
//
// T1: f = x^2, g = 1 - x <= 0, K = [-2,2], B = I, q = 0.
// Convex-case subproblem at x: min 2x d + d^2/2, d >= 1-x, d in [-2-x, 2-x].
// Unconstrained minimizer -2x; the lower bound is max(1-x, -2-x) = 1-x; the
// upper bound 2-x only binds at x = -2 where it coincides with -2x.
//   => d(x) = min(max(-2x, 1-x), 2-x).
// ---------------------------------------------------------------------------
inline double t1_direction_convex(double x) {
  return std::min(std::max(-2.0 * x, 1.0 - x), 2.0 - x);
}

// T1 general (kappa-relaxed) direction. phi = (1-x)_+; the inner minimax over
// |d| <= rho, d in K-x gives inner = max(0, 1-x-rho) for x <= 1.5, so
// kappa = (1-lambda)(1-x)_+ + lambda*max(0, 1-x-rho), and the g-row of the
// direction subproblem relaxes to d >= 1-x-kappa.
inline double t1_kappa(double x, double lambda, double rho) {
  const double phi = std::max(0.0, 1.0 - x);
  const double inner = std::max(0.0, std::min(1.0 - x - rho, phi));
  return (1.0 - lambda) * phi + lambda * std::max(0.0, inner);
}
inline double t1_direction_general(double x, double lambda, double rho) {
  const double kappa = t1_kappa(x, lambda, rho);
  const double low = std::max(1.0 - x - kappa, -2.0 - x);
  return std::min(std::max(-2.0 * x, low), 2.0 - x);
}

// Diminishing-step recursion oracle for T1: x <- x + gamma_nu * d(x).
inline std::vector<double> t1_recursion(double x0, double gamma0, double p,
                                        int iters, bool general, double lambda,
                                        double rho) {
  std::vector<double> xs{x0};
  double x = x0;
  for (int nu = 0; nu < iters; ++nu) {
    const double gamma = gamma0 / std::pow(nu + 1.0, p);
    const double d =
        general ? t1_direction_general(x, lambda, rho) : t1_direction_convex(x);
    x += gamma * d;
    xs.push_back(x);
  }
  return xs;
}

// T4: f = -|x|^2, A = [1 1], b = -1, K = [0,1]^2, B = I, q = 0. On the
// feasible segment x = (t, 1-t), directions live in the nullspace span(1,-1):
// d = s*(1,-1) with s = clamp(2t-1, -t, 1-t).
inline double t4_tangent_step(double t) {
  return std::min(std::max(2.0 * t - 1.0, -t), 1.0 - t);
}

}  // namespace oracles
