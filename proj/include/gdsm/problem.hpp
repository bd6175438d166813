// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/nonsmooth.hpp"
#include "gdsm/polyhedral_set.hpp"

namespace gdsm {

// One instance of the composite constrained problem
//   minimize    f(x) + q(x)
//   subject to  g(x) <= 0  (m smooth inequality constraints)
//               A x + b = 0 (p linear equality constraints)
//               x in K    (polyhedral)
// f is C^1 (callback pair), q is the weighted-l1 NonsmoothTerm, g is C^1 with
// a Jacobian callback whose rows are the constraint gradients. Equality
// constraints are linear by design: both algorithms only ever use the
// linearization of the equalities, and linearity makes the
// equality-preservation invariant of the convex-case method exactly testable.
struct ProblemSpec {
  int n = 0;
  std::function<double(const Vector&)> f_eval;
  std::function<Vector(const Vector&)> f_grad;
  NonsmoothTerm q;
  int m = 0;
  std::function<Vector(const Vector&)> g_eval;  // m-vector
  std::function<Matrix(const Vector&)> g_jac;   // m x n, row i = grad g_i
  Matrix eq_A;                                  // p x n
  Vector eq_b;                                  // p
  PolyhedralSet K;
  bool g_convex_flag = false;  // user declaration enabling the convex-case path

  int p() const { return static_cast<int>(eq_A.rows()); }

  void validate() const {
    if (n < 1) throw ConfigError("problem: dimension must be >= 1");
    if (!f_eval || !f_grad) throw ConfigError("problem: missing f callbacks");
    if (m < 0) throw ConfigError("problem: negative constraint count");
    if (m > 0 && (!g_eval || !g_jac)) {
      throw ConfigError("problem: missing g callbacks");
    }
    if (eq_A.rows() != eq_b.size() || (eq_A.rows() > 0 && eq_A.cols() != n)) {
      throw ConfigError("problem: equality dimensions inconsistent");
    }
    if (K.dim() != n) throw ConfigError("problem: set dimension mismatch");
    if (q.weights.size() != n) {
      throw ConfigError("problem: nonsmooth weights dimension mismatch");
    }
    K.validate_shape();
  }

  Vector eval_g(const Vector& x) const {
    return m > 0 ? g_eval(x) : Vector::Zero(0);
  }
  Matrix eval_g_jac(const Vector& x) const {
    return m > 0 ? g_jac(x) : Matrix::Zero(0, n);
  }
  Vector eval_h(const Vector& x) const {
    return p() > 0 ? Vector(eq_A * x + eq_b) : Vector::Zero(0);
  }
};

// Scalar infeasibility measure: the largest among the positive parts of the
// inequality constraints and the absolute equality residuals; 0 when there
// are no functional constraints. x in K is assumed, not measured here.
inline double phi_infeasibility(const ProblemSpec& problem, const Vector& x) {
  if (!x.allFinite()) throw PreconditionError("phi: x must be finite");
  double phi = 0.0;
  if (problem.m > 0) {
    const Vector g = problem.g_eval(x);
    for (int i = 0; i < g.size(); ++i) phi = std::max(phi, g(i));
  }
  if (problem.p() > 0) {
    phi = std::max(phi, problem.eval_h(x).lpNorm<Eigen::Infinity>());
  }
  return phi;
}

namespace detail {

// Draw a point from the interior of the box part of K (5% margin), then try
// to satisfy the halfspace rows by rejection; fall back to the box point.
// Sampling uses raw generator words for cross-platform determinism.
inline Vector sample_in_set(const PolyhedralSet& K, std::mt19937_64& rng) {
  const int n = K.dim();
  const auto draw_box = [&] {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      double lo = K.lower(i) > -kInf ? K.lower(i) : -1.0;
      double hi = K.upper(i) < kInf ? K.upper(i) : 1.0;
      const double margin = 0.05 * (hi - lo);
      x(i) = uniform(rng, lo + margin, hi - margin);
    }
    return x;
  };
  Vector x = draw_box();
  if (K.num_halfspaces() > 0) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      if ((K.C * x - K.u).maxCoeff() <= 0.0) break;
      x = draw_box();
    }
  }
  return x;
}

}  // namespace detail

// Central finite-difference validation of the analytic gradient callbacks at
// points sampled inside K. Relative tolerance 1e-4, step 1e-6*(1+|x_i|).
struct GradientCheckReport {
  double max_rel_error_f = 0.0;
  double max_rel_error_g = 0.0;
  Vector worst_x;
  bool passed = false;
  static constexpr double kRelTol = 1e-4;
};

inline GradientCheckReport check_gradients(const ProblemSpec& problem,
                                           int sample_count, unsigned seed) {
  problem.validate();
  if (sample_count < 1) throw PreconditionError("check_gradients: samples >= 1");
  std::mt19937_64 rng(seed);
  GradientCheckReport rep;
  rep.worst_x = Vector::Zero(problem.n);
  const auto fd = [&](const std::function<double(const Vector&)>& f,
                      const Vector& x) {
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * (1.0 + std::abs(x(i)));
      Vector xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
  };
  for (int t = 0; t < sample_count; ++t) {
    const Vector x = detail::sample_in_set(problem.K, rng);
    const Vector gf = problem.f_grad(x);
    const Vector gf_fd = fd(problem.f_eval, x);
    const double ef = (gf - gf_fd).lpNorm<Eigen::Infinity>() /
                      (1.0 + gf_fd.lpNorm<Eigen::Infinity>());
    double eg = 0.0;
    if (problem.m > 0) {
      const Matrix J = problem.g_jac(x);
      for (int i = 0; i < problem.m; ++i) {
        const int row = i;
        const Vector ji_fd = fd(
            [&](const Vector& y) { return problem.g_eval(y)(row); }, x);
        eg = std::max(eg, (J.row(i).transpose() - ji_fd).lpNorm<Eigen::Infinity>() /
                              (1.0 + ji_fd.lpNorm<Eigen::Infinity>()));
      }
    }
    if (std::max(ef, eg) > std::max(rep.max_rel_error_f, rep.max_rel_error_g)) {
      rep.worst_x = x;
    }
    rep.max_rel_error_f = std::max(rep.max_rel_error_f, ef);
    rep.max_rel_error_g = std::max(rep.max_rel_error_g, eg);
  }
  rep.passed = rep.max_rel_error_f <= GradientCheckReport::kRelTol &&
               rep.max_rel_error_g <= GradientCheckReport::kRelTol;
  return rep;
}

// --------------------------------------------------------------------------
// Closed-form (quadratic objective / quadratic-or-affine constraints) problem
// data: the serializable subset of ProblemSpec. Every shipped library
// instance is expressible in this form, which is what makes instances
// exportable to and loadable from JSON.
// --------------------------------------------------------------------------
struct QuadraticProblemData {
  int n = 0;
  Matrix P;  // f(x) = 1/2 x'Px + r'x + s
  Vector r;
  double s = 0.0;
  struct Constraint {  // g_i(x) = 1/2 x'Sx + t'x + v  (S empty => affine)
    Matrix S;
    Vector t;
    double v = 0.0;
    bool is_affine() const { return S.size() == 0; }
  };
  std::vector<Constraint> g;
  Matrix A;
  Vector b;
  Vector q_weights;
  PolyhedralSet K;

  // A constraint family is declared convex when every member is affine or has
  // PSD curvature; this feeds ProblemSpec::g_convex_flag.
  bool constraints_convex(double tol = 1e-10) const {
    for (const auto& gi : g) {
      if (gi.is_affine()) continue;
      Eigen::SelfAdjointEigenSolver<Matrix> es(gi.S,
                                               Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol) return false;
    }
    return true;
  }
};

inline ProblemSpec make_problem(const QuadraticProblemData& data) {
  auto d = std::make_shared<QuadraticProblemData>(data);
  ProblemSpec prob;
  prob.n = d->n;
  prob.f_eval = [d](const Vector& x) {
    return 0.5 * x.dot(d->P * x) + d->r.dot(x) + d->s;
  };
  prob.f_grad = [d](const Vector& x) { return Vector(d->P * x + d->r); };
  prob.q = d->q_weights.size() == 0 ? NonsmoothTerm::zero(d->n)
                                    : NonsmoothTerm::l1(d->q_weights);
  prob.m = static_cast<int>(d->g.size());
  if (prob.m > 0) {
    prob.g_eval = [d](const Vector& x) {
      Vector out(d->g.size());
      for (std::size_t i = 0; i < d->g.size(); ++i) {
        const auto& gi = d->g[i];
        out(static_cast<int>(i)) =
            (gi.is_affine() ? 0.0 : 0.5 * x.dot(gi.S * x)) + gi.t.dot(x) +
            gi.v;
      }
      return out;
    };
    prob.g_jac = [d](const Vector& x) {
      Matrix J(d->g.size(), d->n);
      for (std::size_t i = 0; i < d->g.size(); ++i) {
        const auto& gi = d->g[i];
        J.row(static_cast<int>(i)) =
            (gi.is_affine() ? gi.t : Vector(gi.S * x + gi.t)).transpose();
      }
      return J;
    };
  }
  prob.eq_A = d->A;
  prob.eq_b = d->b;
  prob.K = d->K;
  prob.g_convex_flag = d->constraints_convex();
  prob.validate();
  return prob;
}

// Practical surrogate for the equality-constraint regularity the theory
// leans on: report (not enforce) a rank-deficient A.
inline bool equality_rows_independent(const ProblemSpec& problem,
                                      double tol = 1e-10) {
  if (problem.p() == 0) return true;
  Eigen::ColPivHouseholderQR<Matrix> qr(problem.eq_A);
  qr.setThreshold(tol);
  return qr.rank() == problem.eq_A.rows();
}

}  // namespace gdsm
