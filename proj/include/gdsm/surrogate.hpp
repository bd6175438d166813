// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "gdsm/core.hpp"
#include "gdsm/problem.hpp"

namespace gdsm {

// Surrogate pair (f~, g~) used by the direction subproblems: f~(.;x) is a
// strongly convex model of f around x, g~(.;x) a convex model of g. The
// consistency contract (checked by check_surrogate_consistency):
//   value/gradient agreement at d = 0:
//     grad_d f~(0;x) = grad f(x),  g~(0;x) = g(x),  grad_d g~(0;x) = grad g(x)
//   strong convexity: (grad_d f~(d1;x) - grad_d f~(d2;x))'(d1-d2)
//                       >= c |d1-d2|^2.
// The shipped default is the quadratic/linear model below; the interface
// admits other models, but the subproblem engine only accepts
// quadratic/linear ones (everything stays an LP/QP).
struct SurrogateModel {
  std::function<double(const Vector&, const Vector&)> f_tilde_eval;  // (d, x)
  std::function<Vector(const Vector&, const Vector&)> f_tilde_grad;  // (d, x)
  std::function<Vector(const Vector&, const Vector&)> g_tilde_eval;  // (d, x)
  std::function<Matrix(const Vector&, const Vector&)> g_tilde_jac;   // (d, x)
  double strong_convexity_c = 0.0;
  bool is_quadratic_linear = false;
  Matrix B;  // curvature of the default model; empty for user models

  void validate() const {
    if (!f_tilde_eval || !f_tilde_grad) {
      throw ConfigError("surrogate: missing objective-model callbacks");
    }
    if (strong_convexity_c <= 0.0) {
      throw ConfigError("surrogate: strong-convexity modulus must be > 0");
    }
  }
};

// Default model: f~(d;x) = grad f(x)'d + 1/2 d'Bd with B symmetric positive
// definite, and g~(d;x) the constraint linearization g(x) + grad g(x)'d.
inline SurrogateModel make_quadratic_linear_model(const ProblemSpec& problem,
                                                  const Matrix& B) {
  if (B.rows() != problem.n || B.cols() != problem.n) {
    throw ModelError("curvature matrix has wrong shape");
  }
  if ((B - B.transpose()).lpNorm<Eigen::Infinity>() >
      1e-10 * (1.0 + B.lpNorm<Eigen::Infinity>())) {
    throw ModelError("curvature matrix must be symmetric");
  }
  const Eigen::LLT<Matrix> llt(B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
  const double eig_min = es.eigenvalues().minCoeff();
  if (llt.info() != Eigen::Success || eig_min <= 0.0) {
    throw ModelError("curvature matrix must be positive definite");
  }

  auto Bp = std::make_shared<Matrix>(B);
  auto f_grad = problem.f_grad;
  auto g_eval = problem.g_eval;
  auto g_jac = problem.g_jac;
  SurrogateModel model;
  model.f_tilde_eval = [Bp, f_grad](const Vector& d, const Vector& x) {
    return f_grad(x).dot(d) + 0.5 * d.dot((*Bp) * d);
  };
  model.f_tilde_grad = [Bp, f_grad](const Vector& d, const Vector& x) {
    return Vector(f_grad(x) + (*Bp) * d);
  };
  if (problem.m > 0) {
    model.g_tilde_eval = [g_eval, g_jac](const Vector& d, const Vector& x) {
      return Vector(g_eval(x) + g_jac(x) * d);
    };
    model.g_tilde_jac = [g_jac](const Vector& d, const Vector& x) {
      (void)d;
      return g_jac(x);
    };
  }
  model.strong_convexity_c = eig_min;
  model.is_quadratic_linear = true;
  model.B = B;
  return model;
}

inline SurrogateModel make_default_model(const ProblemSpec& problem) {
  return make_quadratic_linear_model(problem,
                                     Matrix::Identity(problem.n, problem.n));
}

// --------------------------------------------------------------------------
// Surrogate consistency harness.
// --------------------------------------------------------------------------
enum class SurrogateCheckItem {
  None,
  StrongConvexity,            // declared modulus not met by the model gradient
  GradientConsistencyAtZero,  // grad_d f~(0;x) != grad f(x)
  ValueConsistencyAtZero,     // g~(0;x) != g(x)
  JacobianConsistencyAtZero,  // grad_d g~(0;x) != grad g(x)
};

inline const char* to_string(SurrogateCheckItem item) {
  switch (item) {
    case SurrogateCheckItem::StrongConvexity:
      return "strong-convexity modulus";
    case SurrogateCheckItem::GradientConsistencyAtZero:
      return "objective-gradient consistency at d=0";
    case SurrogateCheckItem::ValueConsistencyAtZero:
      return "constraint-value consistency at d=0";
    case SurrogateCheckItem::JacobianConsistencyAtZero:
      return "constraint-jacobian consistency at d=0";
    default:
      return "none";
  }
}

struct SurrogateConsistencyReport {
  double max_gradient_mismatch = 0.0;   // grad_d f~(0;x) vs grad f(x)
  double max_value_mismatch = 0.0;      // g~(0;x) vs g(x)
  double max_jacobian_mismatch = 0.0;   // grad_d g~(0;x) vs grad g(x)
  double strong_convexity_violation = 0.0;
  double tolerance_used = 0.0;
  bool passed = false;
  SurrogateCheckItem failed_item = SurrogateCheckItem::None;
  Vector failure_point;  // x at which the failed item was worst
  std::string message;
};

// Samples points x in K and direction pairs, and checks the surrogate
// contract. Tolerance 1e-10 for the shipped quadratic/linear model (whose
// identities hold by construction), 1e-6 for user-supplied models.
// Deterministic for a fixed seed.
inline SurrogateConsistencyReport check_surrogate_consistency(
    const ProblemSpec& problem, const SurrogateModel& model, int sample_count,
    unsigned seed) {
  if (sample_count < 1) {
    throw PreconditionError("surrogate check: sample_count >= 1");
  }
  model.validate();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SurrogateConsistencyReport rep;
  rep.tolerance_used = model.is_quadratic_linear ? 1e-10 : 1e-6;
  rep.failure_point = Vector::Zero(problem.n);
  const Vector zero = Vector::Zero(problem.n);
  Vector worst_grad_x = zero, worst_val_x = zero, worst_jac_x = zero,
         worst_mono_x = zero;

  for (int t = 0; t < sample_count; ++t) {
    const Vector x = detail::sample_in_set(problem.K, rng);

    const double grad_mismatch =
        (model.f_tilde_grad(zero, x) - problem.f_grad(x))
            .lpNorm<Eigen::Infinity>();
    if (grad_mismatch > rep.max_gradient_mismatch) worst_grad_x = x;
    rep.max_gradient_mismatch =
        std::max(rep.max_gradient_mismatch, grad_mismatch);

    if (problem.m > 0 && model.g_tilde_eval) {
      const double value_mismatch =
          (model.g_tilde_eval(zero, x) - problem.g_eval(x))
              .lpNorm<Eigen::Infinity>();
      if (value_mismatch > rep.max_value_mismatch) worst_val_x = x;
      rep.max_value_mismatch = std::max(rep.max_value_mismatch, value_mismatch);
      if (model.g_tilde_jac) {
        const double jac_mismatch =
            (model.g_tilde_jac(zero, x) - problem.g_jac(x))
                .lpNorm<Eigen::Infinity>();
        if (jac_mismatch > rep.max_jacobian_mismatch) worst_jac_x = x;
        rep.max_jacobian_mismatch =
            std::max(rep.max_jacobian_mismatch, jac_mismatch);
      }
    }

    // Strong convexity of f~(.;x) via the monotone-gradient inequality on a
    // sampled direction pair.
    Vector d1(problem.n), d2(problem.n);
    for (int i = 0; i < problem.n; ++i) {
      d1(i) = uniform(rng, -1.0, 1.0);
      d2(i) = uniform(rng, -1.0, 1.0);
    }
    const Vector delta = d1 - d2;
    const double lhs =
        (model.f_tilde_grad(d1, x) - model.f_tilde_grad(d2, x)).dot(delta);
    const double required = model.strong_convexity_c * delta.squaredNorm();
    const double violation = required - lhs;
    if (violation > rep.strong_convexity_violation) worst_mono_x = x;
    rep.strong_convexity_violation =
        std::max(rep.strong_convexity_violation, violation);
  }

  const double tol = rep.tolerance_used;
  if (rep.max_gradient_mismatch > tol) {
    rep.failed_item = SurrogateCheckItem::GradientConsistencyAtZero;
    rep.failure_point = worst_grad_x;
  } else if (rep.max_value_mismatch > tol) {
    rep.failed_item = SurrogateCheckItem::ValueConsistencyAtZero;
    rep.failure_point = worst_val_x;
  } else if (rep.max_jacobian_mismatch > tol) {
    rep.failed_item = SurrogateCheckItem::JacobianConsistencyAtZero;
    rep.failure_point = worst_jac_x;
  } else if (rep.strong_convexity_violation > tol) {
    rep.failed_item = SurrogateCheckItem::StrongConvexity;
    rep.failure_point = worst_mono_x;
  }
  rep.passed = rep.failed_item == SurrogateCheckItem::None;
  if (!rep.passed) {
    std::ostringstream os;
    os.precision(12);
    os << "surrogate check failed: " << to_string(rep.failed_item)
       << " violated at x = [" << rep.failure_point.transpose() << "]";
    rep.message = os.str();
  }
  return rep;
}

}  // namespace gdsm
