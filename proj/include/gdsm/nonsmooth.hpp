// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <cmath>
#include <utility>

#include "gdsm/core.hpp"

namespace gdsm {

// Convex nonsmooth objective term q. Restricted to the weighted l1 family
// q(x) = sum_i w_i |x_i| with w >= 0; w = 0 is the smooth (Zero) case. The
// restriction keeps every direction subproblem a QP via an epigraph
// reformulation.
struct NonsmoothTerm {
  enum class Kind { Zero, L1 };

  Kind kind = Kind::Zero;
  Vector weights;  // always sized n; all zeros in the Zero case

  static NonsmoothTerm zero(int n) {
    NonsmoothTerm q;
    q.kind = Kind::Zero;
    q.weights = Vector::Zero(n);
    return q;
  }

  static NonsmoothTerm l1(Vector w) {
    if (!w.allFinite() || (w.size() > 0 && w.minCoeff() < 0.0)) {
      throw ConfigError("l1 weights must be finite and nonnegative");
    }
    NonsmoothTerm q;
    q.kind = (w.size() == 0 || w.lpNorm<Eigen::Infinity>() == 0.0)
                 ? Kind::Zero
                 : Kind::L1;
    q.weights = std::move(w);
    return q;
  }

  bool is_zero() const { return kind == Kind::Zero; }

  double eval(const Vector& x) const {
    return weights.dot(x.cwiseAbs());
  }

  // Global Lipschitz constant of q (used to sanity-bound trace quantities).
  double lipschitz_const() const { return weights.lpNorm<1>(); }

  // Coordinate-wise subdifferential box of q at x: the i-th component of any
  // subgradient lies in [lower(i), upper(i)]. Singleton +-w_i away from zero,
  // the full interval [-w_i, w_i] at (numerically) zero coordinates.
  static constexpr double kZeroCoordinateTol = 1e-10;
  std::pair<Vector, Vector> subgradient_box(const Vector& x) const {
    const int n = static_cast<int>(weights.size());
    Vector lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      if (x(i) > kZeroCoordinateTol) {
        lo(i) = hi(i) = weights(i);
      } else if (x(i) < -kZeroCoordinateTol) {
        lo(i) = hi(i) = -weights(i);
      } else {
        lo(i) = -weights(i);
        hi(i) = weights(i);
      }
    }
    return {lo, hi};
  }
};

}  // namespace gdsm
