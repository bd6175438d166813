// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <algorithm>
#include <utility>

#include "gdsm/core.hpp"

namespace gdsm {

// The closed convex set K, restricted to a polyhedron
//   K = { x : lower <= x <= upper, C x <= u }
// so that every subproblem over K (or K - x) stays an LP/QP for one inner
// engine. Box bounds may be +-infinity; rows of C are general halfspaces.
struct PolyhedralSet {
  Vector lower;  // may contain -inf
  Vector upper;  // may contain +inf
  Matrix C;      // r x n (r may be 0)
  Vector u;      // r

  static PolyhedralSet box(Vector lo, Vector hi) {
    PolyhedralSet K;
    K.lower = std::move(lo);
    K.upper = std::move(hi);
    K.C = Matrix::Zero(0, K.lower.size());
    K.u = Vector::Zero(0);
    K.validate_shape();
    return K;
  }

  static PolyhedralSet box_with_halfspaces(Vector lo, Vector hi, Matrix C_,
                                           Vector u_) {
    PolyhedralSet K;
    K.lower = std::move(lo);
    K.upper = std::move(hi);
    K.C = std::move(C_);
    K.u = std::move(u_);
    K.validate_shape();
    return K;
  }

  int dim() const { return static_cast<int>(lower.size()); }
  int num_halfspaces() const { return static_cast<int>(C.rows()); }

  void validate_shape() const {
    if (lower.size() != upper.size()) {
      throw ConfigError("polyhedral set: bound vectors differ in length");
    }
    if (C.rows() != u.size() || (C.rows() > 0 && C.cols() != lower.size())) {
      throw ConfigError("polyhedral set: halfspace dimensions inconsistent");
    }
    for (int i = 0; i < lower.size(); ++i) {
      if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) == kInf ||
          upper(i) == -kInf) {
        throw ConfigError("polyhedral set: malformed bounds");
      }
    }
    if (C.size() > 0 && !C.allFinite()) {
      throw ConfigError("polyhedral set: halfspace matrix must be finite");
    }
    if (u.size() > 0 && !u.allFinite()) {
      throw ConfigError("polyhedral set: halfspace offsets must be finite");
    }
  }

  // Largest constraint violation at x (0 when x is a member).
  double violation(const Vector& x) const {
    double v = 0.0;
    for (int i = 0; i < dim(); ++i) {
      if (lower(i) > -kInf) v = std::max(v, lower(i) - x(i));
      if (upper(i) < kInf) v = std::max(v, x(i) - upper(i));
    }
    if (num_halfspaces() > 0) {
      v = std::max(v, (C * x - u).maxCoeff());
    }
    return std::max(v, 0.0);
  }

  bool contains(const Vector& x, double tol) const {
    return violation(x) <= tol;
  }

  bool bounds_consistent() const {
    for (int i = 0; i < dim(); ++i) {
      if (lower(i) > upper(i)) return false;
    }
    return true;
  }

  bool box_is_bounded() const {
    for (int i = 0; i < dim(); ++i) {
      if (lower(i) == -kInf || upper(i) == kInf) return false;
    }
    return true;
  }

  // Estimate of the set's max-norm diameter, used only to pick default
  // trust-region-style parameters: the largest finite box range (1 if no
  // coordinate has a finite range).
  double diameter_inf_estimate() const {
    double d = 0.0;
    bool any_finite = false;
    for (int i = 0; i < dim(); ++i) {
      if (lower(i) > -kInf && upper(i) < kInf) {
        any_finite = true;
        d = std::max(d, upper(i) - lower(i));
      }
    }
    return any_finite ? d : 1.0;
  }

  Vector clamp_to_box(Vector x) const {
    for (int i = 0; i < dim(); ++i) {
      x(i) = std::min(std::max(x(i), lower(i)), upper(i));
    }
    return x;
  }

  // Midpoint of the finite part of the box (0 for two-sided-infinite
  // coordinates), used as the default start before projection.
  Vector box_center() const {
    Vector c(dim());
    for (int i = 0; i < dim(); ++i) {
      const bool lo_f = lower(i) > -kInf, hi_f = upper(i) < kInf;
      if (lo_f && hi_f) {
        c(i) = 0.5 * (lower(i) + upper(i));
      } else if (lo_f) {
        c(i) = lower(i) + 1.0;
      } else if (hi_f) {
        c(i) = upper(i) - 1.0;
      } else {
        c(i) = 0.0;
      }
    }
    return c;
  }
};

}  // namespace gdsm
