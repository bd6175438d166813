// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "gdsm/core.hpp"
#include "gdsm/problem.hpp"

namespace gdsm {

// Facts about a catalog instance that tests and reports may rely on.
struct KnownFacts {
  std::vector<Vector> known_kkt_points;  // verified KKT points (not exhaustive)
  double optimal_value = std::numeric_limits<double>::quiet_NaN();
  std::string notes;
  bool convex_path_applicable = false;  // convex g + bounded set: the
                                        // convex-case algorithm may be used
};

struct LibraryInstance {
  std::string id;
  QuadraticProblemData data;
  ProblemSpec problem;
  KnownFacts facts;
};

namespace detail {

inline Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace detail

// T1: one-dimensional smooth test.
//   min x^2  s.t.  1 - x <= 0,  x in [-2, 2].
// Unique KKT point x = 1 (multiplier 2), optimal value 1.
inline LibraryInstance make_t1() {
  LibraryInstance inst;
  inst.id = "T1";
  QuadraticProblemData& d = inst.data;
  d.n = 1;
  d.P = Matrix::Constant(1, 1, 2.0);
  d.r = Vector::Zero(1);
  d.s = 0.0;
  QuadraticProblemData::Constraint c;
  c.t = detail::vec1(-1.0);
  c.v = 1.0;
  d.g.push_back(c);
  d.K = PolyhedralSet::box(detail::vec1(-2.0), detail::vec1(2.0));
  inst.problem = make_problem(d);
  inst.facts.known_kkt_points = {detail::vec1(1.0)};
  inst.facts.optimal_value = 1.0;
  inst.facts.convex_path_applicable = true;
  inst.facts.notes =
      "Affine inequality; the minimizer sits on the constraint boundary "
      "with multiplier 2.";
  return inst;
}

// T2: nonsmooth objective on the unit disk.
//   min -x1^2 + x2 + |x1| + |x2|  s.t.  |x|^2 - 1 <= 0,  x in [-2, 2]^2.
// Optimal value 0. (0, 0) is a verified KKT point; the full stationary set
// consists of the segments x1 in {-1/2, 0, 1/2}, x2 in [-sqrt(1 - x1^2), 0]
// together with (+-1, 0), all of which satisfy the KKT conditions.
inline LibraryInstance make_t2() {
  LibraryInstance inst;
  inst.id = "T2";
  QuadraticProblemData& d = inst.data;
  d.n = 2;
  d.P = Matrix::Zero(2, 2);
  d.P(0, 0) = -2.0;
  d.r = detail::vec2(0.0, 1.0);
  d.s = 0.0;
  QuadraticProblemData::Constraint c;
  c.S = Matrix::Identity(2, 2) * 2.0;
  c.t = Vector::Zero(2);
  c.v = -1.0;
  d.g.push_back(c);
  d.q_weights = detail::vec2(1.0, 1.0);
  d.K = PolyhedralSet::box(detail::vec2(-2.0, -2.0), detail::vec2(2.0, 2.0));
  inst.problem = make_problem(d);
  inst.facts.known_kkt_points = {detail::vec2(0.0, 0.0)};
  inst.facts.optimal_value = 0.0;
  inst.facts.convex_path_applicable = true;
  inst.facts.notes =
      "Nonconvex smooth part plus l1 term over the unit disk. Stationary "
      "set: {x1 in {-1/2, 0, 1/2}} x {x2 in [-sqrt(1 - x1^2), 0]} united "
      "with (+-1, 0); the optimal value 0 is attained at (0, x2 <= 0) and "
      "(+-1, 0).";
  return inst;
}

// T3: nonconvex inequality with an equality row.
//   min x1^2 + x2^2  s.t.  1 - x1^2 - x2^2 <= 0,  x1 + x2 - 2 = 0,
//   x in [-2, 2]^2.
// Feasible set: the segment from (0, 2) to (2, 0); the inequality is
// strictly inactive on it. Unique KKT point (1, 1) with equality multiplier
// -2; optimal value 2. The convex-case algorithm does not apply (the
// inequality is concave).
inline LibraryInstance make_t3() {
  LibraryInstance inst;
  inst.id = "T3";
  QuadraticProblemData& d = inst.data;
  d.n = 2;
  d.P = Matrix::Identity(2, 2) * 2.0;
  d.r = Vector::Zero(2);
  d.s = 0.0;
  QuadraticProblemData::Constraint c;
  c.S = Matrix::Identity(2, 2) * -2.0;
  c.t = Vector::Zero(2);
  c.v = 1.0;
  d.g.push_back(c);
  d.A = Matrix::Constant(1, 2, 1.0);
  d.b = detail::vec1(-2.0);
  d.K = PolyhedralSet::box(detail::vec2(-2.0, -2.0), detail::vec2(2.0, 2.0));
  inst.problem = make_problem(d);
  inst.facts.known_kkt_points = {detail::vec2(1.0, 1.0)};
  inst.facts.optimal_value = 2.0;
  inst.facts.convex_path_applicable = false;
  inst.facts.notes =
      "Feasible set is the segment (0,2)-(2,0); the nonconvex inequality is "
      "strictly inactive there. KKT at (1,1) with equality multiplier -2.";
  return inst;
}

// T4: concave objective on a simplex face.
//   min -|x|^2  s.t.  x1 + x2 - 1 = 0,  x in [0, 1]^2.
// Minimizers (0, 1) and (1, 0) with value -1; (1/2, 1/2) is an interior
// stationary (KKT) point that is the segment's worst point.
inline LibraryInstance make_t4() {
  LibraryInstance inst;
  inst.id = "T4";
  QuadraticProblemData& d = inst.data;
  d.n = 2;
  d.P = Matrix::Identity(2, 2) * -2.0;
  d.r = Vector::Zero(2);
  d.s = 0.0;
  d.A = Matrix::Constant(1, 2, 1.0);
  d.b = detail::vec1(-1.0);
  d.K = PolyhedralSet::box(detail::vec2(0.0, 0.0), detail::vec2(1.0, 1.0));
  inst.problem = make_problem(d);
  inst.facts.known_kkt_points = {detail::vec2(0.0, 1.0),
                                 detail::vec2(1.0, 0.0)};
  inst.facts.optimal_value = -1.0;
  inst.facts.convex_path_applicable = true;
  inst.facts.notes =
      "Both endpoints of the feasible segment are global minimizers; the "
      "midpoint (1/2, 1/2) is also a KKT point (the segment's maximizer).";
  return inst;
}

// RAND-QP(seed, n, m): random quadratic objective (generally indefinite)
// with m convex quadratic inequalities that hold strictly at the box center
// (so a Slater point exists), a bounded random box, a sparse l1 term, and no
// equalities. Fully determined by (seed, n, m).
inline LibraryInstance make_rand_qp(unsigned seed, int n, int m) {
  if (n < 1 || n > 200) throw ConfigError("RAND-QP: n must lie in [1, 200]");
  if (m < 0 || m > 200) throw ConfigError("RAND-QP: m must lie in [0, 200]");
  std::mt19937_64 rng(0x5eed0000ULL + seed);
  LibraryInstance inst;
  {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "RAND-QP(%u,%d,%d)", seed, n, m);
    inst.id = buf;
  }
  QuadraticProblemData& d = inst.data;
  d.n = n;
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = uniform(rng, -1.0, 1.0);
  }
  d.P = 0.5 * (M + M.transpose());
  d.r = Vector::Zero(n);
  for (int i = 0; i < n; ++i) d.r(i) = uniform(rng, -1.0, 1.0);
  d.s = 0.0;

  Vector lower(n), upper(n);
  for (int i = 0; i < n; ++i) lower(i) = uniform(rng, -2.0, -1.0);
  for (int i = 0; i < n; ++i) upper(i) = uniform(rng, 1.0, 2.0);
  d.K = PolyhedralSet::box(lower, upper);
  const Vector center = Vector(0.5 * (lower + upper));

  for (int k = 0; k < m; ++k) {
    QuadraticProblemData::Constraint c;
    Matrix L(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) L(i, j) = uniform(rng, -1.0, 1.0);
    }
    c.S = Matrix((L.transpose() * L) / static_cast<double>(n));
    c.t = Vector::Zero(n);
    for (int i = 0; i < n; ++i) c.t(i) = uniform(rng, -1.0, 1.0);
    const double margin = uniform(rng, 0.1, 1.0);
    c.v = -(0.5 * center.dot(c.S * center) + c.t.dot(center)) - margin;
    d.g.push_back(c);
  }

  d.q_weights = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const bool active = u01(rng) < 0.5;
    const double w = uniform(rng, 0.0, 0.3);  // drawn either way: keeps the
                                              // stream layout fixed
    d.q_weights(i) = active ? w : 0.0;
  }

  inst.problem = make_problem(d);
  inst.facts.convex_path_applicable = true;  // PSD quadratics, bounded box
  inst.facts.notes =
      "Randomly generated; the box center is a strict Slater point of every "
      "inequality. Optimal value unknown.";
  return inst;
}

inline std::vector<std::string> library_catalog() {
  return {"T1", "T2", "T3", "T4", "RAND-QP(seed,n,m)"};
}

// Parses "T1".."T4" or "RAND-QP(seed,n,m)" and builds the instance.
inline LibraryInstance get_instance(const std::string& id) {
  if (id == "T1") return make_t1();
  if (id == "T2") return make_t2();
  if (id == "T3") return make_t3();
  if (id == "T4") return make_t4();
  if (id.rfind("RAND-QP(", 0) == 0) {
    unsigned seed = 0;
    int n = 0, m = 0;
    char tail = 0;
    const int got =
        std::sscanf(id.c_str(), "RAND-QP(%u,%d,%d%c", &seed, &n, &m, &tail);
    if (got == 4 && tail == ')' &&
        id.back() == ')') {
      return make_rand_qp(seed, n, m);
    }
    throw ConfigError("malformed RAND-QP id; expected RAND-QP(seed,n,m): " +
                      id);
  }
  throw ConfigError("unknown problem id: " + id +
                    " (catalog: T1, T2, T3, T4, RAND-QP(seed,n,m))");
}

}  // namespace gdsm
