// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Stationarity residual, terminal-point classification, and the ghost
// penalty diagnostic samples.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gdsm/diagnostics.hpp"
#include "gdsm/library.hpp"
#include "gdsm/subproblems.hpp"
#include "gdsm/surrogate.hpp"

using gdsm::Matrix;
using gdsm::ProblemSpec;
using gdsm::StationarityEvidence;
using gdsm::StationarityKind;
using gdsm::Vector;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector empty() { return Vector::Zero(0); }

}  // namespace

TEST_CASE("kkt residual at the pinned 1-D solution") {
  const ProblemSpec t1 = gdsm::make_t1().problem;
  // grad f(1) = 2, grad g(1) = -1: the multiplier 2 closes the system.
  CHECK(gdsm::kkt_residual(t1, vec1(1.0), vec1(2.0), empty()) < 1e-12);
  // With a zero multiplier nothing cancels the gradient at an interior-of-K
  // point: the residual is |grad f(1)| = 2.
  CHECK(gdsm::kkt_residual(t1, vec1(1.0), vec1(0.0), empty()) ==
        Catch::Approx(2.0).margin(1e-10));
}

TEST_CASE("kkt residual vanishes at an unconstrained stationary point") {
  gdsm::QuadraticProblemData d;
  d.n = 2;
  d.P = Matrix::Identity(2, 2);
  d.r = Vector::Zero(2);
  d.K = gdsm::PolyhedralSet::box(vec2(-1.0, -1.0), vec2(1.0, 1.0));
  const ProblemSpec prob = gdsm::make_problem(d);
  CHECK(gdsm::kkt_residual(prob, vec2(0.0, 0.0), empty(), empty()) == 0.0);
  // Off the stationary point the residual is the gradient norm.
  CHECK(gdsm::kkt_residual(prob, vec2(0.3, -0.4), empty(), empty()) ==
        Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("normal cone of active box faces absorbs outward gradients") {
  const ProblemSpec t4 = gdsm::make_t4().problem;
  // At (0, 1): grad f = (0, -2); the lower bound on x1 and upper bound on x2
  // are active, so the cone cancels the gradient with pi = 0.
  CHECK(gdsm::kkt_residual(t4, vec2(0.0, 1.0), empty(), vec1(0.0)) < 1e-8);
  // The equality multiplier can do the same job at the midpoint.
  CHECK(gdsm::kkt_residual(t4, vec2(0.5, 0.5), empty(), vec1(1.0)) < 1e-8);
  // A wrong multiplier leaves a residual: v = (-1 + pi) * (1, 1).
  CHECK(gdsm::kkt_residual(t4, vec2(0.5, 0.5), empty(), vec1(0.0)) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("l1 subdifferential absorbs gradients at kink coordinates") {
  const ProblemSpec t2 = gdsm::make_t2().problem;
  // At the origin grad f = (0, 1) and both coordinates sit at the kink with
  // weight 1, so the subgradient box [-1,1]^2 cancels it (xi = 0).
  CHECK(gdsm::kkt_residual(t2, vec2(0.0, 0.0), vec1(0.0), empty()) < 1e-8);
  // At (0, -0.5) the x2 subgradient is pinned to -1: grad f + (0, -1) +
  // rho_1 e_1 = 0 with rho_1 = 0 free in [-1, 1].
  CHECK(gdsm::kkt_residual(t2, vec2(0.0, -0.5), vec1(0.0), empty()) < 1e-8);
}

TEST_CASE("kkt residual is invariant under row permutation and duplicates") {
  // Two-constraint problem evaluated both in original and swapped row order.
  gdsm::QuadraticProblemData d;
  d.n = 2;
  d.P = Matrix::Identity(2, 2) * 2.0;
  d.r = vec2(0.5, -1.0);
  gdsm::QuadraticProblemData::Constraint ball;
  ball.S = Matrix::Identity(2, 2) * 2.0;
  ball.t = Vector::Zero(2);
  ball.v = -1.0;
  gdsm::QuadraticProblemData::Constraint plane;
  plane.t = vec2(1.0, 1.0);
  plane.v = -0.5;
  d.g = {ball, plane};
  d.K = gdsm::PolyhedralSet::box(vec2(-2.0, -2.0), vec2(2.0, 2.0));
  const ProblemSpec ab = gdsm::make_problem(d);
  std::swap(d.g[0], d.g[1]);
  const ProblemSpec ba = gdsm::make_problem(d);

  const Vector x = vec2(0.7, 0.1);
  const Vector xi = vec2(0.3, 0.8);
  const double r1 = gdsm::kkt_residual(ab, x, xi, empty());
  const double r2 = gdsm::kkt_residual(ba, x, vec2(0.8, 0.3), empty());
  CHECK(r1 == Catch::Approx(r2).margin(1e-10));

  // Appending a duplicate of the first constraint with zero multiplier
  // leaves the residual unchanged.
  d.g = {ball, plane, ball};
  const ProblemSpec dup = gdsm::make_problem(d);
  Vector xi3(3);
  xi3 << 0.3, 0.8, 0.0;
  CHECK(gdsm::kkt_residual(dup, x, xi3, empty()) ==
        Catch::Approx(r1).margin(1e-10));
}

TEST_CASE("kkt residual validates its inputs") {
  const ProblemSpec t1 = gdsm::make_t1().problem;
  CHECK_THROWS_AS(gdsm::kkt_residual(t1, vec2(0.0, 0.0), vec1(0.0), empty()),
                  gdsm::PreconditionError);
  CHECK_THROWS_AS(gdsm::kkt_residual(t1, vec1(0.0), empty(), empty()),
                  gdsm::PreconditionError);  // xi size != m
  CHECK_THROWS_AS(gdsm::kkt_residual(t1, vec1(0.0), vec1(0.0), vec1(0.0)),
                  gdsm::PreconditionError);  // pi size != p
}

TEST_CASE("kkt report carries complementarity and infeasibility") {
  const ProblemSpec t1 = gdsm::make_t1().problem;
  // x = 1.5 is strictly feasible (g = -0.5); a positive multiplier leaves a
  // complementarity residual of |1 * (-0.5)|.
  const auto rep = gdsm::kkt_report(t1, vec1(1.5), vec1(1.0), empty());
  CHECK(rep.primal_infeasibility == 0.0);
  CHECK(rep.complementarity_residual == Catch::Approx(0.5));
  CHECK(rep.stationarity_residual == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("classification tree branches") {
  const gdsm::ClassificationThresholds tols;
  CHECK(tols.tol_feas == 1e-6);
  CHECK(tols.tol_theta == 1e-9);
  CHECK(tols.tol_d == 1e-7);
  CHECK(tols.tol_kkt == 1e-5);
  CHECK(tols.multiplier_blowup == 1e6);

  StationarityEvidence e;
  e.phi = 0.0;
  e.kkt_residual = 1e-10;
  CHECK(gdsm::classify_evidence(e, tols) == StationarityKind::KKT);

  e = StationarityEvidence{};
  e.phi = 0.5;
  e.theta = 1e-12;
  CHECK(gdsm::classify_evidence(e, tols) == StationarityKind::ESCandidate);

  e = StationarityEvidence{};
  e.phi = 1e-14;
  e.d_norm = 1e-9;
  e.kkt_residual = 0.3;
  e.multiplier_norm = 1e7;
  CHECK(gdsm::classify_evidence(e, tols) == StationarityKind::FJCandidate);

  // Far from stationarity: no branch fires.
  e = StationarityEvidence{};
  e.phi = 0.5;
  e.theta = 0.2;
  e.d_norm = 1.0;
  e.kkt_residual = 2.0;
  CHECK(gdsm::classify_evidence(e, tols) == StationarityKind::Unclassified);

  // Feasible with a large residual but small multipliers: still unclassified
  // (no blow-up evidence).
  e = StationarityEvidence{};
  e.phi = 0.0;
  e.d_norm = 1e-9;
  e.kkt_residual = 0.3;
  e.multiplier_norm = 10.0;
  CHECK(gdsm::classify_evidence(e, tols) == StationarityKind::Unclassified);
}

TEST_CASE("classify_point composes the evidence at a solved point") {
  const gdsm::LibraryInstance t1 = gdsm::make_t1();
  const gdsm::SurrogateModel model = gdsm::make_default_model(t1.problem);
  const gdsm::AlgoParams params =
      gdsm::AlgoParams::defaults_for(t1.problem.K);
  const Vector x = vec1(1.0);
  const auto rep = gdsm::compute_kappa(t1.problem, x, params);
  const auto dir =
      gdsm::solve_direction_general(t1.problem, model, x, rep.kappa, params);
  const auto label = gdsm::classify_point(t1.problem, x, rep, dir);
  CHECK(label.kind == StationarityKind::KKT);
  CHECK(label.evidence.phi == 0.0);
  CHECK(label.evidence.d_norm < 1e-7);
  CHECK(label.evidence.kkt_residual < 1e-6);
}

TEST_CASE("ghost penalty samples") {
  const ProblemSpec t1 = gdsm::make_t1().problem;
  // Infeasible x = 0: f + q = 0 and phi = 1, so W = 1 / eps.
  const auto samples =
      gdsm::ghost_penalty_samples(t1, vec1(0.0), {0.5, 0.25});
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].first == 0.5);
  CHECK(samples[0].second == Catch::Approx(2.0));
  CHECK(samples[1].second == Catch::Approx(4.0));
  // Halving eps adds exactly phi / eps.
  CHECK(samples[1].second - samples[0].second ==
        Catch::Approx(1.0 / 0.5));

  // Feasible x: W = f + q independent of eps.
  const auto feas =
      gdsm::ghost_penalty_samples(t1, vec1(1.5), {1.0, 0.1, 0.01});
  for (const auto& [eps, w] : feas) {
    (void)eps;
    CHECK(w == Catch::Approx(2.25));
  }
}
