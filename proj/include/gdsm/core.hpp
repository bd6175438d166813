// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace gdsm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// --------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto process exit codes.
// --------------------------------------------------------------------------
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (bad parameter ranges, wrong algorithm for the
// declared problem structure, malformed inputs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its stated precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Surrogate-model construction failed (e.g. non-positive-definite curvature).
class ModelError : public Error {
 public:
  using Error::Error;
};

// File / serialization problems.
class IoError : public Error {
 public:
  using Error::Error;
};

// The inner LP/QP engine failed on a subproblem that the caller needed
// solved. Carries a plain-text dump of the subproblem for reproduction.
class SubsolverError : public Error {
 public:
  SubsolverError(const std::string& what, std::string subproblem_dump)
      : Error(what), subproblem_dump_(std::move(subproblem_dump)) {}
  const std::string& subproblem_dump() const { return subproblem_dump_; }

 private:
  std::string subproblem_dump_;
};

// --------------------------------------------------------------------------
// Logging, gated by the GHOST_DSM_LOG environment variable:
//   (unset) or "warn" -> warnings only; "info"; "debug"; "quiet" -> nothing.
// --------------------------------------------------------------------------
enum class LogLevel : int { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("GHOST_DSM_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string v(env);
    if (v == "quiet" || v == "0") return LogLevel::Quiet;
    if (v == "info" || v == "2") return LogLevel::Info;
    if (v == "debug" || v == "3") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  static const char* tags[] = {"", "[warn] ", "[info] ", "[debug] "};
  if (static_cast<int>(level) <= static_cast<int>(log_level()) &&
      level != LogLevel::Quiet) {
    std::cerr << "ghost-dsm " << tags[static_cast<int>(level)] << msg << "\n";
  }
}

// --------------------------------------------------------------------------
// Deterministic sampling helpers. Uniforms are derived from raw mt19937_64
// words (not std::uniform_real_distribution) so streams are reproducible
// independent of the standard-library implementation.
// --------------------------------------------------------------------------
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

inline bool approx_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

}  // namespace gdsm
