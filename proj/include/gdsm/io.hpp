// Copyright 2026 the ghost-dsm authors
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gdsm/core.hpp"
#include "gdsm/driver.hpp"
#include "gdsm/library.hpp"
#include "gdsm/problem.hpp"
#include "gdsm/surrogate.hpp"

namespace gdsm {

namespace detail {

// Shortest decimal form that round-trips a double (printf %.17g).
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Compact form used for names such as the ghost-penalty column headers.
inline std::string fmt_compact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline nlohmann::json matrix_to_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) {
    // JSON has no infinities; anything at or beyond 1e300 stands for one.
    const double x = v(i);
    if (std::isinf(x)) {
      arr.push_back(x > 0 ? 1e308 : -1e308);
    } else {
      arr.push_back(x);
    }
  }
  return arr;
}

inline double json_to_bound(const nlohmann::json& j) {
  const double v = j.get<double>();
  if (std::abs(v) >= 1e300) return v > 0 ? kInf : -kInf;
  return v;
}

inline Vector json_to_vector(const nlohmann::json& j, bool bounds = false) {
  if (!j.is_array()) throw IoError("expected a JSON array of numbers");
  Vector v(static_cast<int>(j.size()));
  int i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw IoError("expected a JSON array of numbers");
    v(i++) = bounds ? json_to_bound(e) : e.get<double>();
  }
  return v;
}

inline Matrix json_to_matrix(const nlohmann::json& j) {
  if (!j.is_array()) throw IoError("expected a JSON array of arrays");
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(0, 0);
  int cols = -1;
  Matrix M;
  int i = 0;
  for (const auto& row : j) {
    const Vector r = json_to_vector(row);
    if (cols < 0) {
      cols = static_cast<int>(r.size());
      M.resize(rows, cols);
    } else if (r.size() != cols) {
      throw IoError("matrix rows have inconsistent lengths");
    }
    M.row(i++) = r.transpose();
  }
  return M;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Problem (de)serialization.
// --------------------------------------------------------------------------
inline nlohmann::json problem_data_to_json(const QuadraticProblemData& d) {
  nlohmann::json j;
  j["n"] = d.n;
  j["objective"] = {{"kind", "quadratic"},
                    {"P", detail::matrix_to_json(d.P)},
                    {"r", detail::vector_to_json(d.r)},
                    {"s", d.s}};
  if (d.q_weights.size() > 0 && d.q_weights.maxCoeff() > 0.0) {
    j["q"] = {{"weights", detail::vector_to_json(d.q_weights)}};
  }
  if (!d.g.empty()) {
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& c : d.g) {
      nlohmann::json cj;
      if (c.is_affine()) {
        cj["kind"] = "affine";
      } else {
        cj["kind"] = "quadratic";
        cj["S"] = detail::matrix_to_json(c.S);
      }
      cj["t"] = detail::vector_to_json(c.t);
      cj["v"] = c.v;
      gs.push_back(std::move(cj));
    }
    j["g"] = std::move(gs);
  }
  if (d.A.rows() > 0) {
    j["A"] = detail::matrix_to_json(d.A);
    j["b"] = detail::vector_to_json(d.b);
  }
  j["K"] = {{"lower", detail::vector_to_json(d.K.lower)},
            {"upper", detail::vector_to_json(d.K.upper)}};
  if (d.K.num_halfspaces() > 0) {
    j["K"]["C"] = detail::matrix_to_json(d.K.C);
    j["K"]["u"] = detail::vector_to_json(d.K.u);
  }
  return j;
}

inline QuadraticProblemData problem_data_from_json(const nlohmann::json& j) {
  QuadraticProblemData d;
  try {
    if (!j.contains("n") || !j["n"].is_number_integer()) {
      throw IoError("problem JSON: missing integer field 'n'");
    }
    d.n = j["n"].get<int>();
    if (d.n < 1) throw IoError("problem JSON: n must be >= 1");

    if (!j.contains("objective")) {
      throw IoError("problem JSON: missing 'objective'");
    }
    const auto& obj = j["objective"];
    const std::string kind = obj.value("kind", "quadratic");
    if (kind != "quadratic" && kind != "affine") {
      throw IoError("problem JSON: unknown objective kind '" + kind + "'");
    }
    if (kind == "quadratic") {
      if (!obj.contains("P")) throw IoError("problem JSON: objective needs P");
      d.P = detail::json_to_matrix(obj["P"]);
    } else {
      d.P = Matrix::Zero(d.n, d.n);
    }
    d.r = obj.contains("r") ? detail::json_to_vector(obj["r"])
                            : Vector(Vector::Zero(d.n));
    d.s = obj.value("s", 0.0);
    if (d.P.rows() != d.n || d.P.cols() != d.n || d.r.size() != d.n) {
      throw IoError("problem JSON: objective shapes do not match n");
    }

    if (j.contains("q")) {
      if (!j["q"].contains("weights")) {
        throw IoError("problem JSON: q needs 'weights'");
      }
      d.q_weights = detail::json_to_vector(j["q"]["weights"]);
      if (d.q_weights.size() != d.n) {
        throw IoError("problem JSON: q weights length must equal n");
      }
    } else {
      d.q_weights = Vector::Zero(d.n);
    }

    if (j.contains("g")) {
      if (!j["g"].is_array()) throw IoError("problem JSON: g must be a list");
      for (const auto& cj : j["g"]) {
        QuadraticProblemData::Constraint c;
        const std::string ck = cj.value("kind", "affine");
        if (ck == "quadratic") {
          if (!cj.contains("S")) {
            throw IoError("problem JSON: quadratic constraint needs S");
          }
          c.S = detail::json_to_matrix(cj["S"]);
          if (c.S.rows() != d.n || c.S.cols() != d.n) {
            throw IoError("problem JSON: constraint S shape mismatch");
          }
        } else if (ck != "affine") {
          throw IoError("problem JSON: unknown constraint kind '" + ck + "'");
        }
        if (!cj.contains("t")) {
          throw IoError("problem JSON: constraint needs t");
        }
        c.t = detail::json_to_vector(cj["t"]);
        if (c.t.size() != d.n) {
          throw IoError("problem JSON: constraint t length mismatch");
        }
        c.v = cj.value("v", 0.0);
        d.g.push_back(std::move(c));
      }
    }

    if (j.contains("A") != j.contains("b")) {
      throw IoError("problem JSON: A and b must appear together");
    }
    if (j.contains("A")) {
      d.A = detail::json_to_matrix(j["A"]);
      d.b = detail::json_to_vector(j["b"]);
      if (d.A.cols() != d.n || d.A.rows() != d.b.size()) {
        throw IoError("problem JSON: equality shapes do not match");
      }
    }

    if (!j.contains("K")) throw IoError("problem JSON: missing 'K'");
    const auto& kj = j["K"];
    if (!kj.contains("lower") || !kj.contains("upper")) {
      throw IoError("problem JSON: K needs 'lower' and 'upper'");
    }
    const Vector lower = detail::json_to_vector(kj["lower"], /*bounds=*/true);
    const Vector upper = detail::json_to_vector(kj["upper"], /*bounds=*/true);
    if (lower.size() != d.n || upper.size() != d.n) {
      throw IoError("problem JSON: K bound lengths must equal n");
    }
    if (kj.contains("C") || kj.contains("u")) {
      if (!kj.contains("C") || !kj.contains("u")) {
        throw IoError("problem JSON: K.C and K.u must appear together");
      }
      const Matrix C = detail::json_to_matrix(kj["C"]);
      const Vector u = detail::json_to_vector(kj["u"]);
      if (C.cols() != d.n || C.rows() != u.size()) {
        throw IoError("problem JSON: K halfspace shapes do not match");
      }
      d.K = PolyhedralSet::box_with_halfspaces(lower, upper, C, u);
    } else {
      d.K = PolyhedralSet::box(lower, upper);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("problem JSON: ") + e.what());
  }
  return d;
}

inline QuadraticProblemData load_problem_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
  return problem_data_from_json(j);
}

inline void save_problem_data(const QuadraticProblemData& d,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << problem_data_to_json(d).dump(2) << "\n";
}

// Resolves a --problem argument: a catalog id (T1..T4, RAND-QP(...)) or a
// path to a problem JSON file.
inline LibraryInstance resolve_problem(const std::string& spec) {
  namespace fs = std::filesystem;
  const bool looks_like_file =
      spec.size() > 5 && spec.substr(spec.size() - 5) == ".json";
  if (looks_like_file || fs::exists(fs::path(spec))) {
    LibraryInstance inst;
    inst.id = fs::path(spec).stem().string();
    inst.data = load_problem_data(spec);
    inst.problem = make_problem(inst.data);
    inst.facts.convex_path_applicable =
        inst.problem.g_convex_flag && inst.problem.K.box_is_bounded();
    inst.facts.notes = "loaded from " + spec;
    return inst;
  }
  return get_instance(spec);
}

// --------------------------------------------------------------------------
// Trace CSV.
// --------------------------------------------------------------------------
inline std::string trace_csv_header(const std::vector<double>& eps_grid) {
  std::string h = "nu,gamma,d_norm,phi,kappa,theta,kkt_residual";
  for (double eps : eps_grid) h += ",W_eps_" + detail::fmt_compact(eps);
  h += ",wall_time_ns";
  return h;
}

// Writes one row per iteration record. wall_time_ns is written as 0 unless
// include_timing is set, so repeated runs produce byte-identical files.
inline void write_trace_csv(const std::string& path,
                            const std::vector<IterationRecord>& trace,
                            const std::vector<double>& eps_grid,
                            bool include_timing = false) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace file for writing: " + path);
  out << trace_csv_header(eps_grid) << "\n";
  for (const IterationRecord& rec : trace) {
    if (rec.ghost_values.size() != eps_grid.size()) {
      throw IoError("trace row ghost-penalty grid does not match the header");
    }
    out << rec.nu << ',' << detail::fmt_double(rec.gamma) << ','
        << detail::fmt_double(rec.d_norm) << ',' << detail::fmt_double(rec.phi)
        << ',' << detail::fmt_double(rec.kappa) << ','
        << detail::fmt_double(rec.theta) << ','
        << detail::fmt_double(rec.kkt_residual);
    for (const auto& [eps, w] : rec.ghost_values) {
      (void)eps;
      out << ',' << detail::fmt_double(w);
    }
    out << ',' << (include_timing ? rec.wall_time_ns : 0) << "\n";
  }
  if (!out) throw IoError("failed while writing trace file: " + path);
}

// --------------------------------------------------------------------------
// Report JSON.
// --------------------------------------------------------------------------
// First trace index from which the sampled ghost-penalty value W(.; eps) is
// nonincreasing (within slack) through the end of the run; trace.size() when
// even the last step increased it.
inline int ghost_monotone_from(const std::vector<IterationRecord>& trace,
                               std::size_t eps_index, double slack = 1e-12) {
  int idx = static_cast<int>(trace.size()) - 1;
  for (int i = static_cast<int>(trace.size()) - 2; i >= 0; --i) {
    const double wi = trace[static_cast<std::size_t>(i)]
                          .ghost_values[eps_index]
                          .second;
    const double wn = trace[static_cast<std::size_t>(i) + 1]
                          .ghost_values[eps_index]
                          .second;
    if (wn <= wi + slack) {
      idx = i;
    } else {
      break;
    }
  }
  return idx;
}

inline nlohmann::json report_to_json(const RunResult& result,
                                     const AlgoParams& params,
                                     const std::string& problem_id,
                                     const std::string& algorithm) {
  nlohmann::json j;
  j["problem"] = problem_id;
  j["algorithm"] = algorithm;
  j["stop_reason"] = to_string(result.stop_reason);
  j["iterations"] = result.iterations;
  j["final_x"] = detail::vector_to_json(result.final_x);
  j["classification"] = {
      {"kind", to_string(result.classification.kind)},
      {"evidence",
       {{"phi", result.classification.evidence.phi},
        {"theta", result.classification.evidence.theta},
        {"d_norm", result.classification.evidence.d_norm},
        {"kkt_residual", result.classification.evidence.kkt_residual},
        {"multiplier_norm", result.classification.evidence.multiplier_norm}}}};
  j["params"] = {{"beta", params.beta},
                 {"rho", params.rho},
                 {"lambda", params.lambda},
                 {"gamma0", params.gamma0},
                 {"gamma_exponent", params.gamma_exponent},
                 {"tol_d", params.tol_d},
                 {"tol_theta", params.tol_theta},
                 {"tol_feas", params.tol_feas},
                 {"max_iter", params.max_iter},
                 {"ghost_eps_grid", params.ghost_eps_grid}};
  j["wall_ms"] = static_cast<double>(result.total_wall_ns) / 1e6;
  if (!result.error_message.empty()) j["error"] = result.error_message;
  nlohmann::json ghost = nlohmann::json::array();
  if (!result.trace.empty()) {
    const auto& grid = result.trace.front().ghost_values;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ghost.push_back({{"eps", grid[k].first},
                       {"monotone_from", ghost_monotone_from(result.trace, k)},
                       {"final_value", result.trace.back()
                                           .ghost_values[k]
                                           .second}});
    }
  }
  j["ghost_penalty"] = std::move(ghost);
  return j;
}

inline void write_report_json(const std::string& path, const RunResult& result,
                              const AlgoParams& params,
                              const std::string& problem_id,
                              const std::string& algorithm) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  out << report_to_json(result, params, problem_id, algorithm).dump(2) << "\n";
  if (!out) throw IoError("failed while writing report file: " + path);
}

// --------------------------------------------------------------------------
// Run configuration and execution.
// --------------------------------------------------------------------------
struct RunConfig {
  std::string problem;                 // catalog id or problem-JSON path
  std::string algorithm = "general";   // "general" | "convex"
  std::vector<double> x0;              // explicit start (empty: use x0_mode)
  std::string x0_mode = "center";      // "center" | "random"
  unsigned seed = 0;                   // drives x0_mode == "random"
  std::optional<double> beta, rho, lambda, gamma0, gamma_exponent;
  std::optional<double> tol_d, tol_theta, tol_feas;
  std::optional<int> max_iter;
  std::optional<std::vector<double>> ghost_eps;
  std::string trace_out;
  std::string report_out;
  bool trace_timing = false;
};

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (!j.contains("problem") || !j["problem"].is_string()) {
      throw IoError("run config: missing string field 'problem'");
    }
    cfg.problem = j["problem"].get<std::string>();
    cfg.algorithm = j.value("algorithm", std::string("general"));
    if (j.contains("x0")) {
      if (j["x0"].is_string()) {
        cfg.x0_mode = j["x0"].get<std::string>();
      } else {
        const Vector v = detail::json_to_vector(j["x0"]);
        cfg.x0.assign(v.data(), v.data() + v.size());
      }
    }
    cfg.seed = j.value("seed", 0u);
    auto opt = [&j](const char* key) -> std::optional<double> {
      if (j.contains(key)) return j[key].get<double>();
      return std::nullopt;
    };
    cfg.beta = opt("beta");
    cfg.rho = opt("rho");
    cfg.lambda = opt("lambda");
    cfg.gamma0 = opt("gamma0");
    cfg.gamma_exponent = opt("gamma_exponent");
    cfg.tol_d = opt("tol_d");
    cfg.tol_theta = opt("tol_theta");
    cfg.tol_feas = opt("tol_feas");
    if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();
    if (j.contains("ghost_eps")) {
      const Vector v = detail::json_to_vector(j["ghost_eps"]);
      cfg.ghost_eps = std::vector<double>(v.data(), v.data() + v.size());
    }
    cfg.trace_out = j.value("trace_out", std::string());
    cfg.report_out = j.value("report_out", std::string());
    cfg.trace_timing = j.value("trace_timing", false);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("run config: ") + e.what());
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

struct RunOutcome {
  LibraryInstance instance;
  AlgoParams params;
  RunResult result;
  std::string algorithm;
};

inline AlgoParams params_for_config(const RunConfig& cfg,
                                    const PolyhedralSet& K) {
  AlgoParams params = AlgoParams::defaults_for(K);
  if (cfg.beta) params.beta = *cfg.beta;
  if (cfg.rho) params.rho = *cfg.rho;
  if (cfg.lambda) params.lambda = *cfg.lambda;
  if (cfg.gamma0) params.gamma0 = *cfg.gamma0;
  if (cfg.gamma_exponent) params.gamma_exponent = *cfg.gamma_exponent;
  if (cfg.tol_d) params.tol_d = *cfg.tol_d;
  if (cfg.tol_theta) params.tol_theta = *cfg.tol_theta;
  if (cfg.tol_feas) params.tol_feas = *cfg.tol_feas;
  if (cfg.max_iter) params.max_iter = *cfg.max_iter;
  if (cfg.ghost_eps) params.ghost_eps_grid = *cfg.ghost_eps;
  params.validate();
  return params;
}

inline Vector starting_point_for_config(const RunConfig& cfg,
                                        const ProblemSpec& problem) {
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != problem.n) {
      throw ConfigError("x0 has " + std::to_string(cfg.x0.size()) +
                        " entries but the problem has dimension " +
                        std::to_string(problem.n));
    }
    Vector x(problem.n);
    for (int i = 0; i < problem.n; ++i) x(i) = cfg.x0[static_cast<size_t>(i)];
    if (!x.allFinite()) throw ConfigError("x0 must be finite");
    return x;
  }
  if (cfg.x0_mode == "center") return problem.K.box_center();
  if (cfg.x0_mode == "random") {
    std::mt19937_64 rng(0xabcd0000ULL + cfg.seed);
    return detail::sample_in_set(problem.K, rng);
  }
  throw ConfigError("unknown x0 mode '" + cfg.x0_mode +
                    "' (expected 'center' or 'random', or a number list)");
}

inline RunOutcome execute_run(const RunConfig& cfg) {
  RunOutcome out;
  out.instance = resolve_problem(cfg.problem);
  out.algorithm = cfg.algorithm;
  out.params = params_for_config(cfg, out.instance.problem.K);
  const Vector x0 = starting_point_for_config(cfg, out.instance.problem);
  const SurrogateModel model = make_default_model(out.instance.problem);
  if (cfg.algorithm == "general") {
    out.result =
        run_algorithm1(out.instance.problem, model, x0, out.params, nullptr);
  } else if (cfg.algorithm == "convex") {
    out.result =
        run_algorithm2(out.instance.problem, model, x0, out.params, nullptr);
  } else {
    throw ConfigError("unknown algorithm '" + cfg.algorithm +
                      "' (expected 'general' or 'convex')");
  }
  if (!cfg.trace_out.empty()) {
    write_trace_csv(cfg.trace_out, out.result.trace, out.params.ghost_eps_grid,
                    cfg.trace_timing);
  }
  if (!cfg.report_out.empty()) {
    write_report_json(cfg.report_out, out.result, out.params, out.instance.id,
                      out.algorithm);
  }
  return out;
}

// --------------------------------------------------------------------------
// Batch execution.
// --------------------------------------------------------------------------
struct BatchRow {
  std::string id;
  bool ok = false;
  std::string stop_reason;
  int iterations = 0;
  double final_phi = std::numeric_limits<double>::quiet_NaN();
  double final_theta = std::numeric_limits<double>::quiet_NaN();
  double final_kkt = std::numeric_limits<double>::quiet_NaN();
  std::string classification;  // or the error text for failed rows
};

struct BatchSummary {
  std::vector<BatchRow> rows;
  int succeeded = 0;
  int failed = 0;
};

inline std::string batch_summary_header() {
  return "id,stop_reason,iterations,final_phi,final_theta,final_kkt_residual,"
         "classification";
}

namespace detail {

inline std::string csv_sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' ) c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

inline BatchRow run_one_batch_config(const std::filesystem::path& file) {
  BatchRow row;
  row.id = file.stem().string();
  try {
    const RunConfig cfg = load_run_config(file.string());
    const RunOutcome out = execute_run(cfg);
    row.ok = out.result.stop_reason != StopReason::SubsolverFailure;
    row.stop_reason = to_string(out.result.stop_reason);
    row.iterations = out.result.iterations;
    row.final_phi = out.result.classification.evidence.phi;
    row.final_theta = out.result.classification.evidence.theta;
    row.final_kkt = out.result.classification.evidence.kkt_residual;
    row.classification =
        row.ok ? to_string(out.result.classification.kind)
               : csv_sanitize("Error: " + out.result.error_message);
  } catch (const std::exception& e) {
    row.ok = false;
    row.stop_reason = "Error";
    row.classification = csv_sanitize(std::string("Error: ") + e.what());
  }
  return row;
}

}  // namespace detail

// Runs every *.json config in the directory (sorted by filename, executed in
// parallel), isolating per-run failures into error rows. Writes the summary
// CSV when a path is given.
inline BatchSummary run_batch(const std::string& config_dir,
                              const std::string& summary_csv_path = "") {
  namespace fs = std::filesystem;
  const fs::path dir(config_dir);
  if (!fs::exists(dir) || !fs::is_directory(dir)) {
    throw ConfigError("batch: not a directory: " + config_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::future<BatchRow>> futures;
  futures.reserve(files.size());
  for (const auto& file : files) {
    futures.push_back(std::async(std::launch::async,
                                 detail::run_one_batch_config, file));
  }
  BatchSummary summary;
  for (auto& fut : futures) {
    BatchRow row = fut.get();
    (row.ok ? summary.succeeded : summary.failed)++;
    summary.rows.push_back(std::move(row));
  }

  if (!summary_csv_path.empty()) {
    std::ofstream out(summary_csv_path);
    if (!out) {
      throw IoError("cannot open batch summary for writing: " +
                    summary_csv_path);
    }
    out << batch_summary_header() << "\n";
    for (const BatchRow& row : summary.rows) {
      out << row.id << ',' << row.stop_reason << ',' << row.iterations << ','
          << detail::fmt_double(row.final_phi) << ','
          << detail::fmt_double(row.final_theta) << ','
          << detail::fmt_double(row.final_kkt) << ',' << row.classification
          << "\n";
    }
  }
  return summary;
}

}  // namespace gdsm
