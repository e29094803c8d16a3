#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "halfdens/diffeo.hpp"
#include "halfdens/gamma.hpp"
#include "halfdens/quadrature.hpp"

namespace halfdens {

struct SuiteConfig {
  std::uint64_t seed = 20260315;
  /// Unset means each suite's own default (32 for measure invariance,
  /// 48 for unitarity and push-forward, ...).
  std::optional<int> nodes_per_dim;
  int trials = 20;
  SignatureSpec signature{1, 0};
  int n_max = 3;
  std::vector<Diffeo1D> diffeo_catalog = default_catalog();
  std::string output_path;
  /// Cases per suite evaluated concurrently; 0 means hardware concurrency.
  int threads = 0;

  void validate() const;
  std::string to_json() const;
  static SuiteConfig from_json(const std::string& text);
  static std::vector<Diffeo1D> default_catalog();
};

struct ReportRow {
  std::string suite;
  std::string case_id;
  cplx lhs;
  cplx rhs;
  double rel_err = 0.0;
  double tol = 0.0;
  int nodes = 0;
  double elapsed_ms = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<ReportRow> rows;

  bool all_pass() const;
  std::size_t failures() const;
  /// Rows followed by the summary record, one JSON object per line. Timing
  /// is excluded so identical configurations give byte-identical bodies.
  std::string body() const;
  /// One JSON object per row: case_id and elapsed_ms.
  std::string timing() const;
};

const std::vector<std::string>& suite_names();

/// Runs a named suite; throws std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

/// Writes the report body to `path` and timings to `path + ".timing.jsonl"`.
void write_report(const SuiteReport& report, const std::string& path);

/// Default report location: $HALFDENS_OUT_DIR (or the working directory) / <suite>.jsonl.
std::string default_report_path(const std::string& suite);

struct StudyRow {
  int nodes;
  double rel_err;
};

struct StudyResult {
  std::string op_id;
  std::vector<StudyRow> rows;
  bool strictly_decreasing = false;
  /// Last rung no worse than the first, or every rung at the round-off floor.
  bool decays = false;

  std::string to_json() const;
};

inline constexpr double kRoundoffFloor = 1e-13;

const std::vector<std::string>& study_ops();

/// Reruns one fixed seeded case of `op_id` at each node count in the ladder.
StudyResult convergence_study(const std::string& op_id, const std::vector<int>& ladder, const SuiteConfig& config);

/// Independent generator for case `index` of `suite`.
std::mt19937_64 case_rng(std::uint64_t seed, const std::string& suite, std::uint64_t index);

}  // namespace halfdens
