// halfdens verify <suite> [--config FILE] [--seed U64] [--nodes INT] [--out PATH]
// halfdens study <op_id> --ladder 16,32,64
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "halfdens/harness.hpp"

namespace {

halfdens::SuiteConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return halfdens::SuiteConfig::from_json(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification suites for Hilbert half-densities"};
  app.require_subcommand(1);

  std::string suite, config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> nodes;
  auto* verify = app.add_subcommand("verify", "Run one verification suite and write its report");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--config", config_path, "SuiteConfig JSON file");
  verify->add_option("--seed", seed, "Master seed");
  verify->add_option("--nodes", nodes, "Gauss-Legendre nodes per dimension");
  verify->add_option("--out", out_path, "Report path (default $HALFDENS_OUT_DIR/<suite>.jsonl)");

  std::string op_id;
  std::vector<int> ladder;
  auto* study = app.add_subcommand("study", "Convergence table for one operation");
  study->add_option("op_id", op_id, "Operation id")->required();
  study->add_option("--ladder", ladder, "Increasing node counts")->delimiter(',')->required();
  study->add_option("--config", config_path, "SuiteConfig JSON file");

  CLI11_PARSE(app, argc, argv);

  try {
    halfdens::SuiteConfig cfg = load_config(config_path);
    if (*verify) {
      if (seed) cfg.seed = *seed;
      if (nodes) cfg.nodes_per_dim = *nodes;
      if (!out_path.empty()) cfg.output_path = out_path;
      cfg.validate();
      const auto report = halfdens::run_suite(suite, cfg);
      const std::string path = cfg.output_path.empty() ? halfdens::default_report_path(suite) : cfg.output_path;
      halfdens::write_report(report, path);
      for (const auto& r : report.rows)
        if (!r.pass) std::printf("FAIL %s rel_err=%.3e tol=%.1e\n", r.case_id.c_str(), r.rel_err, r.tol);
      std::printf("%s: %zu rows, %zu failed -> %s\n", suite.c_str(), report.rows.size(), report.failures(),
                  path.c_str());
      return report.all_pass() ? 0 : 1;
    }
    const auto res = halfdens::convergence_study(op_id, ladder, cfg);
    std::printf("%s\n", res.to_json().c_str());
    return res.decays ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
