#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubicmod/suites.hpp"

namespace cubicmod {

/// Splits "KEY=VAL" and applies it to the config.
inline void apply_tolerance_flag(RunConfig& cfg, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--tol expects KEY=VAL, got '" + kv + "'");
  std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(val, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("--tol " + key + ": not a number '" + val + "'");
  }
  if (used != val.size()) throw std::invalid_argument("--tol " + key + ": not a number '" + val + "'");
  cfg.set_tolerance(key, v);
}

/// Registers the flags on `app`; values land in `cfg` and `tols` (tolerance
/// strings are applied by finish_config after parsing).
inline void add_run_options(CLI::App& app, RunConfig& cfg, std::vector<std::string>& tols, std::string& precision, int& trials) {
  std::vector<std::string> names = suite_names();
  names.push_back("all");
  app.add_option("--suite", cfg.suite, "Suite to run")->check(CLI::IsMember(names))->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed of the std::mt19937_64 sampler")->capture_default_str();
  app.add_option("--trials", trials, "Trial count override (>= 1)")->check(CLI::PositiveNumber);
  app.add_option("--tol", tols, "Tolerance override KEY=VAL (repeatable)")->allow_extra_args(false);
  app.add_option("--precision", precision, "Root-finder precision")->check(CLI::IsMember({"double", "extended"}))->capture_default_str();
  app.add_option("--json", cfg.json_path, "Write the JSON report to PATH");
  app.add_option("--fixtures", cfg.fixtures, "Fixture directory (base_points.txt)");
  app.add_flag("--long", cfg.long_run, "Add the random-seed global fibre search");
}

inline void finish_config(RunConfig& cfg, const std::vector<std::string>& tols, const std::string& precision, int trials) {
  for (const auto& t : tols) apply_tolerance_flag(cfg, t);
  cfg.precision = parse_precision(precision);
  if (trials > 0) cfg.trials = trials;
}

/// Parses argv into a RunConfig. Throws CLI::ParseError (including
/// --help) or std::invalid_argument.
inline RunConfig parse_cli(int argc, const char* const* argv) {
  CLI::App app{"cubicmod: verification suites for the modular maps of the Segre cubic"};
  RunConfig cfg;
  std::vector<std::string> tols;
  std::string precision = "double";
  int trials = 0;
  add_run_options(app, cfg, tols, precision, trials);
  app.parse(argc, argv);
  finish_config(cfg, tols, precision, trials);
  return cfg;
}

}  // namespace cubicmod
