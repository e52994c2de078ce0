#include <fstream>
#include <iomanip>
#include <iostream>

#include "cubicmod/cli.hpp"

using namespace cubicmod;

int main(int argc, char** argv) {
  CLI::App app{"cubicmod: verification suites for the modular maps of the Segre cubic"};
  RunConfig cfg;
  std::vector<std::string> tols;
  std::string precision = "double";
  int trials = 0;
  add_run_options(app, cfg, tols, precision, trials);
  try {
    app.parse(argc, argv);
    finish_config(cfg, tols, precision, trials);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<SuiteReport> reports;
  try {
    reports = run_suites(cfg.suite, cfg);
  } catch (const FixtureError& e) {
    std::cerr << "fixture error: " << e.what() << "\n";
    return 2;
  }

  bool ok = true;
  for (const auto& r : reports) {
    std::cout << "[" << r.suite << "] " << (r.passed() ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(2) << r.wall_seconds << " s)\n";
    std::cout.unsetf(std::ios::fixed);
    for (const auto& a : r.rows) {
      std::cout << "  " << (a.pass ? "ok  " : "FAIL") << "  " << a.name;
      if (a.margin) std::cout << "  margin=" << format_double(*a.margin);
      std::cout << "\n";
    }
    ok = ok && r.passed();
  }
  if (!cfg.json_path.empty()) {
    std::ofstream out(cfg.json_path);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.json_path << "\n";
      return 2;
    }
    out << suites_to_json(reports, cfg).dump(2) << "\n";
  }
  return ok ? 0 : 1;
}
