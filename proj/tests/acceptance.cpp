// Acceptance run: one PASS/FAIL line per criterion, failing rows on stderr.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>

#include "cubicmod/suites.hpp"

using namespace cubicmod;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  /// Wall-time budget in seconds (0: none).
  double budget;
  std::function<bool(const std::map<std::string, SuiteReport>&)> extra;
};

bool igusa_row_paper_accepted(const std::map<std::string, SuiteReport>& done) {
  const auto& d = done.at("degree-report").data;
  for (const auto& i : d["ingredients"])
    if (i["name"].get<std::string>().find("Igusa") != std::string::npos) return i["status"] == "paper-accepted";
  return false;
}

}  // namespace

int main() {
  RunConfig cfg;
  cfg.fixtures = CUBICMOD_FIXTURES;
  const std::vector<Criterion> criteria{
      {1, "Segre structure", {"segre", "node-cone"}, 1.0, nullptr},
      {2, "quadric-system parametrization", {"phi-l"}, 5.0, nullptr},
      {3, "six lines through 100 random points", {"lines"}, 60.0, nullptr},
      {4, "lines through plane points and the limit probe", {"lemma-pl"}, 0.0, nullptr},
      {5, "invariants (exact oracle and Möbius fuzz)", {"invariants"}, 0.0, nullptr},
      {6, "phi0 orbit fibre, Igusa step paper-accepted", {"phi0-orbit"}, 0.0, igusa_row_paper_accepted},
      {7, "plane map: G-orbit, local degree 2, differential", {"g-orbit", "local-degree"}, 0.0, nullptr},
      {8, "exceptional component", {"exceptional"}, 0.0, nullptr},
      {9, "degree assembly", {"degree-report"}, 0.0, nullptr},
  };

  std::map<std::string, SuiteReport> done;
  // The degree report is needed by criterion 6, so run it first.
  for (const auto& name : {std::string("degree-report")}) done.emplace(name, run_suite(name, cfg));

  int failed = 0;
  for (const auto& c : criteria) {
    double seconds = 0.0;
    bool pass = true;
    std::vector<std::string> why;
    for (const auto& s : c.suites) {
      if (!done.count(s)) done.emplace(s, run_suite(s, cfg));
      const auto& r = done.at(s);
      seconds += r.wall_seconds;
      for (const auto& a : r.rows)
        if (!a.pass) {
          pass = false;
          why.push_back(s + ": " + a.name + (a.margin ? " (margin " + format_double(*a.margin) + ")" : ""));
        }
    }
    if (c.extra && !c.extra(done)) {
      pass = false;
      why.push_back("Igusa birationality is not labelled paper-accepted");
    }
    if (c.budget > 0.0 && seconds > c.budget) {
      pass = false;
      why.push_back("time " + format_double(seconds) + " s exceeds " + format_double(c.budget) + " s");
    }
    std::cout << "CRITERION " << c.id << " [PRIMARY] " << c.title << ": " << (pass ? "PASS" : "FAIL") << " (" << std::fixed
              << std::setprecision(2) << seconds << " s)" << std::endl;
    std::cout.unsetf(std::ios::fixed);
    for (const auto& w : why) std::cerr << "    failed: " << w << "\n";
    failed += !pass;
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << std::endl;
  return failed == 0 ? 0 : 1;
}
