#include <gtest/gtest.h>

#include <sstream>

#include "cubicmod/cli.hpp"

using namespace cubicmod;

namespace {

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "cubicmod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_cli(static_cast<int>(argv.size()), argv.data());
}

Json strip_time(const SuiteReport& r) { return to_json(r, false); }

const Assertion* find_row(const SuiteReport& r, const std::string& name) {
  for (const auto& a : r.rows)
    if (a.name == name) return &a;
  return nullptr;
}

}  // namespace

TEST(Flags, Defaults) {
  auto c = parse({});
  EXPECT_EQ(c.suite, "all");
  EXPECT_EQ(c.seed, 20240601u);
  EXPECT_FALSE(c.trials);
  EXPECT_EQ(c.precision, Precision::Double);
  EXPECT_EQ(c.tolerances, default_tolerances());
  EXPECT_FALSE(c.long_run);
}

TEST(Flags, AllFlags) {
  auto c = parse({"--suite", "lines", "--seed", "7", "--trials", "3", "--tol", "mobius=1e-7", "--tol", "pencil_ratio=2e-6", "--precision",
                  "extended", "--json", "out.json", "--fixtures", "fx", "--long"});
  EXPECT_EQ(c.suite, "lines");
  EXPECT_EQ(c.seed, 7u);
  ASSERT_TRUE(c.trials);
  EXPECT_EQ(*c.trials, 3);
  EXPECT_EQ(c.tol("mobius"), 1e-7);
  EXPECT_EQ(c.tol("pencil_ratio"), 2e-6);
  EXPECT_EQ(c.tol("line_distance"), 1e-8);
  EXPECT_EQ(c.precision, Precision::Extended);
  EXPECT_EQ(c.json_path, "out.json");
  EXPECT_EQ(c.fixtures, "fx");
  EXPECT_TRUE(c.long_run);
}

TEST(Flags, Rejections) {
  EXPECT_THROW(parse({"--tol", "nosuch=1e-3"}), std::invalid_argument);
  EXPECT_THROW(parse({"--tol", "mobius=0"}), std::invalid_argument);
  EXPECT_THROW(parse({"--tol", "mobius=-1e-3"}), std::invalid_argument);
  EXPECT_THROW(parse({"--tol", "mobius=abc"}), std::invalid_argument);
  EXPECT_THROW(parse({"--tol", "mobius=1e-3x"}), std::invalid_argument);
  EXPECT_THROW(parse({"--tol", "mobius"}), std::invalid_argument);
  EXPECT_THROW(parse({"--suite", "nosuch"}), CLI::ParseError);
  EXPECT_THROW(parse({"--trials", "0"}), CLI::ParseError);
  EXPECT_THROW(parse({"--precision", "quad"}), CLI::ParseError);
}

TEST(Fixtures, DefaultFileMatchesBuiltin) {
  auto pts = parse_points_file(std::string(CUBICMOD_FIXTURES) + "/base_points.txt");
  auto def = default_base_points();
  ASSERT_EQ(pts.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(pts[i], def[i]);
}

TEST(Fixtures, FractionsCommentsAndErrors) {
  std::istringstream good("# header\n1/2 -3/4, 5 0  # trailing\n\n  2 2 2 2\n");
  auto pts = parse_points(good);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (Vec<Rational>{Rational(1, 2), Rational(-3, 4), Rational(5), Rational(0)}));

  std::istringstream ragged("1 0 0 0\n1 2 3\n");
  EXPECT_THROW(parse_points(ragged), FixtureError);
  std::istringstream zero("0 0 0 0\n");
  EXPECT_THROW(parse_points(zero), FixtureError);
  std::istringstream zden("1/0 1 1 1\n");
  EXPECT_THROW(parse_points(zden), FixtureError);
  try {
    parse_points_file(std::string(CUBICMOD_FIXTURES) + "/malformed.txt");
    FAIL() << "malformed fixture accepted";
  } catch (const FixtureError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_points_file("/nonexistent/points.txt"), FixtureError);
}

TEST(Suites, UnknownSuiteThrows) {
  EXPECT_THROW(run_suite("nosuch", RunConfig{}), std::invalid_argument);
  EXPECT_THROW(run_suites("nosuch", RunConfig{}), std::invalid_argument);
}

TEST(Suites, SegrePassesWithAnchors) {
  auto r = run_suite("segre", RunConfig{});
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.rows.size(), 8u);
  for (const auto& a : r.rows) EXPECT_FALSE(a.anchor.empty()) << a.name;
  EXPECT_EQ(r.data["nodes"], 10);
  EXPECT_EQ(r.data["planes"], 15);
}

TEST(Suites, PhiLReadsFixtureDirectory) {
  RunConfig c;
  c.fixtures = std::string(CUBICMOD_FIXTURES) + "/twisted";
  auto r = run_suite("phi-l", c);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.data["base_points"][4][1], "1/2");
  c.fixtures = "/nonexistent";
  EXPECT_THROW(run_suite("phi-l", c), FixtureError);
}

TEST(Suites, ToleranceOverridesAreUsed) {
  RunConfig c;
  c.trials = 3;
  auto ok = run_suite("lines", c);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.data["trials"], 3);
  c.set_tolerance("line_distance", 1e-30);
  auto strict = run_suite("lines", c);
  EXPECT_FALSE(strict.passed());
  const auto* row = find_row(strict, "agreement with joins plus twisted cubic");
  ASSERT_NE(row, nullptr);
  EXPECT_FALSE(row->pass);
}

TEST(Suites, DeterministicJson) {
  RunConfig c;
  c.trials = 40;
  auto a = strip_time(run_suite("invariants", c)).dump();
  auto b = strip_time(run_suite("invariants", c)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
  c.seed = 1;
  auto d = strip_time(run_suite("invariants", c)).dump();
  EXPECT_NE(a, d);
  // A suite's stream does not depend on whether it runs alone.
  RunConfig e;
  auto solo = run_suites("exceptional", e);
  EXPECT_EQ(to_json(solo[0], false).dump(), strip_time(run_suite("exceptional", e)).dump());
}

TEST(Suites, CollectionJsonShape) {
  RunConfig c;
  auto reps = run_suites("segre", c);
  auto j = suites_to_json(reps, c);
  EXPECT_TRUE(j.contains("config"));
  EXPECT_EQ(j["config"]["seed"], 20240601u);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["suite"], "segre");
  EXPECT_FALSE(j["suites"][0].contains("config"));
  EXPECT_TRUE(j["suites"][0].contains("wall_seconds"));
  EXPECT_EQ(j["passed"], true);
}

TEST(Suites, DegreeReportTotals) {
  auto r = run_suite("degree-report", RunConfig{});
  EXPECT_EQ(r.data["total"], 2074320);
  EXPECT_EQ(r.data["delta"], 207360);
  EXPECT_EQ(r.data["arithmetic_ok"], true);
  EXPECT_EQ(r.data["seed"], 20240601u);
  EXPECT_TRUE(r.data.contains("tolerances"));
  bool accepted = false;
  for (const auto& i : r.data["ingredients"]) {
    EXPECT_TRUE(i.contains("anchor"));
    accepted = accepted || (i["status"] == "paper-accepted" && i["name"].get<std::string>().find("Igusa") != std::string::npos);
  }
  EXPECT_TRUE(accepted);
  const auto* total = find_row(r, "deg(phi) = 720 + 10 * 207360 = 2074320");
  ASSERT_NE(total, nullptr);
  EXPECT_TRUE(total->pass);
}
