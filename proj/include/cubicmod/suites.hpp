#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmod/jsonfmt.hpp"
#include "cubicmod/lines3fold.hpp"
#include "cubicmod/modmaps.hpp"
#include "cubicmod/numkit/context.hpp"

namespace cubicmod {

// ---------------------------------------------------------------------------
// Run configuration.

inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"line_distance", 1e-8},  // matched Plücker distance of the two six-line constructions
      {"line_residual", 1e-10},
      {"mobius", 1e-9},  // Möbius fuzz of m2 / m06
      {"orbit_margin", 1e-8},
      {"pencil_ratio", 1e-6},
  };
  return t;
}

struct RunConfig {
  std::uint64_t seed = 20240601;
  std::map<std::string, double> tolerances = default_tolerances();
  Precision precision = Precision::Double;
  /// Overrides the trial count of the selected suite(s).
  std::optional<int> trials;
  std::string json_path;
  /// Directory holding fixture files; empty means built-in defaults.
  std::string fixtures;
  bool long_run = false;
  std::string suite = "all";

  double tol(const std::string& key) const { return tolerances.at(key); }

  void set_tolerance(const std::string& key, double value) {
    if (!default_tolerances().count(key)) throw std::invalid_argument("unknown tolerance '" + key + "'");
    if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument("tolerance '" + key + "' must be positive");
    tolerances[key] = value;
  }

  int trials_or(int fallback) const { return trials.value_or(fallback); }
};

inline Json to_json(const RunConfig& c) {
  Json tol = Json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = format_double(v);
  return Json{{"seed", c.seed},
              {"tolerances", tol},
              {"precision", to_string(c.precision)},
              {"trials", c.trials ? Json(*c.trials) : Json(nullptr)},
              {"fixtures", c.fixtures},
              {"long", c.long_run},
              {"suite", c.suite}};
}

// ---------------------------------------------------------------------------
// Fixtures.

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One point per line, coordinates as exact fractions separated by blanks or
/// commas; '#' starts a comment. All points must have the same dimension.
inline std::vector<Vec<Rational>> parse_points(std::istream& in, const std::string& source = "<input>") {
  std::vector<Vec<Rational>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    Vec<Rational> p;
    std::string tok;
    while (ls >> tok) {
      try {
        p.push_back(parse_rational(tok));
      } catch (const std::invalid_argument& e) {
        throw FixtureError(source + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (p.empty()) continue;
    if (!pts.empty() && p.size() != pts.front().size())
      throw FixtureError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(pts.front().size()) + " coordinates");
    if (all_zero(p)) throw FixtureError(source + ":" + std::to_string(lineno) + ": zero vector is not a point");
    pts.push_back(std::move(p));
  }
  return pts;
}

inline std::vector<Vec<Rational>> parse_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture file " + path);
  return parse_points(in, path);
}

/// Base points from <fixtures>/base_points.txt, or the built-in default.
inline std::array<Vec<Rational>, 5> load_base_points(const RunConfig& cfg) {
  if (cfg.fixtures.empty()) return default_base_points();
  auto pts = parse_points_file(cfg.fixtures + "/base_points.txt");
  if (pts.size() != 5 || pts.front().size() != 4) throw FixtureError("base_points.txt: need 5 points of P^3");
  return {pts[0], pts[1], pts[2], pts[3], pts[4]};
}

// ---------------------------------------------------------------------------
// Reports.

struct Assertion {
  std::string name;
  bool pass = false;
  std::optional<double> margin;
  /// Mathematical statement the row checks, or "plumbing".
  std::string anchor;
};

struct SuiteReport {
  std::string suite;
  std::vector<Assertion> rows;
  Json data = Json::object();
  Json config = Json::object();
  double wall_seconds = 0.0;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const Assertion& a) { return a.pass; });
  }
};

inline Json to_json(const SuiteReport& r, bool with_time = true) {
  Json rows = Json::array();
  for (const auto& a : r.rows)
    rows.push_back(Json{{"name", a.name}, {"pass", a.pass}, {"margin", a.margin ? Json(format_double(*a.margin)) : Json(nullptr)}, {"anchor", a.anchor}});
  Json out{{"suite", r.suite}, {"passed", r.passed()}, {"assertions", rows}, {"data", r.data}, {"config", r.config}};
  if (with_time) out["wall_seconds"] = format_double(r.wall_seconds);
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"segre",      "phi-l",         "lines",        "lemma-pl",    "node-cone",    "invariants",
                                              "phi0-orbit", "g-orbit",       "local-degree", "exceptional", "degree-report"};
  return names;
}

namespace detail {

inline constexpr const char* kNodes = "ten nodes of the Segre primal";
inline constexpr const char* kPlanes = "fifteen planes and the (6,4) configuration";
inline constexpr const char* kPhiL = "parametrization by quadrics through five points";
inline constexpr const char* kSixLines = "six lines through a general point on a quadric cone";
inline constexpr const char* kPlaneLines = "lines through a point of a plane of the cubic";
inline constexpr const char* kLimit = "limit of the six lines at a plane point";
inline constexpr const char* kInvariants = "Igusa-Clebsch invariants and M2 equality";
inline constexpr const char* kForgetful = "forgetful map M06 to M2 has degree 6!";
inline constexpr const char* kPhi0 = "general fibre of phi0 is an S6 orbit";
inline constexpr const char* kGeneralCubic = "phi is defined and dominant on general cubics";
inline constexpr const char* kGroup = "group of the six lines";
inline constexpr const char* kGOrbit = "fibres of the plane map over tangent planes are G-orbits";
inline constexpr const char* kPlaneDegree = "degree of the plane map";
inline constexpr const char* kExceptional = "exceptional quadric map is 2:1 onto planes";
inline constexpr const char* kDegree = "degree formula";

class Recorder {
 public:
  explicit Recorder(SuiteReport& r) : r_(r) {}
  bool check(std::string name, bool pass, const char* anchor, std::optional<double> margin = std::nullopt) {
    r_.rows.push_back({std::move(name), pass, margin, anchor});
    return pass;
  }

 private:
  SuiteReport& r_;
};

inline const SegreModel& segre_model() {
  static const SegreModel m = build_standard_segre();
  return m;
}

inline const RulingConfig& ruling_config() {
  static const RulingConfig c = build_ruling_config();
  return c;
}

inline Rng suite_rng(const RunConfig& cfg, const std::string& name) {
  auto it = std::find(suite_names().begin(), suite_names().end(), name);
  return Rng(cfg.seed + 1000003ULL * static_cast<std::uint64_t>(it - suite_names().begin()));
}

// Evidence shared by the segre suite and the degree assembly.
struct SegreFacts {
  std::size_t nodes = 0, planes = 0;
  bool nodes_singular = true, cone_rank4 = true, planes_on_cubic = true, incidence = true;
  std::size_t node_orbit = 0, plane_orbit = 0;
};

inline SegreFacts segre_facts(bool with_cones) {
  const auto& m = segre_model();
  SegreFacts f;
  f.nodes = m.nodes.size();
  f.planes = m.planes.size();
  Vec<Rational> ones(6, Rational(1));
  for (std::size_t n = 0; n < m.nodes.size(); ++n) {
    const auto& x = m.nodes[n];
    f.nodes_singular = f.nodes_singular && sgn(m.cubic6(x)) == 0 && proportional(m.cubic6.gradient_at(x), ones);
    if (with_cones) f.cone_rank4 = f.cone_rank4 && node_cone_analysis(m, n).cone_rank == 4;
    f.incidence = f.incidence && m.planes_through_node(n).size() == 6;
  }
  for (std::size_t k = 0; k < m.planes.size(); ++k) {
    f.planes_on_cubic = f.planes_on_cubic && m.cubic6.compose(Matrix<Rational>::from_columns(m.planes[k].basis)).is_zero();
    f.incidence = f.incidence && m.nodes_on_plane(k).size() == 4;
  }
  std::set<int> no, po;
  for (const auto& g : all_perm6()) {
    no.insert(m.node_index(permute_coords(g, m.nodes[0])));
    po.insert(m.plane_index(permute_matching(g, m.planes[0].matching)));
  }
  f.node_orbit = no.count(-1) ? 0 : no.size();
  f.plane_orbit = po.count(-1) ? 0 : po.size();
  return f;
}

// ---------------------------------------------------------------------------

inline void suite_segre(const RunConfig&, SuiteReport& r) {
  Recorder rec(r);
  auto f = segre_facts(true);
  rec.check("10 nodes", f.nodes == 10, kNodes);
  rec.check("15 planes", f.planes == 15, kPlanes);
  rec.check("nodes lie on the cubic with vanishing restricted gradient", f.nodes_singular, kNodes);
  rec.check("tangent cone at every node has rank 4", f.cone_rank4, kNodes);
  rec.check("every plane lies identically on the cubic", f.planes_on_cubic, kPlanes);
  rec.check("incidence is (6,4)", f.incidence, kPlanes);
  rec.check("S6 is transitive on nodes (orbit 10)", f.node_orbit == 10, kNodes);
  rec.check("S6 is transitive on planes (orbit 15)", f.plane_orbit == 15, kPlanes);
  r.data = Json{{"nodes", f.nodes}, {"planes", f.planes}, {"node_orbit", f.node_orbit}, {"plane_orbit", f.plane_orbit}};
}

inline void suite_phi_l(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  auto base = load_base_points(cfg);
  PhiL p = build_phi_L(base, cfg.seed);
  Rng rng = suite_rng(cfg, "phi-l");
  bool vanish = true;
  for (const auto& q : p.quadrics)
    for (const auto& b : p.base) vanish = vanish && sgn(q(b)) == 0;
  rec.check("quadric system has dimension 5", p.quadrics.size() == 5, kPhiL);
  rec.check("quadrics vanish at the base points", vanish, kPhiL);
  rec.check("fitted cubic is unique (kernel dimension 1)", p.cubic_kernel_dim == 1, kPhiL);
  bool on = true;
  for (int t = 0; t < 30; ++t) on = on && sgn(p.cubic(phi_L_eval(p, rng.rational_vector(4, 30, 11)))) == 0;
  rec.check("random images lie on the fitted cubic", on, kPhiL);

  auto grad = p.cubic.gradient();
  std::vector<Vec<Rational>> joins;
  bool contracted = true, singular = true;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      auto node = join_image(p, i, j);
      for (int s = 0; s < 3; ++s) {
        Rational a = rng.nonzero_integer(9), b = rng.nonzero_integer(9);
        contracted = contracted && proportional(phi_L_raw(p, axpy(a, p.base[i], b, p.base[j])), node);
      }
      for (const auto& g : grad) singular = singular && sgn(g(node)) == 0;
      joins.push_back(node);
    }
  bool distinct = true;
  for (std::size_t a = 0; a < joins.size(); ++a)
    for (std::size_t b = a + 1; b < joins.size(); ++b) distinct = distinct && !proportional(joins[a], joins[b]);
  rec.check("10 joins are contracted", contracted, kPhiL);
  rec.check("contracted joins are singular points of the cubic", singular, kPhiL);
  rec.check("the 10 singular images are distinct", distinct && joins.size() == 10, kPhiL);

  int triple_ok = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      for (std::size_t k = j + 1; k < 5; ++k) {
        std::vector<Vec<Rational>> imgs;
        for (int s = 0; s < 10; ++s) {
          Vec<Rational> x = axpy(Rational(1), axpy(rng.rational(), p.base[i], rng.rational(), p.base[j]), rng.rational(), p.base[k]);
          try {
            imgs.push_back(phi_L_eval(p, x));
          } catch (const DegenerateInput&) {
          }
        }
        if (span_rank(imgs) != 3) continue;
        auto span = row_space(imgs);
        if (p.cubic.compose(Matrix<Rational>::from_columns(span)).is_zero()) ++triple_ok;
      }
  rec.check("images of the 10 triple planes are planes in the cubic", triple_ok == 10, kPlanes);
  int blown = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    auto m = base_point_plane_map(p, i);
    if (rank(m) == 3 && p.cubic.compose(m).is_zero()) ++blown;
  }
  rec.check("the 5 blown-up base points map to planes in the cubic", blown == 5, kPlanes);
  Json bp = Json::array();
  for (const auto& b : p.base) bp.push_back(to_json_value(b));
  r.data = Json{{"base_points", bp}, {"quadrics", p.quadrics.size()}, {"cubic_kernel_dim", p.cubic_kernel_dim},
                {"fit_samples", p.fit_samples}, {"triple_planes", triple_ok}, {"base_point_planes", blown}};
}

inline void suite_lines(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  const int trials = cfg.trials_or(100);
  PhiL p = build_phi_L(load_base_points(cfg), cfg.seed);
  Rng rng = suite_rng(cfg, "lines");
  int finite = 0, simple = 0, cone3 = 0, agree = 0, errors = 0;
  double max_dist = 0.0, max_res = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto x = random_general_point(p, rng);
    try {
      auto c = six_line_cross_check(p, x, rng);
      finite += c.fan.kind == FanKind::Finite;
      simple += c.fan.lines.size() == 6 && c.fan.all_simple();
      cone3 += c.fan.cone_rank.rank == 3;
      max_dist = std::max(max_dist, c.matching.max_distance);
      max_res = std::max(max_res, c.fan.max_residual);
      agree += c.matching.max_distance <= cfg.tol("line_distance") && c.fan.max_residual <= cfg.tol("line_residual");
    } catch (const DegenerateInput&) {
      ++errors;
    }
  }
  rec.check("direct solver returns a finite fan", finite == trials, kSixLines);
  rec.check("6 simple lines", simple == trials, kSixLines);
  rec.check("contact cone has rank 3", cone3 == trials, kSixLines);
  rec.check("line residual within tolerance", max_res <= cfg.tol("line_residual") && errors == 0, kSixLines, max_res);
  rec.check("agreement with joins plus twisted cubic", agree == trials, kSixLines, max_dist);
  r.data = Json{{"trials", trials}, {"agreements", agree}, {"errors", errors}, {"max_plucker_distance", format_double(max_dist)},
                {"max_residual", format_double(max_res)}};
}

inline void suite_plane_lines(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  const int trials = cfg.trials_or(50);
  const auto& m = segre_model();
  Rng rng = suite_rng(cfg, "lemma-pl");
  int pencil = 0, two = 0, off = 0, monotone = 0, probes = 0;
  double max_res = 0.0, worst_last = 0.0;
  Json dists = Json::array();
  for (int t = 0; t < trials; ++t) {
    std::size_t k = static_cast<std::size_t>(rng.integer(0, 14));
    auto x = random_plane_point(m, k, rng);
    auto fan = lines_through(m.threefold, SegreModel::to_chart(x));
    bool shared = fan.kind == FanKind::PencilPlusResidual && fan.pencil_planes.size() == 1;
    if (shared) {
      bool same = true;
      for (const auto& b : m.planes[k].basis) same = same && fan.pencil_planes[0].contains(vec_cast<Complex>(SegreModel::to_chart(b)));
      shared = same;
    }
    pencil += shared;
    two += fan.lines.size() == 2 && fan.all_simple();
    max_res = std::max(max_res, fan.max_residual);
    bool leave = shared;
    for (const auto& l : fan.lines) leave = leave && !fan.pencil_planes[0].contains(l.line.second(), 1e-6);
    off += leave;
    if (t % 5 == 0) {
      auto mf = marked_lines_at_plane_point(m, x);
      auto probe = continuity_probe(m, x, mf, rng);
      ++probes;
      monotone += probe.monotone;
      worst_last = std::max(worst_last, probe.distances.back());
      dists.push_back(Json{format_double(probe.distances[0]), format_double(probe.distances[1]), format_double(probe.distances[2])});
    }
  }
  rec.check("shared linear factor is the plane of the cubic", pencil == trials, kPlaneLines);
  rec.check("exactly 2 simple residual lines", two == trials, kPlaneLines);
  rec.check("residual lines leave the plane", off == trials, kPlaneLines);
  rec.check("residual lines lie on the cubic", max_res <= cfg.tol("line_residual"), kPlaneLines, max_res);
  rec.check("continuity probe decreases monotonically", monotone == probes, kLimit, worst_last);

  // Point on a line through two nodes: two pencils, limit pair from the second plane.
  auto q = random_plane_point(m, static_cast<std::size_t>(rng.integer(0, 14)), rng, true);
  auto mq = marked_lines_at_plane_point(m, q);
  int doubles = 0;
  for (const auto& l : mq.lines) doubles += l.multiplicity == 2;
  rec.check("point on a node line: two pencils and one double line", mq.fan.kind == FanKind::TwoPencils && doubles == 1, kLimit);
  auto pq = continuity_probe(m, q, mq, rng);
  rec.check("point on a node line: continuity probe decreases monotonically", pq.monotone, kLimit, pq.distances.back());
  r.data = Json{{"trials", trials}, {"probes", probes}, {"probe_distances", dists}, {"max_residual", format_double(max_res)}};
}

inline void suite_node_cone(const RunConfig&, SuiteReport& r) {
  Recorder rec(r);
  const auto& m = segre_model();
  Json rows = Json::array();
  for (std::size_t n = 0; n < m.nodes.size(); ++n) {
    auto c = node_cone_analysis(m, n);
    std::string tag = "node " + std::to_string(n) + ": ";
    rec.check(tag + "linear term vanishes", c.f1_vanishes, kNodes);
    rec.check(tag + "cone rank 4", c.cone_rank == 4, kNodes);
    rec.check(tag + "6 incident planes lie in the cone", c.planes.size() == 6 && c.planes_in_cone, kPlanes);
    rec.check(tag + "planes split 3+3 by ruling", c.rulings[0].size() == 3 && c.rulings[1].size() == 3 && c.split_ok, kPlanes);
    rows.push_back(Json{{"node", to_json_value(c.node)}, {"cone_rank", c.cone_rank}, {"ruling_a", c.rulings[0]}, {"ruling_b", c.rulings[1]}});
  }
  r.data = Json{{"nodes", rows}};
}

inline BinarySextic<Rational> random_rational_sextic(Rng& rng) {
  BinarySextic<Rational> s;
  for (auto& p : s.points) p = {rng.rational(), rng.rational()};
  return s;
}

inline BinarySextic<Complex> random_complex_sextic(Rng& rng) {
  BinarySextic<Complex> s;
  for (auto& p : s.points) p = {rng.complex_unit(), rng.complex_unit()};
  return s;
}

inline std::array<Complex, 4> random_mobius(Rng& rng) {
  for (;;) {
    std::array<Complex, 4> m{rng.complex_unit(), rng.complex_unit(), rng.complex_unit(), rng.complex_unit()};
    if (std::abs(m[0] * m[3] - m[1] * m[2]) > 0.1) return m;
  }
}

inline void suite_invariants(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  Rng rng = suite_rng(cfg, "invariants");
  int oracle_ok = 0;
  const int oracle_cases = 20;
  for (int t = 0; t < oracle_cases; ++t) {
    auto s = random_rational_sextic(rng);
    auto a = igusa_clebsch(s), b = igusa_clebsch_by_permutations(s);
    oracle_ok += a.i2 == b.i2 && a.i4 == b.i4 && a.i6 == b.i6 && a.i10 == b.i10;
  }
  rec.check("closed forms match the term-expansion oracle exactly", oracle_ok == oracle_cases, kInvariants);

  int zero = 0;
  for (int t = 0; t < 20; ++t) {
    auto s = random_rational_sextic(rng);
    std::size_t i = static_cast<std::size_t>(rng.integer(0, 5)), j = static_cast<std::size_t>(rng.integer(0, 4));
    if (j >= i) ++j;
    s.points[j] = {s.points[i][0] * 3, s.points[i][1] * 3};
    zero += sgn(igusa_clebsch(s).i10) == 0;
  }
  rec.check("I10 vanishes exactly on repeated roots", zero == 20, kInvariants);

  const int fuzz = cfg.trials_or(1000);
  const double tol = cfg.tol("mobius");
  int m2_ok = 0, m06_ok = 0;
  double m2_margin = 0.0, m06_margin = 0.0;
  for (int t = 0; t < fuzz; ++t) {
    auto x = random_complex_sextic(rng);
    auto y = x.transformed(random_mobius(rng));
    auto c = m2_compare(igusa_clebsch(x), igusa_clebsch(y), tol);
    m2_ok += c.equal;
    m2_margin = std::max(m2_margin, c.margin);
    double d = m06_distance(m06_coords(x), m06_coords(y));
    m06_ok += d <= tol;
    m06_margin = std::max(m06_margin, d);
  }
  rec.check("m2_equal is Möbius invariant", m2_ok == fuzz, kInvariants, m2_margin);
  rec.check("m06_coords is Möbius invariant", m06_ok == fuzz, kInvariants, m06_margin);

  auto fr = forgetful_fiber_check(random_rational_sextic(rng));
  rec.check("720 relabelings keep the M2 class", fr.all_equal, kForgetful);
  rec.check("720 relabelings give 720 distinct M06 points", fr.distinct == 720, kForgetful);
  r.data = Json{{"oracle_cases", oracle_cases}, {"fuzz_trials", fuzz}, {"m2_max_margin", format_double(m2_margin)},
                {"m06_max_distance", format_double(m06_margin)}, {"forgetful_distinct", fr.distinct}};
}

inline void suite_phi0_orbit(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  const auto& m = segre_model();
  Rng rng = suite_rng(cfg, "phi0-orbit");
  const int points = cfg.trials_or(5);
  const double tol = cfg.tol("orbit_margin");
  Json orbits = Json::array();
  int generic = 0, equal = 0;
  double margin = 0.0;
  std::vector<IgusaInvariants<Complex>> reps;
  for (int t = 0; t < points; ++t) {
    auto p = random_segre_point(m, rng);
    auto s = s6_fiber_check(m, p, tol);
    generic += s.generic && s.evaluated == 720;
    equal += s.all_equal && s.max_margin <= tol;
    margin = std::max(margin, s.max_margin);
    reps.push_back(phi0(m, p).invariants);
    orbits.push_back(Json{{"point", to_json_value(p)}, {"orbit_size", s.orbit_size}, {"max_margin", format_double(s.max_margin)}});
  }
  rec.check("orbits have 720 distinct points", generic == points, kPhi0);
  rec.check("invariants agree along each orbit", equal == points, kPhi0, margin);
  bool separated = true;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b) separated = separated && !m2_equal(reps[a], reps[b], tol);
  rec.check("distinct orbits have distinct invariants", separated, kPhi0);

  auto fixed = transposition_fixed_point(m, rng);
  auto fs = s6_orbit(fixed);
  rec.check("transposition-fixed point is flagged non-generic", fs.size() < 720, kPhi0);

  auto p = random_segre_point(m, rng);
  auto a = phi0(m, p, 1).invariants;
  double slice = 0.0;
  bool slice_ok = true;
  for (std::uint64_t s : {2u, 3u}) {
    auto c = m2_compare(a, phi0(m, p, s).invariants, tol);
    slice_ok = slice_ok && c.equal;
    slice = std::max(slice, c.margin);
  }
  rec.check("value independent of the slicing hyperplane", slice_ok, "plumbing", slice);

  auto hint_of = [&](const Vec<Rational>& x) -> std::string {
    try {
      phi0(m, x);
      return "";
    } catch (const DegenerateInput& e) {
      return e.hint();
    }
  };
  rec.check("plane points route to the boundary", hint_of(random_plane_point(m, static_cast<std::size_t>(rng.integer(0, 14)), rng)) == "boundary",
            "plumbing");
  rec.check("nodes route to the indeterminacy locus", hint_of(m.nodes[static_cast<std::size_t>(rng.integer(0, 9))]) == "indeterminacy", "plumbing");

  int rank3 = 0, dominant = 0;
  const int cubics = 10;
  for (int t = 0; t < cubics; ++t) {
    auto f = random_cubic(rng);
    auto x = random_point_on_cubic(f, rng);
    try {
      auto v = phi_general(f, x);
      rank3 += v.fan.cone_rank.rank == 3 && v.fan.all_simple();
      auto d = phi_dominance(f, x);
      dominant += d.rank.rank == 3 && d.rank_half.rank == 3;
    } catch (const DegenerateInput&) {
    }
  }
  rec.check("general cubics: six lines on an irreducible (rank 3) cone", rank3 == cubics, kGeneralCubic);
  rec.check("general cubics: differential of phi has rank 3", dominant == cubics, kGeneralCubic);
  r.data = Json{{"orbits", orbits}, {"fixed_point_orbit", fs.size()}, {"degree_of_phi0", "720 (paper-accepted: Igusa birationality)"}};
}

inline void suite_g_orbit(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  const auto& c = ruling_config();
  Rng rng = suite_rng(cfg, "g-orbit");
  std::size_t preserving = 0;
  for (std::size_t k = 0; k < c.group.size(); ++k) preserving += c.preserves_rulings(k);
  rec.check("|G| = 72", c.group.size() == 72, kGroup);
  rec.check("ruling-preserving subgroup has order 36", preserving == 36, kGroup);
  auto [s, t] = random_tangency(rng);
  auto tangent = tangent_plane_at(c, s, t);
  auto general = random_general_plane(c, rng);
  auto g = g_orbit_fiber_check(c, tangent, general);
  rec.check("tangent-plane orbit has 72 planes", g.orbit_size == 72, kGOrbit);
  rec.check("tangent-plane stabilizer is trivial", g.stabilizer == 1, kGOrbit);
  rec.check("orbit images are boundary points", g.all_boundary, kGOrbit);
  rec.check("orbit images agree under label matching", g.all_equal, kGOrbit);
  rec.check("label matching is needed (raw images differ)", g.raw_distinct > 1, "plumbing");
  rec.check("general-plane orbit agrees under label matching", g.general_all_equal_matched, kGOrbit);
  auto d = diff_rank(c, vec_cast<Complex>(general));
  rec.check("generic differential rank 3, stable under step halving", d.rank.rank == 3 && d.rank_half.rank == 3 && d.stable, kPlaneDegree,
            d.rank.gap_ratio);
  auto pd = pencil_derivative(c, s, t);
  rec.check("pencil-direction derivative vanishes", pd.ratio <= cfg.tol("pencil_ratio"), kPlaneDegree, pd.ratio);
  bool inverse_ok = true;
  for (int k = 0; k < 10; ++k) {
    auto h = random_general_plane(c, rng);
    inverse_ok = inverse_ok && proportional(phi_prime_inverse(*phi_prime(c, h).interior), h);
  }
  rec.check("closed-form inverse recovers general planes", inverse_ok, kPlaneDegree);
  r.data = Json{{"tangency", Json{to_string(s), to_string(t)}},
                {"tangent_plane", to_json_value(tangent)},
                {"orbit_size", g.orbit_size},
                {"stabilizer", g.stabilizer},
                {"raw_distinct", g.raw_distinct},
                {"general_raw_distinct", g.general_raw_distinct},
                {"diff_rank", d.rank.rank},
                {"pencil_norm", format_double(pd.pencil_norm)},
                {"other_pencil_norm", format_double(pd.other_pencil_norm)},
                {"typical_norm", format_double(pd.typical_norm)}};
}

inline Json to_json(const LocalDegreeReport& l) {
  return Json{{"eps", format_double(l.eps)},       {"seeds", l.seeds},       {"converged", l.converged},
              {"in_ball", l.in_ball},              {"clusters", l.clusters}, {"contains_target_plane", l.contains_target_plane}};
}

inline void suite_local_degree(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  const auto& c = ruling_config();
  Rng rng = suite_rng(cfg, "local-degree");
  auto [s, t] = random_tangency(rng);
  auto tangent = tangent_plane_at(c, s, t);
  Json runs = Json::array();
  std::uint64_t newton_seed = rng.next_seed();
  for (double eps : {1e-5, 1e-4, 1e-3}) {
    auto l = local_degree_at_tangent(c, tangent, eps, newton_seed);
    std::string tag = "eps " + format_double(eps) + ": ";
    rec.check(tag + "local degree at the tangent plane is 2", l.clusters == 2, kPlaneDegree, static_cast<double>(l.clusters));
    rec.check(tag + "the perturbed plane is among the solutions", l.contains_target_plane, "plumbing");
    runs.push_back(to_json(l));
  }
  auto general = random_general_plane(c, rng);
  auto lg = local_degree_at(c, vec_cast<Complex>(general), 1e-4, newton_seed);
  rec.check("contrast: local degree at a general plane is 1", lg.clusters == 1 && lg.contains_target_plane, "plumbing",
            static_cast<double>(lg.clusters));
  r.data = Json{{"tangency", Json{to_string(s), to_string(t)}}, {"tangent", runs}, {"general", to_json(lg)}};
  if (cfg.long_run) {
    // Random-seed Newton search for the full fibre; reported, not asserted.
    auto gf = global_fiber_search(c, vec_cast<Complex>(general), 200, newton_seed);
    r.data["global_fiber_search"] = Json{{"seeds", gf.seeds}, {"converged", gf.converged}, {"distinct", gf.distinct}};
  }
}

inline void suite_exceptional(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  auto setup = build_exceptional_setup(ruling_config());
  Rng rng = suite_rng(cfg, "exceptional");
  const int trials = cfg.trials_or(50);
  int on = 0, distinct = 0, plane = 0, invol = 0, inv = 0, factors = 0;
  for (int t = 0; t < trials; ++t) {
    auto x = random_general_point_on_exceptional(setup, rng);
    auto v = exceptional_map(setup, x);
    on += setup.quadric.contains(v.partner);
    distinct += v.partner_distinct;
    plane += v.same_plane;
    invol += v.partner_involution;
    inv += v.partner_invariants_equal;
    factors += v.factors_through_plane_map;
  }
  rec.check("partner lies on the quadric", on == trials, kExceptional);
  rec.check("partner differs from the point", distinct == trials, kExceptional);
  rec.check("partner has the same plane", plane == trials, kExceptional);
  rec.check("partner map is an involution", invol == trials, kExceptional);
  rec.check("partner has equal invariants", inv == trials, kExceptional);
  rec.check("map factors through the plane map", factors == trials, kExceptional);
  r.data = Json{{"trials", trials}};
}

inline void suite_degree_report(const RunConfig& cfg, SuiteReport& r) {
  Recorder rec(r);
  Rng rng = suite_rng(cfg, "degree-report");
  DegreeEvidence ev;
  auto f = segre_facts(false);
  ev.node_count = f.nodes;
  ev.incidence_ok = f.incidence && f.planes_on_cubic;

  const auto& m = segre_model();
  auto s6 = s6_fiber_check(m, random_segre_point(m, rng), cfg.tol("orbit_margin"));
  ev.s6_orbit_size = s6.orbit_size;
  ev.s6_invariants_equal = s6.all_equal;

  const auto& c = ruling_config();
  ev.group_order = c.group.size();
  std::size_t preserving = 0;
  for (std::size_t k = 0; k < c.group.size(); ++k) preserving += c.preserves_rulings(k);
  ev.ruling_subgroup_order = preserving;
  auto [s, t] = random_tangency(rng);
  auto tangent = tangent_plane_at(c, s, t);
  auto general = random_general_plane(c, rng);
  auto g = g_orbit_fiber_check(c, tangent, general);
  ev.tangent_orbit_size = g.stabilizer == 1 ? g.orbit_size : 0;
  ev.tangent_images_equal = g.all_boundary && g.all_equal;

  // The multiplicity counts only if it is the same at every radius.
  std::uint64_t newton_seed = rng.next_seed();
  std::optional<int> mult;
  bool stable = true;
  for (double eps : {1e-5, 1e-4, 1e-3}) {
    auto l = local_degree_at_tangent(c, tangent, eps, newton_seed);
    if (!l.contains_target_plane) stable = false;
    if (mult && *mult != l.clusters) stable = false;
    mult = l.clusters;
  }
  ev.local_degree = stable ? *mult : -1;
  auto d = diff_rank(c, vec_cast<Complex>(general));
  ev.generic_diff_rank = d.stable ? d.rank.rank : -1;
  ev.pencil_ratio = pencil_derivative(c, s, t).ratio;

  auto fr = forgetful_fiber_check(*phi_prime(c, general).sextic);
  ev.forgetful_distinct = fr.distinct;
  ev.forgetful_equal = fr.all_equal;

  auto setup = build_exceptional_setup(c);
  bool two = true;
  for (int k = 0; k < 5; ++k) {
    auto v = exceptional_map(setup, random_general_point_on_exceptional(setup, rng));
    two = two && v.partner_distinct && v.same_plane && v.partner_involution && v.partner_invariants_equal;
  }
  ev.plane_fiber_two = two;

  auto rep = degree_report(ev, cfg.seed);
  for (const auto& i : rep.ingredients) {
    std::string label = i.name + " [" + to_string(i.status) + "]";
    rec.check(label, i.status != Status::Failed, kDegree);
  }
  bool accepted = std::any_of(rep.ingredients.begin(), rep.ingredients.end(), [](const auto& i) { return i.status == Status::PaperAccepted; });
  rec.check("Igusa birationality is labelled paper-accepted", accepted, kDegree);
  rec.check("delta = 207360 = 6! * 288", rep.delta == 207360 && rep.delta == Integer(720) * 288, kDegree);
  rec.check("deg(phi) = 720 + 10 * 207360 = 2074320", rep.total == 2074320 && rep.total == Integer(720) + 10 * rep.delta, kDegree);
  rec.check("720 * 2881 = 2074320", rep.arithmetic_ok, kDegree);
  r.data = to_json(rep);
  r.data["tolerances"] = to_json(cfg)["tolerances"];
}

using SuiteFn = std::function<void(const RunConfig&, SuiteReport&)>;

inline const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> t{
      {"segre", suite_segre},           {"phi-l", suite_phi_l},           {"lines", suite_lines},
      {"lemma-pl", suite_plane_lines},     {"node-cone", suite_node_cone},   {"invariants", suite_invariants},
      {"phi0-orbit", suite_phi0_orbit}, {"g-orbit", suite_g_orbit},       {"local-degree", suite_local_degree},
      {"exceptional", suite_exceptional}, {"degree-report", suite_degree_report},
  };
  return t;
}

inline SuiteReport run_single(const std::string& name, const RunConfig& cfg) {
  auto it = suite_table().find(name);
  if (it == suite_table().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteReport r;
  r.suite = name;
  r.config = to_json(cfg);
  ScopedPrecision prec(cfg.precision);
  auto start = std::chrono::steady_clock::now();
  it->second(cfg, r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

/// Runs one named suite, or every suite in canonical order for "all".
inline std::vector<SuiteReport> run_suites(const std::string& name, const RunConfig& cfg) {
  std::vector<SuiteReport> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(detail::run_single(n, cfg));
  } else {
    out.push_back(detail::run_single(name, cfg));
  }
  return out;
}

/// Single report; for "all" the rows are prefixed with their suite name and
/// the data is keyed by suite.
inline SuiteReport run_suite(const std::string& name, const RunConfig& cfg) {
  if (name != "all") return detail::run_single(name, cfg);
  SuiteReport all;
  all.suite = "all";
  all.config = to_json(cfg);
  for (auto& r : run_suites("all", cfg)) {
    for (auto& a : r.rows) all.rows.push_back({r.suite + ": " + a.name, a.pass, a.margin, std::move(a.anchor)});
    all.data[r.suite] = std::move(r.data);
    all.wall_seconds += r.wall_seconds;
  }
  return all;
}

inline Json suites_to_json(const std::vector<SuiteReport>& reports, const RunConfig& cfg, bool with_time = true) {
  Json arr = Json::array();
  bool ok = true;
  for (const auto& r : reports) {
    Json j = to_json(r, with_time);
    j.erase("config");
    arr.push_back(std::move(j));
    ok = ok && r.passed();
  }
  return Json{{"config", to_json(cfg)}, {"suites", arr}, {"passed", ok}};
}

}  // namespace cubicmod
