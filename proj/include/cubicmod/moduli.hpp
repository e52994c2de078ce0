#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "cubicmod/jsonfmt.hpp"
#include "cubicmod/projgeom.hpp"
#include "cubicmod/segre.hpp"

namespace cubicmod {

template <class S>
P1Point<S> p1_infinity() {
  return {S(1), S(0)};
}

template <class S>
P1Point<S> p1_value(const S& x) {
  return {x, S(1)};
}

/// Six ordered points of P^1 in homogeneous coordinates (x : y), standing for
/// the binary sextic with these roots.
template <class S>
struct BinarySextic {
  std::array<P1Point<S>, 6> points;

  bool distinct(double tol = 1e-12) const {
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        if (p1_equal(points[i], points[j], tol)) return false;
    return true;
  }

  /// Label permutation: the point labelled i moves to label g[i].
  BinarySextic relabeled(const Perm6& g) const {
    BinarySextic out;
    for (std::size_t i = 0; i < 6; ++i) out.points[static_cast<std::size_t>(g[i])] = points[i];
    return out;
  }

  /// Image under the Möbius map with matrix [[a, b], [c, d]].
  BinarySextic transformed(const std::array<S, 4>& m) const {
    BinarySextic out;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& p = points[i];
      out.points[i] = {m[0] * p[0] + m[1] * p[1], m[2] * p[0] + m[3] * p[1]};
    }
    return out;
  }

  template <class T>
  BinarySextic<T> cast() const {
    BinarySextic<T> out;
    for (std::size_t i = 0; i < 6; ++i) out.points[i] = {scalar_cast<T>(points[i][0]), scalar_cast<T>(points[i][1])};
    return out;
  }
};

template <class S>
BinarySextic<S> sextic_from(const std::array<std::optional<S>, 6>& values) {
  BinarySextic<S> s;
  for (std::size_t i = 0; i < 6; ++i) s.points[i] = values[i] ? p1_value(*values[i]) : p1_infinity<S>();
  return s;
}

// ---------------------------------------------------------------------------
// Igusa-Clebsch invariants.

template <class S>
struct IgusaInvariants {
  S i2, i4, i6, i10;

  std::array<S, 4> values() const { return {i2, i4, i6, i10}; }
};

inline constexpr std::array<int, 4> kIgusaWeights{2, 4, 6, 10};

namespace detail {

template <class S>
std::array<std::array<S, 6>, 6> squared_brackets(const BinarySextic<S>& s) {
  std::array<std::array<S, 6>, 6> d{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      S b = bracket(s.points[i], s.points[j]);
      d[i][j] = b * b;
    }
  return d;
}

// The ten splits of the labels into two triples, first triple holding 0.
inline std::vector<std::pair<std::array<int, 3>, std::array<int, 3>>> triple_splits() {
  std::vector<std::pair<std::array<int, 3>, std::array<int, 3>>> out;
  for (int a = 1; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      std::array<int, 3> t{0, a, b}, u{};
      for (int i = 1, k = 0; i < 6; ++i)
        if (i != a && i != b) u[static_cast<std::size_t>(k++)] = i;
      out.push_back({t, u});
    }
  return out;
}

}  // namespace detail

/// Classical invariants in terms of the squared brackets (ij)^2 with
/// (ij) = x_i y_j - x_j y_i:
///   I2  = sum over the 15 pairings of (ab)^2 (cd)^2 (ef)^2,
///   I4  = sum over the 10 splits {abc|def} of (ab)^2 (bc)^2 (ca)^2 (de)^2 (ef)^2 (fd)^2,
///   I6  = sum over splits and the 6 bijections abc -> def of the I4 term times (ad)^2 (be)^2 (cf)^2,
///   I10 = product of the 15 squared brackets (the discriminant).
/// Homogeneous in each point, so points at infinity need no special case.
template <class S>
IgusaInvariants<S> igusa_clebsch(const BinarySextic<S>& s) {
  auto d = detail::squared_brackets(s);
  auto at = [&](int i, int j) -> const S& { return d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  IgusaInvariants<S> r{S(0), S(0), S(0), S(1)};
  for (const auto& m : perfect_matchings6()) {
    S t = at(m[0].first, m[0].second) * at(m[1].first, m[1].second);
    t *= at(m[2].first, m[2].second);
    r.i2 += t;
  }
  for (const auto& [t, u] : detail::triple_splits()) {
    S tri = at(t[0], t[1]) * at(t[1], t[2]);
    tri *= at(t[2], t[0]);
    tri *= at(u[0], u[1]);
    tri *= at(u[1], u[2]);
    tri *= at(u[2], u[0]);
    r.i4 += tri;
    std::array<int, 3> sigma{0, 1, 2};
    do {
      S cross = at(t[0], u[static_cast<std::size_t>(sigma[0])]) * at(t[1], u[static_cast<std::size_t>(sigma[1])]);
      cross *= at(t[2], u[static_cast<std::size_t>(sigma[2])]);
      S term = tri * cross;
      r.i6 += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) r.i10 *= at(i, j);
  return r;
}

/// Independent evaluation by expanding each defining sum over all 720
/// label permutations and dividing by the stabilizer order of the template
/// term (48, 72, 12). I10 is taken from the product over ordered pairs.
template <class S>
IgusaInvariants<S> igusa_clebsch_by_permutations(const BinarySextic<S>& s) {
  auto d = detail::squared_brackets(s);
  IgusaInvariants<S> r{S(0), S(0), S(0), S(1)};
  for (const auto& g : all_perm6()) {
    auto at = [&](int i, int j) -> const S& { return d[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])][static_cast<std::size_t>(g[static_cast<std::size_t>(j)])]; };
    S t2 = at(0, 1) * at(2, 3);
    t2 *= at(4, 5);
    r.i2 += t2;
    S t4 = at(0, 1) * at(1, 2);
    t4 *= at(2, 0);
    t4 *= at(3, 4);
    t4 *= at(4, 5);
    t4 *= at(5, 3);
    r.i4 += t4;
    S t6 = at(0, 3) * at(1, 4);
    t6 *= at(2, 5);
    t6 *= t4;
    r.i6 += t6;
  }
  r.i2 /= S(48);
  r.i4 /= S(72);
  r.i6 /= S(12);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j) r.i10 *= bracket(s.points[i], s.points[j]);
  r.i10 = -r.i10;
  return r;
}

// ---------------------------------------------------------------------------
// Weighted-projective equality.

struct M2Comparison {
  bool equal = false;
  /// Largest relative defect of the weight-0 cross identities (0 when exact).
  double margin = 0.0;
  bool zero_pattern_match = false;
};

/// Compares (I2, I4, I6, I10) up to weighted scaling: zero patterns first,
/// then a_i^(w_j/g) b_j^(w_i/g) = a_j^(w_i/g) b_i^(w_j/g) for every pair of
/// nonzero entries (g = gcd(w_i, w_j)). Float tuples are first scaled to
/// unit weighted size; `tol` is relative.
template <class S>
M2Comparison m2_compare(const IgusaInvariants<S>& a, const IgusaInvariants<S>& b, double tol = 1e-9) {
  auto va = a.values(), vb = b.values();
  std::array<bool, 4> za{}, zb{};
  if constexpr (is_exact_v<S>) {
    for (std::size_t k = 0; k < 4; ++k) {
      za[k] = sgn(va[k]) == 0;
      zb[k] = sgn(vb[k]) == 0;
    }
  } else {
    auto normalize = [&](std::array<S, 4>& v, std::array<bool, 4>& z) {
      double scale = 0.0;
      for (std::size_t k = 0; k < 4; ++k) scale = std::max(scale, std::pow(std::abs(v[k]), 1.0 / kIgusaWeights[k]));
      for (std::size_t k = 0; k < 4; ++k) {
        if (scale > 0.0) v[k] /= std::pow(scale, kIgusaWeights[k]);
        z[k] = std::abs(v[k]) <= tol;
      }
    };
    normalize(va, za);
    normalize(vb, zb);
  }
  M2Comparison out;
  out.zero_pattern_match = za == zb;
  if (!out.zero_pattern_match) {
    out.margin = 1.0;
    return out;
  }
  auto power = [](const S& x, int e) {
    S r(1);
    for (int k = 0; k < e; ++k) r *= x;
    return r;
  };
  out.equal = true;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (za[i] || za[j]) continue;
      int g = std::gcd(kIgusaWeights[i], kIgusaWeights[j]);
      int ei = kIgusaWeights[j] / g, ej = kIgusaWeights[i] / g;
      S lhs = power(va[i], ei) * power(vb[j], ej);
      S rhs = power(va[j], ej) * power(vb[i], ei);
      if constexpr (is_exact_v<S>) {
        if (lhs != rhs) {
          out.equal = false;
          out.margin = 1.0;
        }
      } else {
        double rel = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        out.margin = std::max(out.margin, rel);
      }
    }
  if constexpr (!is_exact_v<S>) out.equal = out.margin <= tol;
  return out;
}

template <class S>
bool m2_equal(const IgusaInvariants<S>& a, const IgusaInvariants<S>& b, double tol = 1e-9) {
  return m2_compare(a, b, tol).equal;
}

/// Absolute invariants I2^5/I10, I2^3 I4/I10, I2^2 I6/I10; need I10 != 0.
template <class S>
std::array<S, 3> absolute_invariants(const IgusaInvariants<S>& v) {
  if (ScalarTraits<S>::is_zero(v.i10, 0.0)) throw DegenerateInput("absolute_invariants: I10 vanishes");
  S i2sq = v.i2 * v.i2;
  S i2cu = i2sq * v.i2;
  S a = i2cu * i2sq;
  S b = i2cu * v.i4;
  S c = i2sq * v.i6;
  return {a / v.i10, b / v.i10, c / v.i10};
}

// ---------------------------------------------------------------------------
// Cross-ratio coordinates.

/// (lambda_4, lambda_5, lambda_6): the images of points 4, 5, 6 under the
/// Möbius map sending points 1, 2, 3 to 0, 1, infinity.
template <class S>
struct M06Point {
  std::array<S, 3> lambda;
};

template <class S>
M06Point<S> m06_coords(const BinarySextic<S>& s) {
  if (!s.distinct()) throw DegenerateInput("m06_coords: coincident points");
  M06Point<S> m;
  for (std::size_t k = 0; k < 3; ++k) m.lambda[k] = cross_ratio(s.points[0], s.points[1], s.points[2], s.points[k + 3]);
  return m;
}

/// Largest coordinate difference relative to max(1, |lambda|).
template <class S>
double m06_distance(const M06Point<S>& a, const M06Point<S>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    double diff = magnitude(S(a.lambda[k] - b.lambda[k]));
    d = std::max(d, diff / std::max({1.0, magnitude(a.lambda[k]), magnitude(b.lambda[k])}));
  }
  return d;
}

template <class S>
bool m06_equal(const M06Point<S>& a, const M06Point<S>& b, double tol = 1e-10) {
  if constexpr (is_exact_v<S>)
    return a.lambda == b.lambda;
  else
    return m06_distance(a, b) <= tol;
}

// ---------------------------------------------------------------------------
// Marked conics.

template <class S>
struct MarkedConic {
  QuadricForm<S> conic;
  std::array<Vec<S>, 6> points;
};

/// Parameters of the six marks under the parametrization seeded at mark
/// `seed_index` (which therefore lands at infinity). Degenerate conics raise
/// DegenerateInput with the routing hint "boundary".
template <class S>
BinarySextic<S> marked_conic_to_sextic(const MarkedConic<S>& mc, std::size_t seed_index = 0) {
  if (seed_index >= 6) throw std::invalid_argument("marked_conic_to_sextic: seed index out of range");
  auto rep = quadric_rank(mc.conic);
  if (rep.rank < 3) throw DegenerateInput("marked_conic_to_sextic: degenerate conic (rank " + std::to_string(rep.rank) + ")", "boundary");
  for (const auto& p : mc.points)
    if (!mc.conic.contains(p)) throw std::invalid_argument("marked_conic_to_sextic: marked point off the conic");
  auto par = conic_parametrize(mc.conic, mc.points[seed_index]);
  BinarySextic<S> s;
  for (std::size_t i = 0; i < 6; ++i) s.points[i] = par.param_of(mc.points[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Boundary points: two components with three marks each.

template <class S>
struct BoundaryComponent {
  std::array<int, 3> labels;
  std::array<P1Point<S>, 3> marks;
  P1Point<S> node;
};

/// Stable curve with two components; components[0] carries label 0, labels
/// inside a component are increasing, and node_ratio[c] is the image of the
/// node under the Möbius map sending the component's marks to 0, 1, infinity.
template <class S>
struct BoundaryM06Point {
  std::array<BoundaryComponent<S>, 2> components;
  std::array<S, 2> node_ratio;

  std::array<std::array<int, 3>, 2> partition() const { return {components[0].labels, components[1].labels}; }
};

template <class S>
BoundaryM06Point<S> make_boundary_point(BoundaryComponent<S> a, BoundaryComponent<S> b) {
  std::array<int, 6> seen{};
  for (const auto* c : {&a, &b})
    for (int l : c->labels) {
      if (l < 0 || l > 5) throw std::invalid_argument("boundary point: label out of range");
      ++seen[static_cast<std::size_t>(l)];
    }
  for (int n : seen)
    if (n != 1) throw std::invalid_argument("boundary point: labels must partition {0..5}");
  auto canon = [](BoundaryComponent<S>& c) {
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return c.labels[x] < c.labels[y]; });
    BoundaryComponent<S> d = c;
    for (std::size_t k = 0; k < 3; ++k) {
      d.labels[k] = c.labels[order[k]];
      d.marks[k] = c.marks[order[k]];
    }
    c = d;
    for (std::size_t i = 0; i < 3; ++i) {
      if (p1_equal(c.marks[i], c.node, 1e-9)) throw DegenerateInput("boundary point: marked point at the node");
      for (std::size_t j = i + 1; j < 3; ++j)
        if (p1_equal(c.marks[i], c.marks[j], 1e-9)) throw DegenerateInput("boundary point: coincident marks on a component");
    }
  };
  canon(a);
  canon(b);
  if (b.labels[0] == 0) std::swap(a, b);
  BoundaryM06Point<S> out{{a, b}, {}};
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& comp = out.components[c];
    out.node_ratio[c] = cross_ratio(comp.marks[0], comp.marks[1], comp.marks[2], comp.node);
  }
  return out;
}

/// Boundary point of two lines of a plane (or of any P^n) meeting at `node`,
/// each carrying three labelled points.
template <class S>
BoundaryM06Point<S> boundary_invariants(const ProjLine<S>& line_a, const std::array<int, 3>& labels_a, const std::array<Vec<S>, 3>& points_a,
                                        const ProjLine<S>& line_b, const std::array<int, 3>& labels_b, const std::array<Vec<S>, 3>& points_b,
                                        const Vec<S>& node) {
  if (same_line(line_a, line_b)) throw DegenerateInput("boundary_invariants: components coincide");
  auto component = [&](const ProjLine<S>& line, const std::array<int, 3>& labels, const std::array<Vec<S>, 3>& pts) {
    if (!line.contains(node, 1e-8)) throw DegenerateInput("boundary_invariants: node off a component");
    BoundaryComponent<S> c;
    c.labels = labels;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!line.contains(pts[k], 1e-8)) throw DegenerateInput("boundary_invariants: marked point off its component");
      c.marks[k] = line_coordinate(line, pts[k]);
    }
    c.node = line_coordinate(line, node);
    return c;
  };
  return make_boundary_point(component(line_a, labels_a, points_a), component(line_b, labels_b, points_b));
}

/// Renames label i to g[i].
template <class S>
BoundaryM06Point<S> relabel(const BoundaryM06Point<S>& p, const Perm6& g) {
  auto a = p.components[0], b = p.components[1];
  for (auto* c : {&a, &b})
    for (auto& l : c->labels) l = g[static_cast<std::size_t>(l)];
  return make_boundary_point(a, b);
}

/// Equality as stable pointed curves: same partition and node ratios.
template <class S>
bool boundary_equal(const BoundaryM06Point<S>& a, const BoundaryM06Point<S>& b, double tol = 1e-9) {
  if (a.partition() != b.partition()) return false;
  for (std::size_t c = 0; c < 2; ++c) {
    if constexpr (is_exact_v<S>) {
      if (a.node_ratio[c] != b.node_ratio[c]) return false;
    } else {
      double scale = std::max({1.0, std::abs(a.node_ratio[c]), std::abs(b.node_ratio[c])});
      if (std::abs(a.node_ratio[c] - b.node_ratio[c]) > tol * scale) return false;
    }
  }
  return true;
}

/// Value of the (lambda_4, lambda_5, lambda_6) chart at a boundary point of
/// type {1,2,3 | 4,5,6}: points 4, 5, 6 collide at the node position c seen
/// from the first component, giving (c, c, c). Other partitions leave the chart.
template <class S>
std::optional<std::array<S, 3>> lambda_chart(const BoundaryM06Point<S>& p) {
  if (p.components[0].labels != std::array<int, 3>{0, 1, 2}) return std::nullopt;
  S c = p.node_ratio[0];
  return std::array<S, 3>{c, c, c};
}

// ---------------------------------------------------------------------------
// JSON.

template <class S>
Json to_json(const IgusaInvariants<S>& v) {
  return Json{{"I2", to_json_value(v.i2)}, {"I4", to_json_value(v.i4)}, {"I6", to_json_value(v.i6)}, {"I10", to_json_value(v.i10)}};
}

template <class S>
Json to_json(const M06Point<S>& m) {
  return Json{{"lambda4", to_json_value(m.lambda[0])}, {"lambda5", to_json_value(m.lambda[1])}, {"lambda6", to_json_value(m.lambda[2])}};
}

template <class S>
Json to_json(const BoundaryM06Point<S>& p) {
  Json comps = Json::array();
  for (std::size_t c = 0; c < 2; ++c) {
    Json labels = Json::array();
    for (int l : p.components[c].labels) labels.push_back(l + 1);
    comps.push_back(Json{{"labels", labels}, {"node_ratio", to_json_value(p.node_ratio[c])}});
  }
  return Json{{"components", comps}};
}

}  // namespace cubicmod
