#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmod/expansion.hpp"
#include "cubicmod/numkit/elimination.hpp"
#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/multipoly.hpp"
#include "cubicmod/numkit/random.hpp"
#include "cubicmod/projgeom.hpp"

namespace cubicmod {

using Perm6 = std::array<int, 6>;
using Matching = std::array<std::pair<int, int>, 3>;

/// All 720 permutations of six letters in lexicographic order.
inline std::vector<Perm6> all_perm6() {
  std::vector<Perm6> out;
  Perm6 p{0, 1, 2, 3, 4, 5};
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// The 15 perfect matchings of {0..5}, each pair sorted, pairs ordered by
/// their first element.
inline std::vector<Matching> perfect_matchings6() {
  std::vector<Matching> out;
  for (int a = 1; a < 6; ++a) {
    std::vector<int> rest;
    for (int i = 1; i < 6; ++i)
      if (i != a) rest.push_back(i);
    for (int b = 1; b < 4; ++b) {
      std::vector<int> last;
      for (int i = 1; i < 4; ++i)
        if (i != b) last.push_back(rest[static_cast<std::size_t>(i)]);
      out.push_back({std::pair{0, a}, std::pair{rest[0], rest[static_cast<std::size_t>(b)]}, std::pair{last[0], last[1]}});
    }
  }
  return out;
}

/// Coordinate permutation: (g x)_{g(i)} = x_i.
template <class S>
Vec<S> permute_coords(const Perm6& g, const Vec<S>& x) {
  if (x.size() != 6) throw std::invalid_argument("permute_coords: need a point of P^5");
  Vec<S> y(6);
  for (std::size_t i = 0; i < 6; ++i) y[static_cast<std::size_t>(g[i])] = x[i];
  return y;
}

inline Matching permute_matching(const Perm6& g, const Matching& m) {
  Matching out;
  for (std::size_t k = 0; k < 3; ++k) {
    int a = g[static_cast<std::size_t>(m[k].first)], b = g[static_cast<std::size_t>(m[k].second)];
    out[k] = {std::min(a, b), std::max(a, b)};
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SegrePlane {
  Matching matching;
  /// Covectors x_i + x_j for the three pairs.
  std::vector<Vec<Rational>> equations;
  /// Spanning vectors e_i - e_j for the three pairs.
  std::vector<Vec<Rational>> basis;
};

/// The cubic sum x_i^3 on the hyperplane sum x_i = 0 of P^5, with its 10
/// nodes and 15 planes. The affine chart to P^4 keeps x_0..x_4 and sets
/// x_5 = -(x_0 + ... + x_4).
struct SegreModel {
  MultiPoly<Rational> cubic6;
  MultiPoly<Rational> threefold;  // cubic in the P^4 chart
  std::vector<Vec<Rational>> nodes;
  std::vector<SegrePlane> planes;
  /// incidence[plane][node]
  std::vector<std::vector<bool>> incidence;

  std::vector<int> nodes_on_plane(std::size_t k) const {
    std::vector<int> out;
    for (std::size_t n = 0; n < nodes.size(); ++n)
      if (incidence[k][n]) out.push_back(static_cast<int>(n));
    return out;
  }
  std::vector<int> planes_through_node(std::size_t n) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < planes.size(); ++k)
      if (incidence[k][n]) out.push_back(static_cast<int>(k));
    return out;
  }

  int node_index(const Vec<Rational>& x) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (proportional(nodes[i], x)) return static_cast<int>(i);
    return -1;
  }
  int plane_index(const Matching& m) const {
    for (std::size_t i = 0; i < planes.size(); ++i)
      if (planes[i].matching == m) return static_cast<int>(i);
    return -1;
  }

  /// Index of a plane containing x, or -1.
  template <class S>
  int plane_containing(const Vec<S>& x, double tol = 1e-10) const {
    for (std::size_t k = 0; k < planes.size(); ++k) {
      bool in = true;
      for (const auto& h : planes[k].equations) {
        S v = dot(vec_cast<S>(h), x);
        if (!ScalarTraits<S>::is_zero(v, tol * sup_norm(x))) in = false;
      }
      if (in) return static_cast<int>(k);
    }
    return -1;
  }

  template <class S>
  static Vec<S> to_chart(const Vec<S>& x) {
    if (x.size() != 6) throw std::invalid_argument("to_chart: need a point of P^5");
    return Vec<S>(x.begin(), x.begin() + 5);
  }
  template <class S>
  static Vec<S> from_chart(const Vec<S>& y) {
    if (y.size() != 5) throw std::invalid_argument("from_chart: need a point of P^4");
    Vec<S> x = y;
    S s(0);
    for (const auto& v : y) s += v;
    x.push_back(-s);
    return x;
  }
  /// 6 x 5 matrix of the chart inclusion.
  static Matrix<Rational> chart_matrix() {
    Matrix<Rational> e(6, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      e(i, i) = 1;
      e(5, i) = -1;
    }
    return e;
  }
};

/// Builds the standard model and verifies its invariants exactly; throws
/// std::logic_error if any fails.
inline SegreModel build_standard_segre() {
  SegreModel m;
  m.cubic6 = MultiPoly<Rational>(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    Exponent e(6, 0);
    e[i] = 3;
    m.cubic6.add_term(e, 1);
  }
  m.threefold = m.cubic6.compose(SegreModel::chart_matrix());

  // Nodes: three +1 and three -1 entries, x_0 = +1.
  for (int a = 1; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      Vec<Rational> n(6, Rational(-1));
      n[0] = n[static_cast<std::size_t>(a)] = n[static_cast<std::size_t>(b)] = 1;
      m.nodes.push_back(n);
    }
  for (const auto& mt : perfect_matchings6()) {
    SegrePlane p;
    p.matching = mt;
    for (auto [i, j] : mt) {
      Vec<Rational> h(6, Rational(0)), v(6, Rational(0));
      h[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(j)] = 1;
      v[static_cast<std::size_t>(i)] = 1;
      v[static_cast<std::size_t>(j)] = -1;
      p.equations.push_back(h);
      p.basis.push_back(v);
    }
    m.planes.push_back(p);
  }
  m.incidence.assign(m.planes.size(), std::vector<bool>(m.nodes.size(), false));
  for (std::size_t k = 0; k < m.planes.size(); ++k)
    for (std::size_t n = 0; n < m.nodes.size(); ++n) {
      bool in = true;
      for (const auto& h : m.planes[k].equations) in = in && sgn(dot(h, m.nodes[n])) == 0;
      m.incidence[k][n] = in;
    }

  // Invariants.
  auto grad = m.threefold.gradient();
  for (const auto& n : m.nodes) {
    Vec<Rational> y = SegreModel::to_chart(n);
    if (sgn(m.threefold(y)) != 0) throw std::logic_error("segre: node off the cubic");
    for (const auto& g : grad)
      if (sgn(g(y)) != 0) throw std::logic_error("segre: node with nonzero restricted gradient");
  }
  for (const auto& p : m.planes)
    if (!m.cubic6.compose(Matrix<Rational>::from_columns(p.basis)).is_zero()) throw std::logic_error("segre: plane not on the cubic");
  for (std::size_t k = 0; k < m.planes.size(); ++k)
    if (m.nodes_on_plane(k).size() != 4) throw std::logic_error("segre: plane without exactly 4 nodes");
  for (std::size_t n = 0; n < m.nodes.size(); ++n)
    if (m.planes_through_node(n).size() != 6) throw std::logic_error("segre: node without exactly 6 planes");
  return m;
}

// ---------------------------------------------------------------------------
// Tangent cone at a node.

struct NodeConeReport {
  Vec<Rational> node;
  bool f1_vanishes = false;
  int cone_rank = 0;
  std::vector<int> planes;
  /// F2 and F3 vanish identically on every incident plane.
  bool planes_in_cone = false;
  /// Plane indices by ruling of the cone's base quadric.
  std::array<std::vector<int>, 2> rulings;
  /// 3 + 3, skew within a ruling, meeting across rulings.
  bool split_ok = false;
};

namespace detail {

// Basis of the row space (nonzero rows of the RREF).
inline std::vector<Vec<Rational>> row_space(const std::vector<Vec<Rational>>& rows) {
  Matrix<Rational> m = Matrix<Rational>::from_rows(rows);
  auto piv = rref(m);
  std::vector<Vec<Rational>> out;
  for (std::size_t r = 0; r < piv.size(); ++r) out.push_back(m.row(r));
  return out;
}

}  // namespace detail

/// Local analysis at one of the ten nodes: vanishing linear term, rank of
/// the quadratic term, containment of the six incident planes in the cone
/// {F2 = F3 = 0}, and their 3 + 3 split into the two rulings of the base
/// quadric surface {F2 = 0} of P^3 of directions. Two planes lie in the same
/// ruling iff their direction lines are skew (Klein pairing nonzero).
inline NodeConeReport node_cone_analysis(const SegreModel& model, std::size_t node) {
  if (node >= model.nodes.size()) throw std::invalid_argument("node_cone_analysis: not a node index");
  NodeConeReport r;
  r.node = model.nodes[node];
  auto e = local_expand(model.threefold, SegreModel::to_chart(r.node));
  r.f1_vanishes = e.f1.is_zero();
  r.cone_rank = quadric_rank(QuadricForm<Rational>::from_poly(e.f2)).rank;
  r.planes = model.planes_through_node(node);

  Matrix<Rational> inv = inverse(e.frame);
  std::vector<Vec<Rational>> dir_lines;  // Plücker vectors of direction lines
  r.planes_in_cone = true;
  for (int k : r.planes) {
    std::vector<Vec<Rational>> dirs;
    for (const auto& v : model.planes[static_cast<std::size_t>(k)].basis) {
      Vec<Rational> c = inv.apply(SegreModel::to_chart(v));
      dirs.emplace_back(c.begin() + 1, c.end());
    }
    auto span = detail::row_space(dirs);
    if (span.size() != 2) {
      r.planes_in_cone = false;
      continue;
    }
    Matrix<Rational> chart = Matrix<Rational>::from_columns(span);
    if (!e.f2.compose(chart).is_zero() || !e.f3.compose(chart).is_zero()) r.planes_in_cone = false;
    dir_lines.push_back(plucker_of(span[0], span[1]));
  }
  if (dir_lines.size() == 6) {
    for (std::size_t i = 0; i < 6; ++i) {
      bool same_as_first = i == 0 || sgn(klein_pairing(dir_lines[0], dir_lines[i])) != 0;
      r.rulings[same_as_first ? 0 : 1].push_back(r.planes[i]);
    }
    bool ok = r.rulings[0].size() == 3 && r.rulings[1].size() == 3;
    for (std::size_t i = 0; i < 6 && ok; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) {
        bool same = (std::find(r.rulings[0].begin(), r.rulings[0].end(), r.planes[i]) != r.rulings[0].end()) ==
                    (std::find(r.rulings[0].begin(), r.rulings[0].end(), r.planes[j]) != r.rulings[0].end());
        bool meet = sgn(klein_pairing(dir_lines[i], dir_lines[j])) == 0;
        if (same == meet) ok = false;
      }
    r.split_ok = ok;
  }
  return r;
}

// ---------------------------------------------------------------------------
// The parametrization by quadrics through five points of P^3.

struct PhiL {
  std::array<Vec<Rational>, 5> base;
  /// Basis of the quadrics through the base points (5 elements).
  std::vector<MultiPoly<Rational>> quadrics;
  /// Image cubic in P^4, primitive integer coefficients.
  MultiPoly<Rational> cubic;
  std::size_t cubic_kernel_dim = 0;
  std::size_t fit_samples = 0;
};

namespace detail {

inline void check_general_position(const std::array<Vec<Rational>, 5>& p) {
  for (const auto& v : p)
    if (v.size() != 4) throw std::invalid_argument("build_phi_L: base points must lie in P^3");
  for (std::size_t skip = 0; skip < 5; ++skip) {
    std::vector<Vec<Rational>> four;
    for (std::size_t i = 0; i < 5; ++i)
      if (i != skip) four.push_back(p[i]);
    if (sgn(determinant(Matrix<Rational>::from_rows(four))) == 0)
      throw DegenerateInput("build_phi_L: four base points are coplanar");
  }
}

inline Matrix<Rational> evaluation_matrix(const std::vector<Vec<Rational>>& pts, int nvars, int degree) {
  auto mons = monomials(nvars, degree);
  Matrix<Rational> ev(pts.size(), mons.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < mons.size(); ++j) {
      Rational t = 1;
      for (std::size_t k = 0; k < mons[j].size(); ++k)
        for (int e = 0; e < mons[j][k]; ++e) t *= pts[i][k];
      ev(i, j) = t;
    }
  return ev;
}

}  // namespace detail

/// Raw quadric values (Q_0(x), ..., Q_4(x)); throws at base points.
template <class S>
Vec<S> phi_L_raw(const PhiL& phi, const Vec<S>& x) {
  Vec<S> y;
  for (const auto& q : phi.quadrics) y.push_back(q(x));
  bool zero = false;
  if constexpr (is_exact_v<S>)
    zero = all_zero(y);
  else
    zero = sup_norm(y) <= 1e-13 * std::pow(sup_norm(x), 2);
  if (zero) throw DegenerateInput("phi_L: base point (indeterminacy locus)");
  return y;
}

/// Whether x lies on one of the ten joins p_i p_j.
template <class S>
bool on_contracted_join(const PhiL& phi, const Vec<S>& x) {
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      ProjLine<S> l(vec_cast<S>(phi.base[i]), vec_cast<S>(phi.base[j]));
      if (l.contains(x)) return true;
    }
  return false;
}

/// Image of x under the map; rejects the indeterminacy locus (base points)
/// and the contracted joins.
template <class S>
Vec<S> phi_L_eval(const PhiL& phi, const Vec<S>& x) {
  if (x.size() != 4) throw std::invalid_argument("phi_L_eval: need a point of P^3");
  if (on_contracted_join(phi, x)) throw DegenerateInput("phi_L_eval: point on a contracted join");
  return phi_L_raw(phi, x);
}

/// The node to which the join p_i p_j is contracted: (B_k(p_i, p_j))_k.
inline Vec<Rational> join_image(const PhiL& phi, std::size_t i, std::size_t j) {
  Vec<Rational> y;
  for (const auto& q : phi.quadrics) y.push_back(QuadricForm<Rational>::from_poly(q).bilinear(phi.base[i], phi.base[j]));
  return y;
}

/// Linear map v -> (grad Q_k(p_i) . v) whose image is the plane replacing
/// the blown-up base point p_i.
inline Matrix<Rational> base_point_plane_map(const PhiL& phi, std::size_t i) {
  std::vector<Vec<Rational>> rows;
  for (const auto& q : phi.quadrics) rows.push_back(q.gradient_at(phi.base[i]));
  return Matrix<Rational>::from_rows(rows);
}

inline PhiL build_phi_L(const std::array<Vec<Rational>, 5>& base, std::uint64_t seed = 2024, std::size_t samples = 40) {
  detail::check_general_position(base);
  PhiL phi;
  phi.base = base;
  std::vector<Vec<Rational>> pts(base.begin(), base.end());
  for (const auto& k : kernel(detail::evaluation_matrix(pts, 4, 2)))
    phi.quadrics.push_back(MultiPoly<Rational>::from_coefficients(4, 2, primitive(k)));
  if (phi.quadrics.size() != 5) throw std::logic_error("build_phi_L: quadric system is not 5-dimensional");

  Rng rng(seed);
  std::vector<Vec<Rational>> images;
  while (images.size() < samples) {
    Vec<Rational> x = rng.rational_vector(4, 9, 5);
    try {
      images.push_back(phi_L_eval(phi, x));
    } catch (const DegenerateInput&) {
    }
  }
  auto ker = kernel(detail::evaluation_matrix(images, 5, 3));
  phi.cubic_kernel_dim = ker.size();
  phi.fit_samples = samples;
  if (ker.size() != 1) throw std::logic_error("build_phi_L: fitted cubic is not unique (kernel dimension " + std::to_string(ker.size()) + ")");
  phi.cubic = MultiPoly<Rational>::from_coefficients(5, 3, primitive(ker.front()));
  return phi;
}

inline std::array<Vec<Rational>, 5> default_base_points() {
  return {Vec<Rational>{1, 0, 0, 0}, Vec<Rational>{0, 1, 0, 0}, Vec<Rational>{0, 0, 1, 0}, Vec<Rational>{0, 0, 0, 1}, Vec<Rational>{1, 1, 1, 1}};
}

// ---------------------------------------------------------------------------
// Twisted cubic through six points.

/// The quadric cone with vertex `vertex` through the five other points:
/// nine linear conditions on the ten coefficients.
inline MultiPoly<Rational> cone_through(const Vec<Rational>& vertex, const std::vector<Vec<Rational>>& others) {
  auto mons = monomials(4, 2);
  std::vector<Vec<Rational>> rows;
  for (const auto& p : others) rows.push_back(detail::evaluation_matrix({p}, 4, 2).row(0));
  for (int i = 0; i < 4; ++i) {
    Vec<Rational> row;
    for (const auto& m : mons) {
      // d/dx_i of the monomial at the vertex.
      if (m[static_cast<std::size_t>(i)] == 0) {
        row.push_back(0);
        continue;
      }
      Rational t = m[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < 4; ++k)
        for (int e = 0; e < m[k] - (static_cast<int>(k) == i ? 1 : 0); ++e) t *= vertex[k];
      row.push_back(t);
    }
    rows.push_back(row);
  }
  auto ker = kernel(Matrix<Rational>::from_rows(rows));
  if (ker.size() != 1) throw DegenerateInput("cone_through: six points not in general position");
  return MultiPoly<Rational>::from_coefficients(4, 2, primitive(ker.front()));
}

struct TwistedCubicSample {
  /// Points of the curve on the probe plane (three for a generic probe).
  std::vector<Vec<Complex>> points;
  /// Largest relative residual over the four cones used for filtering.
  double residual = 0.0;
  /// Candidates rejected by the filter (the chord through two vertices).
  int rejected = 0;
};

/// Points of the unique twisted cubic through p_1..p_5 and x, on a probe
/// plane. Uses the cones over the curve with vertices x and p_1 (their
/// intersection is the curve plus the chord x p_1), cut by the probe plane,
/// then keeps the candidates lying on the cones with vertices p_2 and p_3.
inline TwistedCubicSample twisted_cubic_sample(const std::array<Vec<Rational>, 5>& base, const Vec<Rational>& x, const Vec<Rational>& probe,
                                               double tol = 1e-10) {
  std::vector<Vec<Rational>> six(base.begin(), base.end());
  six.push_back(x);
  for (const auto& q : six)
    if (sgn(dot(probe, q)) == 0) throw DegenerateInput("twisted_cubic_sample: probe plane through a configuration point", "re-probe");
  // Four coplanar points make the cones reducible with a common plane.
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b)
      for (std::size_t c = b + 1; c < 5; ++c)
        if (sgn(determinant(Matrix<Rational>::from_rows({six[a], six[b], six[c], x}))) == 0)
          throw DegenerateInput("twisted_cubic_sample: point is coplanar with three base points");
  auto others = [&](std::size_t v) {
    std::vector<Vec<Rational>> o;
    for (std::size_t i = 0; i < 6; ++i)
      if (i != v) o.push_back(six[i]);
    return o;
  };
  MultiPoly<Rational> zx = cone_through(six[5], others(5)), z1 = cone_through(six[0], others(0));
  std::array<MultiPoly<Rational>, 2> filters{cone_through(six[1], others(1)), cone_through(six[2], others(2))};

  Matrix<Rational> chart = Matrix<Rational>::from_columns(kernel(Matrix<Rational>::from_rows({probe})));
  auto pts = intersect_plane_curves(zx.compose(chart).cast<Complex>(), z1.compose(chart).cast<Complex>());
  Matrix<Complex> cchart = chart.cast<Complex>();
  TwistedCubicSample out;
  auto rel = [](const MultiPoly<Rational>& q, const Vec<Complex>& p) {
    auto qc = q.cast<Complex>();
    return std::abs(qc(p)) / qc.eval_scale(p);
  };
  for (const auto& c : pts) {
    Vec<Complex> p = sup_normalized(cchart.apply(c.point));
    double r = std::max({rel(zx, p), rel(z1, p), rel(filters[0], p), rel(filters[1], p)});
    if (std::max(rel(filters[0], p), rel(filters[1], p)) <= 1e-6) {
      out.points.push_back(p);
      out.residual = std::max(out.residual, r);
    } else {
      ++out.rejected;
    }
  }
  if (out.points.size() != 3 || out.residual > tol)
    throw DegenerateInput("twisted_cubic_sample: filter kept " + std::to_string(out.points.size()) + " candidates", "re-probe");
  return out;
}

}  // namespace cubicmod
