#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cubicmod/expansion.hpp"
#include "cubicmod/numkit/elimination.hpp"
#include "cubicmod/numkit/random.hpp"
#include "cubicmod/numkit/roots.hpp"
#include "cubicmod/projgeom.hpp"
#include "cubicmod/segre.hpp"

namespace cubicmod {

/// Finite: six lines with multiplicity. PencilPlusResidual: p lies on one
/// plane of the cubic. TwoPencils: p lies on two planes (the cone and the
/// cubic share the whole conic), so every line through p is in a pencil.
enum class FanKind { Finite, PencilPlusResidual, TwoPencils };

inline const char* to_string(FanKind k) {
  switch (k) {
    case FanKind::Finite:
      return "finite";
    case FanKind::PencilPlusResidual:
      return "pencil-plus-residual";
    default:
      return "two-pencils";
  }
}

struct FanLine {
  ProjLine<Complex> line;
  int multiplicity = 1;
  /// Largest relative |F| over the sample points of the line.
  double residual = 0.0;
};

/// Lines of a cubic threefold through a smooth point p. In the finite case
/// `lines` holds every line; in the degenerate case it holds only the lines
/// off the pencils, and each pencil of lines through p in a plane of the
/// cubic is described by its plane in `pencil_planes`.
struct LineFan {
  FanKind kind = FanKind::Finite;
  std::vector<FanLine> lines;
  /// F2 restricted to ker F1, a ternary quadric (the contact cone).
  MultiPoly<Complex> cone;
  RankReport cone_rank;
  std::vector<LinearSpan<Complex>> pencil_planes;
  /// Common-factor decision margin (sigma_min / sigma_max).
  double factor_margin = 1.0;
  double max_residual = 0.0;

  int total_multiplicity() const {
    int n = 0;
    for (const auto& l : lines) n += l.multiplicity;
    return n;
  }
  bool all_simple() const {
    return std::all_of(lines.begin(), lines.end(), [](const FanLine& l) { return l.multiplicity == 1; });
  }
};

namespace detail {

// Largest relative residual of F along the line at 20 sample points.
inline double line_on_cubic_residual(const MultiPoly<Complex>& f, const ProjLine<Complex>& line) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    double ang = 2.0 * M_PI * (k + 0.5) / 20.0;
    Complex t = std::polar(0.5 + 0.1 * k, ang);
    Vec<Complex> x = line.point_at(Complex(1), t);
    double scale = f.eval_scale(x);
    if (scale > 0.0) worst = std::max(worst, std::abs(f(x)) / scale);
  }
  return worst;
}

// Points of P^2 on the line {h = 0} and the conic {n = 0}.
template <class S>
std::vector<Vec<Complex>> line_conic_points(const MultiPoly<S>& h, const MultiPoly<S>& n) {
  Vec<S> cov = h.template gradient_at<S>(Vec<S>(3, S(0)));
  auto ker = kernel_basis(Matrix<S>::from_rows({cov}));
  if (ker.size() != 2) throw std::logic_error("line_conic_points: linear factor has wrong kernel");
  MultiPoly<Complex> nc = n.template cast<Complex>();
  Matrix<Complex> m = Matrix<S>::from_columns(ker).template cast<Complex>();
  MultiPoly<Complex> restricted = nc.compose(m);
  BinaryForm<Complex> q(2, {restricted.coeff({0, 2}), restricted.coeff({1, 1}), restricted.coeff({2, 0})});
  std::vector<Vec<Complex>> out;
  for (const auto& r : binary_roots(q))
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(sup_normalized(m.apply({r.point[0], r.point[1]})));
  return out;
}

}  // namespace detail

/// Lines through a smooth point p of the cubic form f (five variables):
/// restricts F2 and F3 to the direction plane ker F1, detects a shared
/// linear factor (pencil case) and otherwise intersects the conic and the
/// cubic by elimination. Every line is checked to lie on the cubic.
template <class S>
LineFan lines_through(const MultiPoly<S>& f, const Vec<S>& p) {
  LocalExpansion<S> e = local_expand(f, p);
  if (e.singular()) throw DegenerateInput("lines_through: point is singular", "node_cone_analysis");
  const std::size_t nd = e.nvars();
  Vec<S> f1 = e.f1.template gradient_at<S>(Vec<S>(nd, S(0)));
  auto kb = kernel_basis(Matrix<S>::from_rows({f1}));
  if (kb.size() != nd - 1) throw std::logic_error("lines_through: tangent kernel has wrong dimension");
  Matrix<S> k = Matrix<S>::from_columns(kb);
  MultiPoly<S> conic = e.f2.compose(k), cubic = e.f3.compose(k);

  LineFan fan;
  fan.cone = conic.template cast<Complex>();
  fan.cone_rank = quadric_rank(QuadricForm<S>::from_poly(conic));

  Matrix<Complex> kc = k.template cast<Complex>();
  LocalExpansion<Complex> ec{vec_cast<Complex>(e.base), e.frame.template cast<Complex>(), {}, {}, {}, 0.0};
  Vec<Complex> base = sup_normalized(ec.base);
  MultiPoly<Complex> fc = f.template cast<Complex>();
  auto make_line = [&](const Vec<Complex>& z) { return ProjLine<Complex>(base, sup_normalized(ec.direction(kc.apply(z)))); };
  auto add_line = [&](const Vec<Complex>& z, int mult) {
    FanLine fl{make_line(z), mult, 0.0};
    fl.residual = detail::line_on_cubic_residual(fc, fl.line);
    fan.max_residual = std::max(fan.max_residual, fl.residual);
    fan.lines.push_back(fl);
  };

  auto pencil_through = [&](const std::vector<Vec<Complex>>& dirs) {
    std::vector<Vec<Complex>> pb{base};
    for (const auto& z : dirs) pb.push_back(sup_normalized(ec.direction(kc.apply(z))));
    fan.pencil_planes.emplace_back(pb);
  };

  CommonFactor<S> cf = common_factor(conic, cubic);
  fan.factor_margin = cf.margin;
  if (cf.kernel_dim >= 2) {
    // The gcd is the cone itself; it must be a line pair dividing the cubic.
    divide_exact(cubic, conic);
    if (fan.cone_rank.rank != 2) throw DegenerateInput("lines_through: eliminant vanishes on an irreducible cone");
    fan.kind = FanKind::TwoPencils;
    QuadricForm<Complex> qc = QuadricForm<Complex>::from_poly(fan.cone);
    auto vk = numeric_kernel(qc.matrix());
    Vec<Complex> vertex = vk.front();
    // Pick a line missing the vertex and split the pair there.
    std::size_t big = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (std::abs(vertex[i]) > std::abs(vertex[big])) big = i;
    std::vector<Vec<Complex>> cols;
    for (std::size_t i = 0; i < 3; ++i)
      if (i != big) {
        Vec<Complex> ei(3, Complex(0));
        ei[i] = 1;
        cols.push_back(ei);
      }
    MultiPoly<Complex> pair = fan.cone.compose(Matrix<Complex>::from_columns(cols));
    BinaryForm<Complex> q(2, {pair.coeff({0, 2}), pair.coeff({1, 1}), pair.coeff({2, 0})});
    for (const auto& r : binary_roots(q)) pencil_through({vertex, axpy(r.point[0], cols[0], r.point[1], cols[1])});
    return fan;
  }
  if (cf.kernel_dim == 1) {
    if (!cf.factor) throw DegenerateInput("lines_through: eliminant vanishes without a linear common factor");
    fan.kind = FanKind::PencilPlusResidual;
    MultiPoly<S> lin = *cf.factor;
    MultiPoly<S> m = divide_exact(conic, lin), n = divide_exact(cubic, lin);
    for (const auto& z : detail::line_conic_points(m, n)) add_line(z, 1);
    // Merge a repeated residual direction.
    if (fan.lines.size() == 2 && plucker_distance(fan.lines[0].line, fan.lines[1].line) <= 1e-6) {
      fan.lines.pop_back();
      fan.lines[0].multiplicity = 2;
    }
    Vec<S> lcov = lin.template gradient_at<S>(Vec<S>(3, S(0)));
    std::vector<Vec<Complex>> dirs;
    for (const auto& z : kernel_basis(Matrix<S>::from_rows({lcov}))) dirs.push_back(vec_cast<Complex>(z));
    pencil_through(dirs);
    return fan;
  }
  for (const auto& pt : intersect_plane_curves(conic.template cast<Complex>(), cubic.template cast<Complex>())) add_line(pt.point, pt.multiplicity);
  return fan;
}

// ---------------------------------------------------------------------------
// Matching of two line lists.

struct LineMatching {
  /// assignment[i] = index in the second list matched to line i of the first.
  std::vector<int> assignment;
  double max_distance = 0.0;
  double total_distance = 0.0;
};

/// Minimum-total-distance perfect matching by exhaustive search (lists of at
/// most 8 lines).
inline LineMatching optimal_line_matching(const std::vector<ProjLine<Complex>>& a, const std::vector<ProjLine<Complex>>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("optimal_line_matching: list sizes differ");
  if (a.size() > 8) throw std::invalid_argument("optimal_line_matching: too many lines");
  const std::size_t n = a.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = plucker_distance(a[i], b[j]);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  LineMatching best;
  best.total_distance = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += d[i][static_cast<std::size_t>(perm[i])];
      worst = std::max(worst, d[i][static_cast<std::size_t>(perm[i])]);
    }
    if (total < best.total_distance) best = {perm, worst, total};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<ProjLine<Complex>> expanded_lines(const std::vector<FanLine>& lines) {
  std::vector<ProjLine<Complex>> out;
  for (const auto& l : lines)
    for (int k = 0; k < l.multiplicity; ++k) out.push_back(l.line);
  return out;
}

// ---------------------------------------------------------------------------
// The second construction through the parametrization by quadrics.

/// Random rational point of P^3 off every plane through three base points
/// (so off the joins and off the preimages of the planes of the cubic).
inline Vec<Rational> random_general_point(const PhiL& phi, Rng& rng) {
  for (;;) {
    Vec<Rational> x = rng.rational_vector(4, 9, 5);
    bool ok = true;
    for (std::size_t a = 0; a < 5 && ok; ++a)
      for (std::size_t b = a + 1; b < 5 && ok; ++b)
        for (std::size_t c = b + 1; c < 5 && ok; ++c)
          if (sgn(determinant(Matrix<Rational>::from_rows({phi.base[a], phi.base[b], phi.base[c], x}))) == 0) ok = false;
    if (ok) return x;
  }
}

/// The six lines through phi(x): images of the joins x p_i and of the twisted
/// cubic through x and the base points.
inline std::vector<ProjLine<Complex>> phi_L_six_lines(const PhiL& phi, const Vec<Rational>& x, Rng& rng) {
  Vec<Rational> y = phi_L_eval(phi, x);
  std::vector<ProjLine<Complex>> out;
  for (std::size_t i = 0; i < 5; ++i) {
    Vec<Rational> w;
    for (const auto& q : phi.quadrics) w.push_back(QuadricForm<Rational>::from_poly(q).bilinear(x, phi.base[i]));
    out.push_back(ProjLine<Rational>(y, w).cast<Complex>());
  }
  for (int attempt = 0; attempt < 20; ++attempt) {
    Vec<Rational> probe;
    for (int i = 0; i < 4; ++i) probe.push_back(Rational(rng.nonzero_integer(11)));
    try {
      auto tc = twisted_cubic_sample(phi.base, x, probe);
      Vec<Complex> c = tc.points.front();
      Vec<Complex> img;
      for (const auto& q : phi.quadrics) img.push_back(q.cast<Complex>()(c));
      out.emplace_back(sup_normalized(vec_cast<Complex>(y)), sup_normalized(img));
      return out;
    } catch (const DegenerateInput&) {
    }
  }
  throw DegenerateInput("phi_L_six_lines: no admissible probe plane for the twisted cubic", "resample");
}

struct SixLineCheck {
  LineFan fan;
  LineMatching matching;
};

/// Runs the direct solver at phi(x) and matches against the second construction.
inline SixLineCheck six_line_cross_check(const PhiL& phi, const Vec<Rational>& x, Rng& rng) {
  SixLineCheck c;
  c.fan = lines_through(phi.cubic, phi_L_eval(phi, x));
  auto other = phi_L_six_lines(phi, x, rng);
  auto direct = expanded_lines(c.fan.lines);
  if (direct.size() != other.size()) throw DegenerateInput("six_line_cross_check: direct solver returned " + std::to_string(direct.size()) + " lines");
  c.matching = optimal_line_matching(direct, other);
  return c;
}

// ---------------------------------------------------------------------------
// Plane points of the Segre model.

/// Random rational point of the given plane (six coordinates), not a node;
/// `on_node_line` puts it on the line through two nodes of the plane,
/// otherwise it avoids all such lines.
inline Vec<Rational> random_plane_point(const SegreModel& model, std::size_t plane, Rng& rng, bool on_node_line = false) {
  auto nodes = model.nodes_on_plane(plane);
  for (;;) {
    Vec<Rational> p(6, Rational(0));
    if (on_node_line) {
      std::size_t a = static_cast<std::size_t>(rng.integer(0, 3)), b = static_cast<std::size_t>(rng.integer(0, 2));
      if (b >= a) ++b;
      p = axpy(Rational(rng.nonzero_integer(9)), model.nodes[static_cast<std::size_t>(nodes[a])], Rational(rng.nonzero_integer(9)),
               model.nodes[static_cast<std::size_t>(nodes[b])]);
    } else {
      for (const auto& v : model.planes[plane].basis) p = axpy(Rational(1), p, rng.rational(), v);
    }
    if (all_zero(p) || model.node_index(p) >= 0) continue;
    bool collinear = false;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        if (rank(Matrix<Rational>::from_rows({p, model.nodes[static_cast<std::size_t>(nodes[a])], model.nodes[static_cast<std::size_t>(nodes[b])]})) <= 2)
          collinear = true;
    if (collinear == on_node_line) return primitive(p);
  }
}

struct MarkedFan {
  int plane = -1;
  /// Merged marked lines in the chart of P^4; multiplicities sum to 6.
  std::vector<FanLine> lines;
  LineFan fan;

  int total_multiplicity() const {
    int n = 0;
    for (const auto& l : lines) n += l.multiplicity;
    return n;
  }
};

/// The six marked lines through a non-node point p (six coordinates) of a
/// plane of the model: the four joins with the plane's nodes plus the two
/// residual lines. Coincident lines (Plücker distance <= 1e-6) are merged.
/// When p is on the line of two nodes it lies on a second plane and the
/// residual pair is taken in its limit position.
inline MarkedFan marked_lines_at_plane_point(const SegreModel& model, const Vec<Rational>& p) {
  if (model.node_index(p) >= 0) throw DegenerateInput("marked_lines_at_plane_point: point is a node", "node_cone_analysis");
  MarkedFan mf;
  mf.plane = model.plane_containing(p);
  if (mf.plane < 0) throw std::invalid_argument("marked_lines_at_plane_point: point is on no plane");
  if (sgn(model.cubic6(p)) != 0) throw std::invalid_argument("marked_lines_at_plane_point: point is not on the cubic");
  Vec<Rational> pc = SegreModel::to_chart(p);
  mf.fan = lines_through(model.threefold, pc);
  if (mf.fan.kind == FanKind::Finite) throw std::logic_error("marked_lines_at_plane_point: no pencil at a plane point");
  MultiPoly<Complex> fc = model.threefold.cast<Complex>();
  auto join = [&](int n) {
    ProjLine<Complex> l(sup_normalized(vec_cast<Complex>(pc)), sup_normalized(vec_cast<Complex>(SegreModel::to_chart(model.nodes[static_cast<std::size_t>(n)]))));
    return FanLine{l, 1, detail::line_on_cubic_residual(fc, l)};
  };
  std::vector<FanLine> all;
  auto own = model.nodes_on_plane(static_cast<std::size_t>(mf.plane));
  for (int n : own) all.push_back(join(n));
  if (mf.fan.kind == FanKind::PencilPlusResidual) {
    for (const auto& l : mf.fan.lines) all.push_back(l);
  } else {
    // On the line of two nodes the residual pair degenerates into the second
    // plane; its limit is the pair of joins with that plane's other nodes.
    for (std::size_t k = 0; k < model.planes.size(); ++k) {
      if (static_cast<int>(k) == mf.plane) continue;
      bool in = true;
      for (const auto& h : model.planes[k].equations) in = in && sgn(dot(h, p)) == 0;
      if (!in) continue;
      for (int n : model.nodes_on_plane(k))
        if (std::find(own.begin(), own.end(), n) == own.end()) all.push_back(join(n));
    }
  }
  for (const auto& l : all) {
    auto it = std::find_if(mf.lines.begin(), mf.lines.end(), [&](const FanLine& m) { return plucker_distance(m.line, l.line) <= 1e-6; });
    if (it == mf.lines.end())
      mf.lines.push_back(l);
    else
      it->multiplicity += l.multiplicity;
  }
  return mf;
}

struct ContinuityProbe {
  std::vector<double> steps;
  std::vector<double> distances;
  bool monotone = false;
};

/// Approaches the plane point p along a random curve x_t = p + t w + s(t) v
/// on the cubic (s the root nearest 0) and measures the matched Plücker
/// distance between the line fan at x_t and the marked fan at p.
inline ContinuityProbe continuity_probe(const SegreModel& model, const Vec<Rational>& p, const MarkedFan& marked, Rng& rng,
                                        const std::vector<double>& steps = {1e-2, 1e-3, 1e-4}) {
  ContinuityProbe out;
  out.steps = steps;
  MultiPoly<Complex> fc = model.threefold.cast<Complex>();
  Vec<Complex> pc = vec_cast<Complex>(SegreModel::to_chart(p));
  auto unit = [](const Vec<Complex>& x) { return axpy(Complex(1.0 / sup_norm(x)), x, Complex(0), x); };
  pc = unit(pc);
  Vec<Complex> w = unit(vec_cast<Complex>(rng.rational_vector(5))), v = unit(vec_cast<Complex>(rng.rational_vector(5)));
  auto target = expanded_lines(marked.lines);
  for (double t : steps) {
    Vec<Complex> a = axpy(Complex(1), pc, Complex(t), w);
    MultiPoly<Complex> bin = fc.compose(Matrix<Complex>::from_columns({a, v}));
    Vec<Complex> coeffs;
    for (int j = 0; j <= 3; ++j) coeffs.push_back(bin.coeff({3 - j, j}));
    auto roots = univariate_roots(UniPoly<Complex>(coeffs));
    Complex s = roots.front().value;
    for (const auto& r : roots)
      if (std::abs(r.value) < std::abs(s)) s = r.value;
    Vec<Complex> x = axpy(Complex(1), a, s, v);
    LineFan fan = lines_through(fc, x);
    auto lines = expanded_lines(fan.lines);
    if (lines.size() != target.size()) {
      out.distances.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.distances.push_back(optimal_line_matching(lines, target).max_distance);
  }
  out.monotone = true;
  for (std::size_t i = 1; i < out.distances.size(); ++i)
    if (!(out.distances[i] < out.distances[i - 1])) out.monotone = false;
  if (out.distances.empty() || !std::isfinite(out.distances.front())) out.monotone = false;
  return out;
}

// ---------------------------------------------------------------------------
// General cubic threefolds.

/// Cubic form in five variables with random integer coefficients in [-5, 5].
inline MultiPoly<Rational> random_cubic(Rng& rng) {
  auto mons = monomials(5, 3);
  Vec<Rational> c;
  for (std::size_t i = 0; i < mons.size(); ++i) c.push_back(Rational(rng.integer(-5, 5)));
  return MultiPoly<Rational>::from_coefficients(5, 3, c);
}

/// A point of the cubic on a random rational line: the only inexact step is
/// the cubic root along the line.
inline Vec<Complex> random_point_on_cubic(const MultiPoly<Rational>& f, Rng& rng) {
  for (;;) {
    Vec<Rational> a = rng.rational_vector(5), b = rng.rational_vector(5);
    if (span_rank(std::vector<Vec<Rational>>{a, b}) != 2) continue;
    MultiPoly<Rational> bin = f.compose(Matrix<Rational>::from_columns({a, b}));
    Vec<Complex> coeffs;
    for (int j = 0; j <= 3; ++j) coeffs.push_back(scalar_cast<Complex>(bin.coeff({3 - j, j})));
    if (std::abs(coeffs[3]) == 0.0) continue;
    auto roots = univariate_roots(UniPoly<Complex>(coeffs));
    if (roots.front().multiplicity != 1) continue;
    Vec<Complex> x = axpy(Complex(1), vec_cast<Complex>(a), roots.front().value, vec_cast<Complex>(b));
    return sup_normalized(x);
  }
}

}  // namespace cubicmod
