#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/multipoly.hpp"
#include "cubicmod/numkit/roots.hpp"
#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

/// Tolerance for float line equality after sup-norm normalization.
inline constexpr double kLineTolerance = 1e-9;

/// True iff a and b are proportional: exactly (all 2x2 minors vanish) or, for
/// floats, after sup-normalization of both to within `tol`.
template <class S>
bool proportional(const Vec<S>& a, const Vec<S>& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  if constexpr (is_exact_v<S>) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (a[i] * b[j] != a[j] * b[i]) return false;
    return !all_zero(a) && !all_zero(b);
  } else {
    double ma = sup_norm(a);
    if (ma == 0.0 || sup_norm(b) == 0.0) return false;
    std::size_t k = 0;
    while (std::abs(a[k]) < ma * (1.0 - 1e-12)) ++k;
    if (std::abs(b[k]) <= tol * sup_norm(b)) return false;
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] / a[k] - b[i] / b[k]));
    return err <= tol;
  }
}

/// Point of P^n with a canonical representative: coprime integers with first
/// nonzero entry positive (exact), or the sup-normalized vector (float).
template <class S>
class ProjPoint {
 public:
  explicit ProjPoint(const Vec<S>& coords) {
    if (all_zero(coords)) throw std::invalid_argument("ProjPoint: zero vector");
    if constexpr (is_exact_v<S>)
      c_ = primitive(coords);
    else
      c_ = sup_normalized(coords);
  }
  const Vec<S>& coords() const { return c_; }
  std::size_t dim() const { return c_.size() - 1; }
  const S& operator[](std::size_t i) const { return c_[i]; }
  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return proportional(a.c_, b.c_); }

 private:
  Vec<S> c_;
};

/// Index pairs (i, j), i < j, in lexicographic order; the Plücker index set.
inline std::vector<std::pair<std::size_t, std::size_t>> plucker_pairs(std::size_t n_coords) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_coords; ++i)
    for (std::size_t j = i + 1; j < n_coords; ++j) out.emplace_back(i, j);
  return out;
}

template <class S>
Vec<S> plucker_of(const Vec<S>& a, const Vec<S>& b) {
  Vec<S> p;
  for (auto [i, j] : plucker_pairs(a.size())) p.push_back(a[i] * b[j] - a[j] * b[i]);
  return p;
}

/// Line of P^n spanned by two independent points, with Plücker coordinates
/// p_ij = a_i b_j - a_j b_i cached.
template <class S>
class ProjLine {
 public:
  ProjLine(Vec<S> a, Vec<S> b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size() || a_.size() < 2) throw std::invalid_argument("ProjLine: dimension mismatch");
    p_ = plucker_of(a_, b_);
    if constexpr (is_exact_v<S>) {
      if (all_zero(p_)) throw std::invalid_argument("ProjLine: dependent spanning points");
    } else {
      if (sup_norm(p_) <= 1e-13 * sup_norm(a_) * sup_norm(b_)) throw std::invalid_argument("ProjLine: dependent spanning points");
    }
  }

  const Vec<S>& first() const { return a_; }
  const Vec<S>& second() const { return b_; }
  const Vec<S>& plucker() const { return p_; }
  std::size_t ambient_coords() const { return a_.size(); }

  /// Point s*a + t*b.
  Vec<S> point_at(const S& s, const S& t) const { return axpy(s, a_, t, b_); }

  /// Largest |p_ij p_kl - p_ik p_jl + p_il p_jk| over i<j<k<l, relative to
  /// |p|^2 (0 exactly for genuine lines).
  double grassmann_residual() const {
    const std::size_t n = a_.size();
    auto idx = [&](std::size_t i, std::size_t j) {
      std::size_t k = 0;
      for (std::size_t r = 0; r < i; ++r) k += n - 1 - r;
      return k + (j - i - 1);
    };
    double worst = 0.0, scale = sup_norm(p_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
          for (std::size_t l = k + 1; l < n; ++l) {
            S r = p_[idx(i, j)] * p_[idx(k, l)] - p_[idx(i, k)] * p_[idx(j, l)] + p_[idx(i, l)] * p_[idx(j, k)];
            worst = std::max(worst, magnitude(r));
          }
    return scale == 0.0 ? 0.0 : worst / (scale * scale);
  }

  /// Whether x lies on the line (rank of {a, b, x} is 2).
  bool contains(const Vec<S>& x, double tol = 1e-9) const {
    if constexpr (is_exact_v<S>) {
      Matrix<Rational> m = Matrix<Rational>::from_rows({a_, b_, x});
      return rank(m) <= 2;
    } else {
      auto rep = numerical_rank(Matrix<Complex>::from_rows({sup_normalized(a_), sup_normalized(b_), sup_normalized(x)}), tol);
      return rep.rank <= 2;
    }
  }

  template <class T>
  ProjLine<T> cast() const {
    return ProjLine<T>(vec_cast<T>(a_), vec_cast<T>(b_));
  }

 private:
  Vec<S> a_, b_, p_;
};

/// Distance between two lines: sup norm of the difference of their Plücker
/// vectors after scaling each to have entry 1 at the other's (and its own)
/// largest coordinate; the maximum of both orderings. 0 iff equal lines.
inline double plucker_distance(const Vec<Complex>& p, const Vec<Complex>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("plucker_distance: size mismatch");
  auto one_way = [](const Vec<Complex>& x, const Vec<Complex>& y) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i]) > std::abs(x[k])) k = i;
    if (std::abs(y[k]) == 0.0) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] / x[k] - y[i] / y[k]));
    return d;
  };
  return std::max(one_way(p, q), one_way(q, p));
}

template <class S>
double plucker_distance(const ProjLine<S>& a, const ProjLine<S>& b) {
  return plucker_distance(vec_cast<Complex>(a.plucker()), vec_cast<Complex>(b.plucker()));
}

template <class S>
bool same_line(const ProjLine<S>& a, const ProjLine<S>& b, double tol = kLineTolerance) {
  if constexpr (is_exact_v<S>)
    return proportional(a.plucker(), b.plucker());
  else
    return plucker_distance(a, b) <= tol;
}

/// Klein bilinear form on Plücker vectors of lines of P^3; zero iff the lines meet.
template <class S>
S klein_pairing(const Vec<S>& p, const Vec<S>& q) {
  if (p.size() != 6 || q.size() != 6) throw std::invalid_argument("klein_pairing: lines of P^3 expected");
  // Order (01, 02, 03, 12, 13, 23).
  return p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0];
}

/// Hyperplane given by its covector h (points x with h.x = 0).
template <class S>
struct Hyperplane {
  Vec<S> covector;

  explicit Hyperplane(Vec<S> h) : covector(std::move(h)) {
    if (all_zero(covector)) throw std::invalid_argument("Hyperplane: zero covector");
  }
  S operator()(const Vec<S>& x) const { return dot(covector, x); }
  bool contains(const Vec<S>& x, double tol = 1e-10) const {
    if constexpr (is_exact_v<S>)
      return sgn(dot(covector, x)) == 0;
    else
      return std::abs(dot(covector, x)) <= tol * sup_norm(covector) * sup_norm(x);
  }
};

/// Linear subspace of P^n of projective dimension `basis.size() - 1`, kept as
/// a list of spanning vectors (ProjPlane when there are three).
template <class S>
class LinearSpan {
 public:
  explicit LinearSpan(std::vector<Vec<S>> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("LinearSpan: empty basis");
    if (span_rank(basis_) != static_cast<int>(basis_.size())) throw std::invalid_argument("LinearSpan: dependent spanning vectors");
  }
  const std::vector<Vec<S>>& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.size()) - 1; }
  std::size_t ambient_coords() const { return basis_.front().size(); }

  /// Covectors cutting out the span.
  std::vector<Vec<S>> equations() const { return kernel_basis(Matrix<S>::from_rows(basis_)); }

  /// Matrix whose columns are the spanning vectors (a chart of the span).
  Matrix<S> chart() const { return Matrix<S>::from_columns(basis_); }

  bool contains(const Vec<S>& x, double tol = 1e-9) const {
    std::vector<Vec<S>> ext = basis_;
    if constexpr (is_exact_v<S>) {
      ext.push_back(x);
      return span_rank(ext) == static_cast<int>(basis_.size());
    } else {
      for (auto& v : ext) v = sup_normalized(v);
      ext.push_back(sup_normalized(x));
      return numerical_rank(Matrix<Complex>::from_columns(ext), tol).rank == static_cast<int>(basis_.size());
    }
  }

 private:
  std::vector<Vec<S>> basis_;
};

template <class S>
using ProjPlane = LinearSpan<S>;

/// Quadric x^T A x with A symmetric.
template <class S>
class QuadricForm {
 public:
  explicit QuadricForm(Matrix<S> a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw std::invalid_argument("QuadricForm: non-square matrix");
    for (std::size_t i = 0; i < a_.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (a_(i, j) != a_(j, i)) throw std::invalid_argument("QuadricForm: matrix not symmetric");
  }

  static QuadricForm from_poly(const MultiPoly<S>& q) {
    if (q.degree() != 2) throw std::invalid_argument("QuadricForm::from_poly: need a quadratic form");
    const auto n = static_cast<std::size_t>(q.nvars());
    Matrix<S> a(n, n);
    for (const auto& [e, c] : q.terms()) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) idx.push_back(i);
      if (idx[0] == idx[1]) {
        a(idx[0], idx[0]) += c;
      } else {
        a(idx[0], idx[1]) += c / S(2);
        a(idx[1], idx[0]) += c / S(2);
      }
    }
    return QuadricForm(std::move(a));
  }

  const Matrix<S>& matrix() const { return a_; }
  std::size_t size() const { return a_.rows(); }

  S bilinear(const Vec<S>& x, const Vec<S>& y) const { return dot(x, a_.apply(y)); }
  S operator()(const Vec<S>& x) const { return bilinear(x, x); }
  Vec<S> polar(const Vec<S>& x) const { return a_.apply(x); }

  MultiPoly<S> to_poly() const {
    const int n = static_cast<int>(size());
    MultiPoly<S> q(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Exponent e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] += 1;
        e[static_cast<std::size_t>(j)] += 1;
        S c = a_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        q.add_term(e, i == j ? c : S(2) * c);
      }
    return q;
  }

  /// Pullback M^T A M to the source of the chart M.
  QuadricForm restricted(const Matrix<S>& m) const { return QuadricForm(symmetrized(m.transpose() * a_ * m)); }

  bool contains(const Vec<S>& x, double tol = 1e-10) const {
    if constexpr (is_exact_v<S>) {
      return sgn((*this)(x)) == 0;
    } else {
      double scale = 0.0;
      for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) scale += std::abs(a_(i, j)) * std::abs(x[i]) * std::abs(x[j]);
      // First-order sensitivity to an error in x.
      scale = std::max(scale, sup_norm(polar(x)) * sup_norm(x));
      return std::abs((*this)(x)) <= tol * std::max(scale, 1e-300);
    }
  }

  template <class T>
  QuadricForm<T> cast() const {
    return QuadricForm<T>(a_.template cast<T>());
  }

 private:
  static Matrix<S> symmetrized(Matrix<S> m) {
    if constexpr (!is_exact_v<S>)
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i) = (m(i, j) + m(j, i)) / 2.0;
    return m;
  }
  Matrix<S> a_;
};

/// Exact rank, or numerical rank by singular-value gap (threshold 1e-8) with
/// the ill-conditioned flag set near the threshold.
template <class S>
RankReport quadric_rank(const QuadricForm<S>& q) {
  return rank_report(q.matrix());
}

/// Invertible matrix acting on points by x -> M x and on covectors by h -> h M^-1.
template <class S>
class Projectivity {
 public:
  explicit Projectivity(Matrix<S> m, std::string label = {}) : m_(std::move(m)), label_(std::move(label)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("Projectivity: non-square matrix");
    if constexpr (is_exact_v<S>) {
      if (sgn(determinant(m_)) == 0) throw std::invalid_argument("Projectivity: singular matrix");
      inv_ = inverse(m_);
    } else {
      inv_ = inverse(m_);
    }
  }
  const Matrix<S>& matrix() const { return m_; }
  const Matrix<S>& inverse_matrix() const { return inv_; }
  const std::string& label() const { return label_; }

  Vec<S> operator()(const Vec<S>& x) const { return m_.apply(x); }
  Vec<S> apply_dual(const Vec<S>& h) const { return inv_.left_apply(h); }

  friend Projectivity operator*(const Projectivity& a, const Projectivity& b) { return Projectivity(a.m_ * b.m_); }

 private:
  Matrix<S> m_, inv_;
  std::string label_;
};

/// Matrices equal up to a nonzero scalar.
template <class S>
bool same_projectivity(const Matrix<S>& a, const Matrix<S>& b, double tol = 1e-9) {
  return proportional(a.data(), b.data(), tol);
}

// ---------------------------------------------------------------------------
// Cross-ratios.

template <class S>
using P1Point = std::array<S, 2>;

template <class S>
S bracket(const P1Point<S>& x, const P1Point<S>& y) {
  return x[0] * y[1] - x[1] * y[0];
}

template <class S>
bool p1_equal(const P1Point<S>& x, const P1Point<S>& y, double tol = 1e-12) {
  if constexpr (is_exact_v<S>)
    return sgn(bracket(x, y)) == 0;
  else
    return std::abs(bracket(x, y)) <= tol * std::max(std::abs(x[0]), std::abs(x[1])) * std::max(std::abs(y[0]), std::abs(y[1]));
}

/// Cross-ratio as a point of P^1: the image of d under the Möbius map sending
/// a, b, c to 0, 1, infinity, with (x:y) meaning x/y.
template <class S>
P1Point<S> cross_ratio_h(const P1Point<S>& a, const P1Point<S>& b, const P1Point<S>& c, const P1Point<S>& d) {
  if (p1_equal(a, b) || p1_equal(a, c) || p1_equal(b, c)) throw DegenerateInput("cross_ratio: coincident reference points");
  return {bracket(d, a) * bracket(b, c), bracket(d, c) * bracket(b, a)};
}

/// Finite cross-ratio value; throws when d = c (value infinity).
template <class S>
S cross_ratio(const P1Point<S>& a, const P1Point<S>& b, const P1Point<S>& c, const P1Point<S>& d) {
  auto h = cross_ratio_h(a, b, c, d);
  if (ScalarTraits<S>::is_zero(h[1])) throw DegenerateInput("cross_ratio: value is infinite (d = c)");
  return h[0] / h[1];
}

/// Coordinates of x on the line through the spanning points, via the
/// coordinate pair (i, j) maximizing the Plücker entry of the line.
template <class S>
P1Point<S> line_coordinate(const ProjLine<S>& line, const Vec<S>& x) {
  auto pairs = plucker_pairs(line.ambient_coords());
  std::size_t best = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (magnitude(line.plucker()[k]) > magnitude(line.plucker()[best])) best = k;
  auto [i, j] = pairs[best];
  return {x[i], x[j]};
}

/// Cross-ratio of four collinear points of P^n.
template <class S>
S cross_ratio(const Vec<S>& a, const Vec<S>& b, const Vec<S>& c, const Vec<S>& d) {
  ProjLine<S> line(a, b);
  if (!line.contains(c) || !line.contains(d)) throw DegenerateInput("cross_ratio: points not collinear");
  return cross_ratio(line_coordinate(line, a), line_coordinate(line, b), line_coordinate(line, c), line_coordinate(line, d));
}

// ---------------------------------------------------------------------------
// Conics.

/// Rational parametrization of a smooth conic by projection from a seed point
/// s on it. With e1 spanning (with s) the tangent line at s and e2 off it,
/// point(u, v) = -Q(q) s + 2 B(s, q) q for q = u e1 + v e2. The seed is the
/// parameter (1 : 0).
template <class S>
class ConicParametrization {
 public:
  ConicParametrization(const QuadricForm<S>& conic, Vec<S> seed) : q_(conic), s_(std::move(seed)) {
    if (conic.size() != 3) throw std::invalid_argument("conic_parametrize: need a plane conic");
    auto rep = quadric_rank(conic);
    if (rep.rank < 3) throw DegenerateInput("conic_parametrize: degenerate conic (rank " + std::to_string(rep.rank) + ")", "boundary");
    if (!conic.contains(s_)) throw std::invalid_argument("conic_parametrize: seed not on the conic");
    Vec<S> as = conic.polar(s_);
    // e1: in the tangent line {as . y = 0}, not proportional to s.
    auto tangent = kernel_basis(Matrix<S>::from_rows({as}));
    if constexpr (is_exact_v<S>) {
      for (const auto& t : tangent)
        if (!proportional(t, s_)) {
          e1_ = t;
          break;
        }
    } else {
      // Component orthogonal to s of the better-separated kernel vector; a
      // kernel vector nearly parallel to s would make the basis ill-conditioned.
      double ss = 0.0, best = 0.0;
      for (const auto& x : s_) ss += std::norm(x);
      for (const auto& t : tangent) {
        S st(0);
        for (std::size_t i = 0; i < 3; ++i) st += std::conj(s_[i]) * t[i];
        Vec<S> r = axpy(S(1), t, -st / ss, s_);
        double rel = sup_norm(r) / sup_norm(t);
        if (rel > best) {
          best = rel;
          e1_ = sup_normalized(r);
        }
      }
      if (best <= 1e-6) e1_.clear();
    }
    if (e1_.empty()) throw DegenerateInput("conic_parametrize: tangent direction not found");
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (magnitude(as[i]) > magnitude(as[k])) k = i;
    e2_ = Vec<S>(3, S(0));
    e2_[k] = S(1);
    basis_ = Matrix<S>::from_columns({s_, e1_, e2_});
  }

  const Vec<S>& seed() const { return s_; }

  Vec<S> operator()(const S& u, const S& v) const {
    Vec<S> q = axpy(u, e1_, v, e2_);
    return axpy(-q_(q), s_, S(2) * q_.bilinear(s_, q), q);
  }

  /// Parameter of a point on the conic; the seed gives (1 : 0).
  P1Point<S> param_of(const Vec<S>& x) const {
    Vec<S> c = solve_square(basis_, x);
    if constexpr (is_exact_v<S>) {
      if (sgn(c[1]) == 0 && sgn(c[2]) == 0) return {S(1), S(0)};
    } else {
      if (std::abs(c[1]) + std::abs(c[2]) <= 1e-12 * std::abs(c[0])) return {S(1), S(0)};
    }
    return {c[1], c[2]};
  }

 private:
  QuadricForm<S> q_;
  Vec<S> s_, e1_, e2_;
  Matrix<S> basis_;
};

template <class S>
ConicParametrization<S> conic_parametrize(const QuadricForm<S>& conic, const Vec<S>& seed) {
  return ConicParametrization<S>(conic, seed);
}

// ---------------------------------------------------------------------------
// Tangent hyperplanes and polars.

template <class S>
Hyperplane<S> tangent_hyperplane(const QuadricForm<S>& q, const Vec<S>& x) {
  if (!q.contains(x)) throw std::invalid_argument("tangent_hyperplane: point not on the quadric");
  Vec<S> h = q.polar(x);
  bool vertex = false;
  if constexpr (is_exact_v<S>)
    vertex = all_zero(h);
  else
    vertex = sup_norm(h) <= 1e-12 * sup_norm(q.matrix().data()) * sup_norm(x);
  if (vertex) throw DegenerateInput("tangent_hyperplane: point is a vertex of the quadric");
  return Hyperplane<S>(std::move(h));
}

struct PolarPair {
  std::array<Vec<Complex>, 2> points;
  bool coincident = false;
  /// |disc| / scale of the induced binary quadratic.
  double discriminant_ratio = 0.0;
};

/// The points x of the quadric whose tangent hyperplane contains `plane`:
/// the intersection of the polar line {x : B(x, p) = 0 for p in plane} with
/// the quadric. A vanishing discriminant (within 1e-12) is reported as a
/// coincident pair.
inline PolarPair polar_points_on_quadric(const QuadricForm<Complex>& q, const LinearSpan<Complex>& plane) {
  std::vector<Vec<Complex>> rows;
  for (const auto& p : plane.basis()) rows.push_back(q.polar(p));
  auto line = numeric_kernel(Matrix<Complex>::from_rows(rows), 1e-10);
  if (line.size() != 2) throw DegenerateInput("polar_points_on_quadric: polar locus is not a line (singular quadric or special plane)");
  const Vec<Complex>& a = line[0];
  const Vec<Complex>& b = line[1];
  Complex qa = q(a), qab = q.bilinear(a, b), qb = q(b);
  // qa s^2 + 2 qab s t + qb t^2 = 0.
  BinaryForm<Complex> form(2, {qb, 2.0 * qab, qa});
  double scale = std::max({std::abs(qa), std::abs(qab), std::abs(qb)});
  Complex disc = qab * qab - qa * qb;
  PolarPair out;
  out.discriminant_ratio = scale == 0.0 ? 0.0 : std::abs(disc) / (scale * scale);
  auto roots = binary_roots(form);
  std::vector<P1Point<Complex>> st;
  for (const auto& r : roots)
    for (int m = 0; m < r.multiplicity; ++m) st.push_back({r.point[0], r.point[1]});
  if (st.size() != 2) throw std::runtime_error("polar_points_on_quadric: quadratic lost its roots");
  for (std::size_t i = 0; i < 2; ++i) out.points[i] = sup_normalized(axpy(st[i][0], a, st[i][1], b));
  out.coincident = out.discriminant_ratio <= 1e-12 || proportional(out.points[0], out.points[1], 1e-7);
  return out;
}

/// Exact second intersection of the polar line of T_x Q ∩ H with Q, for x on
/// Q: with w another point of that polar line, y = -Q(w) x + 2 B(x, w) w.
/// `extra` lists covectors whose common zero set together with T_x Q forms
/// the plane (for a plane inside a hyperplane H of P^4, extra = {H}).
template <class S>
Vec<S> polar_partner(const QuadricForm<S>& q, const Vec<S>& x, const std::vector<Vec<S>>& extra) {
  if (!q.contains(x)) throw std::invalid_argument("polar_partner: point not on the quadric");
  std::vector<Vec<S>> rows{q.polar(x)};
  for (const auto& h : extra) rows.push_back(h);
  auto plane = kernel_basis(Matrix<S>::from_rows(rows));
  std::vector<Vec<S>> polar_rows;
  for (const auto& p : plane) polar_rows.push_back(q.polar(p));
  auto line = kernel_basis(Matrix<S>::from_rows(polar_rows));
  if (line.size() != 2) throw DegenerateInput("polar_partner: polar locus is not a line");
  Vec<S> w = proportional(line[0], x, 1e-6) ? line[1] : line[0];
  S bxw = q.bilinear(x, w);
  if (ScalarTraits<S>::is_zero(bxw, 1e-14)) throw DegenerateInput("polar_partner: tangent polar line (double point)");
  return axpy(-q(w), x, S(2) * bxw, w);
}

}  // namespace cubicmod
