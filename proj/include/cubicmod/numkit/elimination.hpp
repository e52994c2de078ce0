#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/multipoly.hpp"
#include "cubicmod/numkit/random.hpp"
#include "cubicmod/numkit/roots.hpp"
#include "cubicmod/numkit/unipoly.hpp"

namespace cubicmod {

namespace detail {

// Coefficients of p (3 variables) as a polynomial in variable `w`, evaluated
// at (x_r0, x_r1) = (t, 1). Index i holds the coefficient of w^i.
template <class S>
Vec<S> coefficients_in(const MultiPoly<S>& p, int w, int r0, const S& t) {
  Vec<S> out(static_cast<std::size_t>(p.degree() + 1), S(0));
  for (const auto& [e, c] : p.terms()) {
    S term = c;
    for (int k = 0; k < e[static_cast<std::size_t>(r0)]; ++k) term *= t;
    out[static_cast<std::size_t>(e[static_cast<std::size_t>(w)])] += term;
  }
  return out;
}

// Sylvester determinant of two univariate polynomials of formal degrees
// m = a.size()-1 and n = b.size()-1 (ascending coefficients).
template <class S>
S sylvester_determinant(const Vec<S>& a, const Vec<S>& b) {
  const std::size_t m = a.size() - 1, n = b.size() - 1, size = m + n;
  Matrix<S> syl(size, size);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) syl(r, r + i) = a[m - i];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) syl(n + r, r + i) = b[n - i];
  return determinant(syl);
}

inline std::pair<int, int> remaining_pair(int eliminated) {
  switch (eliminated) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    case 2: return {0, 1};
    default: throw std::invalid_argument("resultant: eliminated variable must be 0, 1 or 2");
  }
}

}  // namespace detail

/// Resultant of two ternary forms with respect to one variable: a binary form
/// of degree deg f * deg g in the remaining two variables (kept in index
/// order, u = lower index). Computed by evaluating Sylvester determinants at
/// deg f * deg g + 1 specializations and interpolating.
///
/// Throws DegenerateInput when the elimination center (the coordinate point
/// of the eliminated variable) lies on both curves, since the formal
/// resultant then vanishes for a reason other than a common component.
template <class S>
BinaryForm<S> resultant(const MultiPoly<S>& f, const MultiPoly<S>& g, int eliminated) {
  if (f.nvars() != 3 || g.nvars() != 3) throw std::invalid_argument("resultant: need ternary forms");
  if (f.degree() < 1 || g.degree() < 1) throw std::invalid_argument("resultant: degrees must be positive");
  auto [r0, r1] = detail::remaining_pair(eliminated);
  (void)r1;
  const int m = f.degree(), n = g.degree(), d = m * n;
  Exponent top_f(3, 0), top_g(3, 0);
  top_f[static_cast<std::size_t>(eliminated)] = m;
  top_g[static_cast<std::size_t>(eliminated)] = n;
  if (f.coeff(top_f) == S(0) && g.coeff(top_g) == S(0))
    throw DegenerateInput("resultant: elimination center lies on both curves", "change coordinates");

  Vec<S> coeffs(static_cast<std::size_t>(d + 1), S(0));
  if constexpr (is_exact_v<S>) {
    Matrix<Rational> vander(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
    Vec<Rational> values;
    for (int k = 0; k <= d; ++k) {
      Rational t(k);
      Rational pw(1);
      for (int j = 0; j <= d; ++j) {
        vander(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = pw;
        pw *= t;
      }
      values.push_back(detail::sylvester_determinant(detail::coefficients_in(f, eliminated, r0, t),
                                                     detail::coefficients_in(g, eliminated, r0, t)));
    }
    coeffs = solve_square(vander, values);
  } else {
    // Samples at the (d+1)-th roots of unity, inverted by a discrete Fourier sum.
    const int np = d + 1;
    Vec<Complex> values;
    for (int k = 0; k < np; ++k) {
      Complex t = std::polar(1.0, 2.0 * std::numbers::pi * k / np);
      values.push_back(detail::sylvester_determinant(detail::coefficients_in(f, eliminated, r0, t),
                                                     detail::coefficients_in(g, eliminated, r0, t)));
    }
    for (int j = 0; j < np; ++j) {
      Complex acc(0);
      for (int k = 0; k < np; ++k) acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / np);
      coeffs[static_cast<std::size_t>(j)] = acc / static_cast<double>(np);
    }
  }
  return BinaryForm<S>(d, std::move(coeffs));
}

/// Exact (or least-squares) quotient q with q * divisor = p. Throws when the
/// division is not exact (exact regime) or leaves a relative residual above
/// 1e-8 (float regime).
template <class S>
MultiPoly<S> divide_exact(const MultiPoly<S>& p, const MultiPoly<S>& divisor) {
  if (p.nvars() != divisor.nvars() || divisor.degree() > p.degree()) throw std::invalid_argument("divide_exact: incompatible operands");
  if (divisor.is_zero()) throw std::domain_error("divide_exact: zero divisor");
  const int n = p.nvars(), qd = p.degree() - divisor.degree();
  auto qmons = monomials(n, qd);
  auto pmons = monomials(n, p.degree());
  std::map<Exponent, std::size_t> row_of;
  for (std::size_t i = 0; i < pmons.size(); ++i) row_of[pmons[i]] = i;
  Matrix<S> a(pmons.size(), qmons.size());
  for (std::size_t j = 0; j < qmons.size(); ++j)
    for (const auto& [e, c] : divisor.terms()) {
      Exponent s(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) s[i] = e[i] + qmons[j][i];
      a(row_of[s], j) += c;
    }
  Vec<S> rhs = p.coefficients();
  Vec<S> q;
  if constexpr (is_exact_v<S>) {
    auto sol = solve_linear(a, rhs);
    if (!sol.consistent || !sol.particular) throw std::domain_error("divide_exact: not divisible");
    q = *sol.particular;
  } else {
    q = solve_least_squares(a, rhs);
    Vec<Complex> back = a.apply(q);
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - rhs[i]));
    if (err > 1e-8 * std::max(1.0, sup_norm(rhs))) throw std::domain_error("divide_exact: not divisible within tolerance");
  }
  return MultiPoly<S>::from_coefficients(n, qd, q);
}

template <class S>
struct CommonFactor {
  /// Shared linear form, when one was detected.
  std::optional<MultiPoly<S>> factor;
  /// Dimension of the solution space of f*N = g*M (1 for a linear gcd).
  std::size_t kernel_dim = 0;
  /// sigma_min / sigma_max of the (float image of the) relation matrix; the
  /// decision margin in the float regime.
  double margin = 1.0;
};

namespace detail {

// Matrix of (N, M) -> f*N - g*M, columns = coefficients of N then M.
template <class S>
Matrix<S> relation_matrix(const MultiPoly<S>& f, const MultiPoly<S>& g) {
  const int nv = f.nvars(), m = f.degree(), n = g.degree();
  auto nmons = monomials(nv, n - 1);
  auto mmons = monomials(nv, m - 1);
  auto tmons = monomials(nv, m + n - 1);
  std::map<Exponent, std::size_t> row_of;
  for (std::size_t i = 0; i < tmons.size(); ++i) row_of[tmons[i]] = i;
  Matrix<S> k(tmons.size(), nmons.size() + mmons.size());
  auto fill = [&](const MultiPoly<S>& p, const std::vector<Exponent>& mons, std::size_t offset, const S& sign) {
    for (std::size_t j = 0; j < mons.size(); ++j)
      for (const auto& [e, c] : p.terms()) {
        Exponent s(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) s[i] = e[i] + mons[j][i];
        k(row_of[s], offset + j) += sign * c;
      }
  };
  fill(f, nmons, 0, S(1));
  fill(g, mmons, nmons.size(), S(-1));
  return k;
}

}  // namespace detail

/// Detects a common linear factor of two forms through the relation
/// f * N = g * M with deg N = deg g - 1, deg M = deg f - 1, whose solution
/// space is nontrivial iff gcd(f, g) is nonconstant. When it is one
/// dimensional, M = f / gcd up to scale and the factor is f / M. A larger
/// kernel means a gcd of degree >= 2; no factor is returned then.
/// Exact inputs are decided exactly; float inputs by the singular-value ratio
/// against `tol`.
template <class S>
CommonFactor<S> common_factor(const MultiPoly<S>& f, const MultiPoly<S>& g, double tol = 1e-8) {
  if (f.nvars() != g.nvars()) throw std::invalid_argument("common_factor: variable count mismatch");
  const int nv = f.nvars(), m = f.degree(), n = g.degree();
  if (m < 1 || n < 1) throw std::invalid_argument("common_factor: degrees must be positive");
  const std::size_t n_cols = monomials(nv, n - 1).size();

  CommonFactor<S> out;
  MultiPoly<Complex> fc = f.template cast<Complex>(), gc = g.template cast<Complex>();
  fc = Complex(1.0 / fc.norm()) * fc;
  gc = Complex(1.0 / gc.norm()) * gc;
  Matrix<Complex> kc = detail::relation_matrix(fc, gc);
  auto rep = numerical_rank(kc, 0.0);
  const auto& sv = rep.singular_values;
  // Columns beyond the row count are kernel directions with no singular value.
  const std::size_t excess = kc.cols() > kc.rows() ? kc.cols() - kc.rows() : 0;
  out.margin = excess > 0 || sv.empty() || sv.front() == 0.0 ? 0.0 : sv.back() / sv.front();

  if constexpr (is_exact_v<S>) {
    auto ker = kernel(detail::relation_matrix(f, g));
    out.kernel_dim = ker.size();
    if (ker.size() == 1) {
      Vec<Rational> mpart(ker.front().begin() + static_cast<std::ptrdiff_t>(n_cols), ker.front().end());
      out.factor = divide_exact(f, MultiPoly<Rational>::from_coefficients(nv, m - 1, mpart));
    }
  } else {
    std::size_t dim = excess;
    for (double s : sv)
      if (s <= tol * sv.front()) ++dim;
    out.kernel_dim = dim;
    if (dim == 1) {
      auto ker = numeric_kernel(kc, tol);
      Vec<Complex> mpart(ker.front().begin() + static_cast<std::ptrdiff_t>(n_cols), ker.front().end());
      auto mpoly = MultiPoly<Complex>::from_coefficients(nv, m - 1, mpart);
      if (mpoly.norm() > 0) {
        try {
          out.factor = divide_exact(fc, mpoly);
        } catch (const std::domain_error&) {
          out.factor.reset();
        }
      }
    }
  }
  return out;
}

struct PlaneIntersection {
  Vec<Complex> point;  // homogeneous, sup-normalized
  int multiplicity = 1;
  double residual = 0.0;
};

namespace detail {

inline double relative_residual(const MultiPoly<Complex>& p, const Vec<Complex>& x) {
  double scale = p.eval_scale(x);
  return scale == 0.0 ? 0.0 : std::abs(p(x)) / scale;
}

// Newton on {f = g = 0} in the affine chart fixing the largest coordinate.
inline Vec<Complex> polish_plane_point(const MultiPoly<Complex>& f, const MultiPoly<Complex>& g, Vec<Complex> x, int iterations = 30) {
  x = sup_normalized(x);
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(x[i]) > std::abs(x[fixed])) fixed = i;
  std::array<std::size_t, 2> free{};
  for (std::size_t i = 0, k = 0; i < 3; ++i)
    if (i != fixed) free[k++] = i;
  auto gf = f.gradient(), gg = g.gradient();
  for (int it = 0; it < iterations; ++it) {
    Complex r0 = f(x), r1 = g(x);
    Complex a = gf[free[0]](x), b = gf[free[1]](x), c = gg[free[0]](x), d = gg[free[1]](x);
    Complex det = a * d - b * c;
    if (std::abs(det) == 0.0) break;
    Complex dx0 = (d * r0 - b * r1) / det, dx1 = (a * r1 - c * r0) / det;
    x[free[0]] -= dx0;
    x[free[1]] -= dx1;
    if (std::abs(dx0) + std::abs(dx1) <= 1e-16 * (1.0 + std::abs(x[free[0]]) + std::abs(x[free[1]]))) break;
  }
  return x;
}

}  // namespace detail

/// Intersection points of two plane curves without common component, counted
/// with multiplicity (deg f * deg g in total). Works in coordinates moved by a
/// seeded random projectivity so that no two intersection points share a
/// projection; each eliminant root is lifted by choosing the root of the
/// lower-degree curve that best satisfies the other, then Newton-polished.
inline std::vector<PlaneIntersection> intersect_plane_curves(const MultiPoly<Complex>& f, const MultiPoly<Complex>& g,
                                                             std::uint64_t seed = 0x5eed, double accept = 1e-8) {
  if (f.nvars() != 3 || g.nvars() != 3) throw std::invalid_argument("intersect_plane_curves: need ternary forms");
  const int total = f.degree() * g.degree();
  Rng rng(seed);
  std::vector<PlaneIntersection> best;
  double best_worst = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 6; ++attempt) {
    Matrix<Complex> t(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = rng.complex_unit() + (i == j ? Complex(1.5) : Complex(0));
    MultiPoly<Complex> ft = f.compose(t), gt = g.compose(t);
    ft = Complex(1.0 / ft.norm()) * ft;
    gt = Complex(1.0 / gt.norm()) * gt;
    BinaryForm<Complex> res = resultant(ft, gt, 2);
    if (sup_norm(res.coeffs()) <= 1e-12) throw DegenerateInput("intersect_plane_curves: curves share a component", "common_factor");
    std::vector<BinaryRoot> roots;
    try {
      roots = binary_roots(res);
    } catch (const RootFindingError&) {
      continue;
    }
    const MultiPoly<Complex>& low = ft.degree() <= gt.degree() ? ft : gt;
    const MultiPoly<Complex>& high = ft.degree() <= gt.degree() ? gt : ft;
    std::vector<PlaneIntersection> pts;
    double worst = 0.0;
    for (const auto& r : roots) {
      Complex u = r.point[0], v = r.point[1];
      // Homogeneous lift: coefficients of `low` in w at (u, v).
      Vec<Complex> lw(static_cast<std::size_t>(low.degree() + 1), Complex(0));
      for (const auto& [e, c] : low.terms()) {
        Complex term = c;
        for (int k = 0; k < e[0]; ++k) term *= u;
        for (int k = 0; k < e[1]; ++k) term *= v;
        lw[static_cast<std::size_t>(e[2])] += term;
      }
      std::vector<Complex> candidates;
      UniPoly<Complex> lp(lw);
      if (lp.degree() >= 1) {
        try {
          for (const auto& w : univariate_roots(lp)) candidates.push_back(w.value);
        } catch (const RootFindingError&) {
        }
      }
      Vec<Complex> chosen;
      double chosen_res = std::numeric_limits<double>::infinity();
      for (const auto& w : candidates) {
        Vec<Complex> y{u, v, w};
        double rr = detail::relative_residual(high, y);
        if (rr < chosen_res) {
          chosen_res = rr;
          chosen = y;
        }
      }
      if (chosen.empty()) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      if (r.multiplicity == 1) chosen = detail::polish_plane_point(ft, gt, chosen);
      double rr = std::max(detail::relative_residual(ft, chosen), detail::relative_residual(gt, chosen));
      worst = std::max(worst, rr);
      pts.push_back({sup_normalized(t.apply(chosen)), r.multiplicity, rr});
    }
    int count = 0;
    for (const auto& p : pts) count += p.multiplicity;
    if (count != total) continue;
    if (worst < best_worst) {
      best_worst = worst;
      best = pts;
    }
    if (worst <= accept) break;
  }
  if (best.empty()) throw std::runtime_error("intersect_plane_curves: no consistent lift found");
  return best;
}

}  // namespace cubicmod
