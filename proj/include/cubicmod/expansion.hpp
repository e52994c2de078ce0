#pragma once

#include <stdexcept>

#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/multipoly.hpp"

namespace cubicmod {

/// Taylor expansion of a cubic form at a point p of its zero set:
/// F(p + t d) = t F1(x) + t^2 F2(x) + t^3 F3(x), where d = frame * (0, x)
/// and x ranges over the four direction coordinates. The frame is
/// [p | e_j ...] with the unit vectors e_j for j != argmax |p_j|.
template <class S>
struct LocalExpansion {
  Vec<S> base;
  Matrix<S> frame;
  MultiPoly<S> f1, f2, f3;
  /// |F(p)| relative to its evaluation scale (exactly 0 for exact inputs).
  double base_residual = 0.0;

  /// True iff the linear term vanishes (p is a singular point).
  bool singular() const {
    if constexpr (is_exact_v<S>)
      return f1.is_zero();
    else
      return f1.norm() <= 1e-12 * std::max({f1.norm(), f2.norm(), f3.norm(), 1e-300});
  }

  std::size_t nvars() const { return base.size() - 1; }

  /// Direction vector in the ambient space for direction coordinates x.
  Vec<S> direction(const Vec<S>& x) const {
    Vec<S> y{S(0)};
    y.insert(y.end(), x.begin(), x.end());
    return frame.apply(y);
  }

  /// The point p + t d(x).
  Vec<S> point(const S& t, const Vec<S>& x) const { return axpy(S(1), base, t, direction(x)); }
};

template <class S>
LocalExpansion<S> local_expand(const MultiPoly<S>& f, const Vec<S>& p) {
  if (f.degree() != 3) throw std::invalid_argument("local_expand: need a cubic form");
  if (static_cast<std::size_t>(f.nvars()) != p.size()) throw std::invalid_argument("local_expand: point dimension mismatch");
  LocalExpansion<S> e;
  e.base = p;
  S value = f(p);
  if constexpr (is_exact_v<S>) {
    if (sgn(value) != 0) throw std::domain_error("local_expand: point not on the hypersurface");
  } else {
    double scale = f.eval_scale(p);
    e.base_residual = scale == 0.0 ? 0.0 : std::abs(value) / scale;
    if (e.base_residual > 1e-9) throw std::domain_error("local_expand: point not on the hypersurface");
  }
  const std::size_t n = p.size();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (magnitude(p[i]) > magnitude(p[k])) k = i;
  e.frame = Matrix<S>(n, n);
  for (std::size_t i = 0; i < n; ++i) e.frame(i, 0) = p[i];
  for (std::size_t j = 0, col = 1; j < n; ++j)
    if (j != k) e.frame(j, col++) = S(1);
  MultiPoly<S> g = f.compose(e.frame);
  // Coefficient of x0^(3-k) is F_k.
  e.f1 = g.coefficient_of(0, 2);
  e.f2 = g.coefficient_of(0, 1);
  e.f3 = g.coefficient_of(0, 0);
  return e;
}

}  // namespace cubicmod
