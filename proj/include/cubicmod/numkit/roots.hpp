#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmod/numkit/context.hpp"
#include "cubicmod/numkit/unipoly.hpp"

namespace cubicmod {

struct RootOptions {
  double cluster_radius = 1e-7;
  double residual_tol = 1e-10;
  int max_iterations = 500;
};

struct Root {
  Complex value;
  int multiplicity = 1;
  /// |p(z)| / sum |c_i| |z|^i at the reported root.
  double residual = 0.0;
};

class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, double condition) : std::runtime_error(what), condition_(condition) {}
  /// Largest Newton correction |p/p'| over the final iterates.
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

namespace detail {

template <class R>
struct Horner {
  using C = std::complex<R>;
  std::vector<C> a;  // ascending

  C value(const C& z) const {
    C acc(0);
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  // p(z), p'(z)
  std::pair<C, C> value_and_slope(const C& z) const {
    C p(0), dp(0);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
    }
    return {p, dp};
  }
  R scale(const C& z) const {
    R acc = 0, zp = 1, az = std::abs(z);
    for (const auto& c : a) {
      acc += std::abs(c) * zp;
      zp *= az;
    }
    return acc;
  }
};

template <class R>
std::vector<std::complex<R>> aberth(const Horner<R>& h, int max_iter) {
  using C = std::complex<R>;
  const int d = static_cast<int>(h.a.size()) - 1;
  // Initial guesses on a circle around the root centroid.
  const C lead = h.a.back();
  const C center = -h.a[static_cast<std::size_t>(d - 1)] / (lead * R(d));
  R radius = 0;
  for (int k = 1; k <= d; ++k) {
    R coef = std::abs(h.a[static_cast<std::size_t>(d - k)] / lead);
    radius = std::max(radius, std::pow(coef, R(1) / R(k)));
  }
  if (radius == 0) radius = 1;
  std::vector<C> z(static_cast<std::size_t>(d));
  const R two_pi = R(2) * std::acos(R(-1));
  for (int k = 0; k < d; ++k)
    z[static_cast<std::size_t>(k)] = center + radius * std::polar(R(1), two_pi * R(k) / R(d) + R(0.4));

  const R eps = std::numeric_limits<R>::epsilon();
  std::vector<bool> done(static_cast<std::size_t>(d), false);
  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (int k = 0; k < d; ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (done[ku]) continue;
      auto [p, dp] = h.value_and_slope(z[ku]);
      if (std::abs(p) <= R(4) * eps * h.scale(z[ku])) {
        done[ku] = true;
        continue;
      }
      C s(0);
      for (int j = 0; j < d; ++j)
        if (j != k) s += C(1) / (z[ku] - z[static_cast<std::size_t>(j)]);
      C w = (dp == C(0)) ? C(eps) : p / dp;
      C step = w / (C(1) - w * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = w;
      z[ku] -= step;
      if (std::abs(step) <= R(2) * eps * std::max(R(1), std::abs(z[ku])))
        done[ku] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  return z;
}

template <class R>
std::vector<Root> roots_impl(const UniPoly<Complex>& p, const RootOptions& opt) {
  using C = std::complex<R>;
  Horner<R> h;
  for (const auto& c : p.coeffs()) h.a.emplace_back(R(c.real()), R(c.imag()));
  const int d = p.degree();
  std::vector<C> z = aberth(h, opt.max_iterations);

  // Inclusion radii: each disk |w - z_k| <= d |p/p'| contains a root.
  std::vector<R> rho(static_cast<std::size_t>(d));
  R worst_step = 0;
  for (int k = 0; k < d; ++k) {
    auto [v, dv] = h.value_and_slope(z[static_cast<std::size_t>(k)]);
    R r = (std::abs(dv) == 0) ? (std::abs(v) == 0 ? R(0) : std::numeric_limits<R>::max()) : R(d) * std::abs(v / dv);
    rho[static_cast<std::size_t>(k)] = r;
    worst_step = std::max(worst_step, r / R(d));
  }

  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      auto iu = static_cast<std::size_t>(i), ju = static_cast<std::size_t>(j);
      R dist = std::abs(z[iu] - z[ju]);
      R fixed = R(opt.cluster_radius) * std::max({R(1), std::abs(z[iu]), std::abs(z[ju])});
      if (dist <= std::max(fixed, rho[iu] + rho[ju])) parent[static_cast<std::size_t>(find(i))] = find(j);
    }

  std::vector<Root> out;
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) groups[static_cast<std::size_t>(find(i))].push_back(i);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    C mean(0);
    for (int i : g) mean += z[static_cast<std::size_t>(i)];
    mean /= R(g.size());
    // A k-fold cluster is a simple root of the (k-1)-th derivative; polish
    // there, accepting the step only if it stays inside the cluster.
    Horner<R> hk = h;
    for (std::size_t k = 1; k < g.size(); ++k) {
      std::vector<C> d;
      for (std::size_t i = 1; i < hk.a.size(); ++i) d.push_back(hk.a[i] * R(i));
      hk.a = std::move(d);
    }
    R spread = 0;
    for (int i : g) spread = std::max(spread, std::abs(z[static_cast<std::size_t>(i)] - mean));
    C polished = mean;
    for (int it = 0; it < 6 && hk.a.size() > 1; ++it) {
      auto [v, dv] = hk.value_and_slope(polished);
      if (dv == C(0)) break;
      C step = v / dv;
      polished -= step;
      if (std::abs(step) <= std::numeric_limits<R>::epsilon() * std::abs(polished)) break;
    }
    if (g.size() == 1 || std::abs(polished - mean) <= R(2) * spread) mean = polished;
    R scale = h.scale(mean);
    double res = scale == 0 ? 0.0 : static_cast<double>(std::abs(h.value(mean)) / scale);
    out.push_back({Complex(static_cast<double>(mean.real()), static_cast<double>(mean.imag())), static_cast<int>(g.size()), res});
  }
  for (const auto& r : out)
    if (!(r.residual <= opt.residual_tol) || !is_finite(r.value))
      throw RootFindingError("univariate_roots: residual " + std::to_string(r.residual) + " above tolerance after iteration cap",
                             static_cast<double>(worst_step));
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

}  // namespace detail

/// Roots of a float polynomial by Aberth simultaneous iteration, clustering
/// and Newton polish. A cluster is reported once with multiplicity equal to its
/// size, at its mean refined on the matching derivative.
inline std::vector<Root> univariate_roots(const UniPoly<Complex>& p, const RootOptions& opt = {}) {
  if (p.degree() < 1) throw std::invalid_argument("univariate_roots: degree must be at least 1");
  for (const auto& c : p.coeffs())
    if (!is_finite(c)) throw std::invalid_argument("univariate_roots: non-finite coefficient");
  if (numeric_context().precision == Precision::Extended) return detail::roots_impl<long double>(p, opt);
  return detail::roots_impl<double>(p, opt);
}

/// Total count of roots with multiplicity.
inline int root_count(const std::vector<Root>& roots) {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

struct BinaryRoot {
  std::array<Complex, 2> point;  // (u : v)
  int multiplicity = 1;
};

/// Roots of a binary form on P^1; vanishing top coefficients give the root 1:0.
inline std::vector<BinaryRoot> binary_roots(const BinaryForm<Complex>& f, const RootOptions& opt = {}) {
  if (f.is_zero()) throw std::domain_error("binary_roots: zero form");
  std::vector<BinaryRoot> out;
  UniPoly<Complex> dh = f.dehomogenized();
  int at_infinity = f.degree() - dh.degree();
  if (dh.degree() >= 1)
    for (const auto& r : univariate_roots(dh, opt)) out.push_back({{r.value, Complex(1)}, r.multiplicity});
  if (at_infinity > 0) out.push_back({{Complex(1), Complex(0)}, at_infinity});
  return out;
}

}  // namespace cubicmod
