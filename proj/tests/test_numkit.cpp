#include <gtest/gtest.h>

#include <complex>

#include "cubicmod/numkit/elimination.hpp"
#include "cubicmod/numkit/matrix.hpp"
#include "cubicmod/numkit/multipoly.hpp"
#include "cubicmod/numkit/random.hpp"
#include "cubicmod/numkit/roots.hpp"

using namespace cubicmod;

namespace {

using QPoly = MultiPoly<Rational>;
using CPoly = MultiPoly<Complex>;

QPoly var(int i) { return QPoly::variable(3, i); }

// Brute-force resultant oracle: Sylvester determinant with polynomial entries
// is replaced by evaluating at the binary point directly.
Rational resultant_at(const QPoly& f, const QPoly& g, int w, const Rational& u, const Rational& v) {
  auto [r0, r1] = std::pair<int, int>{w == 0 ? 1 : 0, w == 2 ? 1 : 2};
  auto coeffs = [&](const QPoly& p) {
    Vec<Rational> c(static_cast<std::size_t>(p.degree() + 1), Rational(0));
    for (const auto& [e, a] : p.terms()) {
      Rational t = a;
      for (int k = 0; k < e[static_cast<std::size_t>(r0)]; ++k) t *= u;
      for (int k = 0; k < e[static_cast<std::size_t>(r1)]; ++k) t *= v;
      c[static_cast<std::size_t>(e[static_cast<std::size_t>(w)])] += t;
    }
    return c;
  };
  return detail::sylvester_determinant(coeffs(f), coeffs(g));
}

}  // namespace

TEST(Rational, CrossMultiplicationFuzz) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    long a = rng.integer(-1000, 1000), b = rng.integer(1, 1000), c = rng.integer(-1000, 1000), d = rng.integer(1, 1000);
    Rational x(a, b), y(c, d);
    x.canonicalize();
    y.canonicalize();
    Rational lhs = x + y;
    // Oracle: integer cross-multiplication, then compare num*den' = num'*den.
    Integer num = Integer(a) * d + Integer(c) * b, den = Integer(b) * d;
    EXPECT_EQ(lhs.get_num() * den, num * lhs.get_den()) << a << "/" << b << " + " << c << "/" << d;
    EXPECT_GT(sgn(lhs.get_den()), 0);
  }
}

TEST(Rational, ParseAndReject) {
  EXPECT_EQ(parse_rational(" -6/4 "), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(SolveLinear, KernelShapes) {
  EXPECT_TRUE(solve_linear(Matrix<Rational>::identity(3)).kernel.empty());
  auto k = solve_linear(Matrix<Rational>::from_rows({{1, 1, 1}})).kernel;
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_EQ(v[0] + v[1] + v[2], 0);
  EXPECT_THROW(solve_linear(Matrix<Rational>::identity(2), Vec<Rational>{1, 2, 3}), std::invalid_argument);
}

TEST(SolveLinear, QuadricsThroughFivePoints) {
  std::vector<Vec<Rational>> pts = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}};
  auto mons = monomials(4, 2);
  Matrix<Rational> ev(5, mons.size());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < mons.size(); ++j) {
      Rational t = 1;
      for (std::size_t k = 0; k < 4; ++k)
        for (int e = 0; e < mons[j][k]; ++e) t *= pts[i][k];
      ev(i, j) = t;
    }
  auto k = solve_linear(ev).kernel;
  EXPECT_EQ(k.size(), 5u);
  // Oracle: rank by independent elimination equals 5.
  EXPECT_EQ(rank(ev), 5u);
  for (const auto& q : k) EXPECT_TRUE(all_zero(ev.apply(q)));
}

TEST(SolveLinear, InconsistentSystem) {
  auto a = Matrix<Rational>::from_rows({{1, 1}, {2, 2}});
  auto sol = solve_linear(a, Vec<Rational>{1, 3});
  EXPECT_FALSE(sol.consistent);
  EXPECT_FALSE(sol.particular.has_value());
}

TEST(MultiPoly, HomogeneityGuard) {
  QPoly p(3, 2);
  EXPECT_THROW(p.add_term({1, 0, 0}, 1), std::invalid_argument);
  auto f = var(0) * var(1) + var(2) * var(2);
  auto g = f * (var(0) + var(2));
  for (const auto& [e, c] : g.terms()) EXPECT_EQ(e[0] + e[1] + e[2], 3);
  auto m = Matrix<Rational>::from_rows({{1, 2, 0}, {0, 1, 0}, {3, 0, 1}});
  auto h = g.compose(m);
  EXPECT_EQ(h.degree(), 3);
  Vec<Rational> y{2, -1, 5};
  EXPECT_EQ(h(y), g(m.apply(y)));
}

TEST(Roots, Trivial) {
  auto r = univariate_roots(UniPoly<Complex>({-1.0, 0.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].value.real(), -1.0, 1e-12);
  EXPECT_NEAR(r[1].value.real(), 1.0, 1e-12);
  auto t = univariate_roots(UniPoly<Complex>({-8.0, 12.0, -6.0, 1.0}));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].multiplicity, 3);
  EXPECT_NEAR(std::abs(t[0].value - 2.0), 0.0, 1e-6);
  EXPECT_THROW(univariate_roots(UniPoly<Complex>({1.0})), std::invalid_argument);
}

TEST(Roots, VietaFuzz) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int d = static_cast<int>(rng.integer(1, 6));
    Vec<Complex> c = rng.complex_vector(static_cast<std::size_t>(d + 1));
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    auto roots = univariate_roots(UniPoly<Complex>(c));
    Complex sum(0), prod(1);
    for (const auto& r : roots)
      for (int m = 0; m < r.multiplicity; ++m) {
        sum += r.value;
        prod *= r.value;
      }
    Complex es = -c[static_cast<std::size_t>(d - 1)] / c.back();
    Complex ep = (d % 2 ? -1.0 : 1.0) * c[0] / c.back();
    EXPECT_LE(std::abs(sum - es), 1e-9 * std::max(1.0, std::abs(es)));
    EXPECT_LE(std::abs(prod - ep), 1e-9 * std::max(1.0, std::abs(ep)));
    EXPECT_EQ(root_count(roots), d);
  }
}

TEST(Roots, ExtendedPrecisionAgrees) {
  ScopedPrecision guard(Precision::Extended);
  auto r = univariate_roots(UniPoly<Complex>({6.0, -5.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].value.real(), 2.0, 1e-14);
  EXPECT_NEAR(r[1].value.real(), 3.0, 1e-14);
}

TEST(Resultant, AxisExample) {
  // f = xy, g = x^3 + y^3. Eliminating z is impossible (z never occurs, so the
  // center (0:0:1) lies on both curves); eliminating x leaves y^6 up to sign.
  auto f = var(0) * var(1);
  auto g = var(0) * var(0) * var(0) + var(1) * var(1) * var(1);
  EXPECT_THROW(resultant(f, g, 2), DegenerateInput);
  auto r = resultant(f, g, 0);
  ASSERT_EQ(r.degree(), 6);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(r.coeffs()[static_cast<std::size_t>(j)], 0) << j;
  EXPECT_NE(r.coeffs()[6], 0);
}

TEST(Resultant, MatchesPointwiseSylvester) {
  auto x = var(0), y = var(1), z = var(2);
  auto f = x * x + y * y - z * z;
  auto g = x * x * x - z * z * y;
  for (int w = 0; w < 3; ++w) {
    auto r = resultant(f, g, w);
    ASSERT_EQ(r.degree(), 6);
    for (int k = -3; k <= 3; ++k) {
      Rational u(k, 2), v(1);
      EXPECT_EQ(r(u, v), resultant_at(f, g, w, u, v));
    }
  }
}

TEST(Resultant, RootCountAgainstAffineSolve) {
  auto x = var(0), y = var(1), z = var(2);
  auto f = x * x + y * y - z * z;
  auto g = x * x * x - z * z * y;
  auto pts = intersect_plane_curves(f.cast<Complex>(), g.cast<Complex>());
  int total = 0;
  for (const auto& p : pts) {
    total += p.multiplicity;
    EXPECT_LE(p.residual, 1e-10);
  }
  EXPECT_EQ(total, 6);
  // Affine oracle on z = 1: y = x^3, x^2 + x^6 = 1 gives 6 roots in x.
  auto xs = univariate_roots(UniPoly<Complex>({-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}));
  ASSERT_EQ(xs.size(), 6u);
  for (const auto& r : xs) {
    Vec<Complex> q{r.value, r.value * r.value * r.value, 1.0};
    double best = 1e9;
    for (const auto& p : pts) best = std::min(best, std::abs(p.point[0] / p.point[2] - q[0]) + std::abs(p.point[1] / p.point[2] - q[1]));
    EXPECT_LE(best, 1e-9);
  }
}

TEST(Resultant, CommonComponentVanishes) {
  auto x = var(0), y = var(1), z = var(2);
  auto f = x * (y + z);
  auto g = x * (y * y + z * z + x * x);
  auto r = resultant(f, g, 0);
  EXPECT_TRUE(r.is_zero());
  auto cf = common_factor(f, g);
  ASSERT_TRUE(cf.factor.has_value());
  EXPECT_EQ(cf.kernel_dim, 1u);
  auto q = divide_exact(f, *cf.factor);
  EXPECT_EQ(q.degree(), 1);
}

TEST(CommonFactor, Trivial) {
  auto x = var(0), y = var(1), z = var(2);
  auto cf = common_factor(x * y, x * (y * y + z * z));
  ASSERT_TRUE(cf.factor);
  EXPECT_TRUE(divide_exact(x, *cf.factor).degree() == 0);
  auto none = common_factor(x * x + y * y - z * z, x * x * x - z * z * y);
  EXPECT_FALSE(none.factor);
  EXPECT_EQ(none.kernel_dim, 0u);
  EXPECT_GT(none.margin, 1e-6);
}

TEST(CommonFactor, FloatRegime) {
  auto x = var(0), y = var(1), z = var(2);
  auto l = x + 2 * y - 3 * z;
  auto f = (l * (x - y)).cast<Complex>();
  auto g = (l * (x * x + y * z + z * z)).cast<Complex>();
  auto cf = common_factor(f, g);
  ASSERT_TRUE(cf.factor);
  EXPECT_LE(cf.margin, 1e-10);
  auto lc = l.cast<Complex>();
  Vec<Complex> a = cf.factor->coefficients(), b = lc.coefficients();
  Complex s = b[0] / a[0];
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i] * s - b[i]), 1e-9);
}

TEST(CommonFactor, ResultantZeroIffFactorCorpus) {
  Rng rng(17);
  auto random_form = [&](int d) {
    QPoly p(3, d);
    for (const auto& m : monomials(3, d)) p.add_term(m, Rational(rng.nonzero_integer(5)));
    return p;
  };
  for (int i = 0; i < 40; ++i) {
    bool shared = i % 2 == 0;
    QPoly f, g;
    if (shared) {
      auto l = random_form(1);
      f = l * random_form(1);
      g = l * random_form(2);
    } else {
      f = random_form(2);
      g = random_form(3);
    }
    auto r = resultant(f, g, 2);
    auto cf = common_factor(f, g);
    EXPECT_EQ(r.is_zero(), cf.factor.has_value()) << i;
    EXPECT_EQ(shared, cf.factor.has_value()) << i;
  }
}
