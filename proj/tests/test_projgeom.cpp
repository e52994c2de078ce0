#include <gtest/gtest.h>

#include "cubicmod/numkit/random.hpp"
#include "cubicmod/projgeom.hpp"

using namespace cubicmod;

namespace {

Matrix<Rational> random_invertible(Rng& rng, std::size_t n) {
  for (;;) {
    Matrix<Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.rational(6, 4);
    if (sgn(determinant(m)) != 0) return m;
  }
}

Matrix<Rational> diag(std::initializer_list<int> d) {
  Matrix<Rational> m(d.size(), d.size());
  std::size_t i = 0;
  for (int v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST(ProjPoint, CanonicalRepresentative) {
  ProjPoint<Rational> p(Vec<Rational>{0, Rational(-2, 3), Rational(4, 9)});
  EXPECT_EQ(p.coords(), (Vec<Rational>{0, 3, -2}));
  EXPECT_THROW(ProjPoint<Rational>(Vec<Rational>{0, 0}), std::invalid_argument);
  ProjPoint<Complex> q(Vec<Complex>{2.0, Complex(0, 4), 1.0});
  EXPECT_NEAR(std::abs(q[1] - 1.0), 0.0, 1e-15);
}

TEST(ProjLine, PluckerIndependentOfSpan) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    auto a = rng.rational_vector(4), b = rng.rational_vector(4);
    ProjLine<Rational> l(a, b);
    EXPECT_EQ(l.grassmann_residual(), 0.0);
    Rational s1 = rng.rational(), t1 = rng.rational(), s2 = rng.rational(), t2 = rng.rational();
    if (s1 * t2 == s2 * t1) continue;
    ProjLine<Rational> m(l.point_at(s1, t1), l.point_at(s2, t2));
    EXPECT_TRUE(proportional(l.plucker(), m.plucker()));
    EXPECT_TRUE(same_line(l, m));
    EXPECT_TRUE(l.contains(m.first()));
  }
}

TEST(ProjLine, FloatGrassmannAndDistance) {
  Rng rng(4);
  auto a = rng.complex_vector(5), b = rng.complex_vector(5);
  ProjLine<Complex> l(a, b);
  EXPECT_LE(l.grassmann_residual(), 1e-10);
  ProjLine<Complex> m(l.point_at(Complex(0.3, 1), Complex(-2, 0.1)), l.point_at(Complex(1.5), Complex(0, 1)));
  EXPECT_LE(plucker_distance(l, m), 1e-12);
  ProjLine<Complex> other(a, rng.complex_vector(5));
  EXPECT_GT(plucker_distance(l, other), 1e-3);
  EXPECT_THROW(ProjLine<Rational>(Vec<Rational>{1, 2, 3}, Vec<Rational>{2, 4, 6}), std::invalid_argument);
}

TEST(ProjLine, KleinIncidence) {
  // Lines through a common point meet; generic pairs do not.
  Vec<Rational> p{1, 2, 3, 4};
  ProjLine<Rational> a(p, Vec<Rational>{0, 1, 0, 0}), b(p, Vec<Rational>{5, 0, 1, -1});
  EXPECT_EQ(klein_pairing(a.plucker(), b.plucker()), 0);
  ProjLine<Rational> c(Vec<Rational>{1, 0, 0, 0}, Vec<Rational>{0, 1, 0, 0}), d(Vec<Rational>{0, 0, 1, 0}, Vec<Rational>{0, 0, 0, 1});
  EXPECT_NE(klein_pairing(c.plucker(), d.plucker()), 0);
  EXPECT_EQ(klein_pairing(c.plucker(), c.plucker()), 0);
}

TEST(QuadricRank, TrivialAndCongruenceInvariance) {
  QuadricForm<Rational> q(diag({1, 1, 1, 0}));
  EXPECT_EQ(quadric_rank(q).rank, 3);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    auto m = random_invertible(rng, 4);
    EXPECT_EQ(quadric_rank(q.restricted(m)).rank, 3);
    auto qc = q.restricted(m).cast<Complex>();
    auto rep = quadric_rank(qc);
    EXPECT_EQ(rep.rank, 3);
    EXPECT_FALSE(rep.ill_conditioned);
  }
}

TEST(QuadricRank, IllConditionedFlag) {
  Matrix<Complex> a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = 2e-8;
  auto rep = quadric_rank(QuadricForm<Complex>(a));
  EXPECT_TRUE(rep.ill_conditioned);
}

TEST(QuadricForm, PolyRoundTrip) {
  auto x = MultiPoly<Rational>::variable(3, 0), y = MultiPoly<Rational>::variable(3, 1), z = MultiPoly<Rational>::variable(3, 2);
  auto f = x * y + Rational(3) * (y * z) - z * z;
  auto q = QuadricForm<Rational>::from_poly(f);
  EXPECT_EQ(q.to_poly(), f);
  Vec<Rational> v{2, -1, Rational(1, 3)};
  EXPECT_EQ(q(v), f(v));
}

TEST(CrossRatio, StandardValues) {
  using P = P1Point<Rational>;
  P zero{0, 1}, one{1, 1}, inf{1, 0}, two{2, 1};
  EXPECT_EQ(cross_ratio(zero, one, inf, P{Rational(7, 3), 1}), Rational(7, 3));
  EXPECT_EQ(cross_ratio(one, zero, inf, two), -1);
  EXPECT_THROW(cross_ratio(zero, zero, inf, two), DegenerateInput);
  EXPECT_THROW(cross_ratio(zero, one, inf, inf), DegenerateInput);
}

TEST(CrossRatio, MobiusInvarianceFuzz) {
  Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    std::array<P1Point<Rational>, 4> pts;
    for (auto& p : pts) p = {rng.rational(), rng.rational()};
    bool bad = false;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p1_equal(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)])) bad = true;
    if (bad) continue;
    Rational a = rng.rational(), b = rng.rational(), c = rng.rational(), d = rng.rational();
    if (a * d == b * c) continue;
    auto mob = [&](const P1Point<Rational>& p) { return P1Point<Rational>{a * p[0] + b * p[1], c * p[0] + d * p[1]}; };
    EXPECT_EQ(cross_ratio(pts[0], pts[1], pts[2], pts[3]), cross_ratio(mob(pts[0]), mob(pts[1]), mob(pts[2]), mob(pts[3])));
  }
}

TEST(CrossRatio, CollinearPointsInSpace) {
  Vec<Rational> a{1, 0, 2, 1}, b{0, 1, 1, 3};
  auto on = [&](Rational s, Rational t) { return axpy(s, a, t, b); };
  // Parameters (s:t) = (0:1), (1:1), (1:0), (5:1) on the pencil a, b.
  EXPECT_EQ(cross_ratio(on(0, 1), on(1, 1), on(1, 0), on(5, 1)), 5);
  EXPECT_THROW(cross_ratio(a, b, on(1, 1), Vec<Rational>{1, 1, 1, 1}), DegenerateInput);
}

TEST(Conic, CircleParametrization) {
  QuadricForm<Rational> circle(diag({1, 1, -1}));
  ConicParametrization<Rational> par(circle, Vec<Rational>{1, 0, 1});
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    Rational u = rng.rational(), v = rng.rational();
    if (sgn(u) == 0 && sgn(v) == 0) continue;
    auto x = par(u, v);
    EXPECT_EQ(circle(x), 0);
    auto back = par.param_of(x);
    EXPECT_EQ(back[0] * v, back[1] * u);
  }
  auto s = par.param_of(Vec<Rational>{2, 0, 2});
  EXPECT_EQ(s[1], 0);
  EXPECT_TRUE(proportional(par(1, 0), Vec<Rational>{1, 0, 1}));
}

TEST(Conic, FloatResiduals) {
  Rng rng(8);
  Matrix<Complex> a(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) a(i, j) = a(j, i) = rng.complex_unit();
  QuadricForm<Complex> q(a);
  // Seed: a root of q on the line x2 = 1, x1 = 0.3.
  Complex c2 = a(0, 0), c1 = 2.0 * (a(0, 1) * 0.3 + a(0, 2)), c0 = a(1, 1) * 0.09 + 2.0 * a(1, 2) * 0.3 + a(2, 2);
  auto roots = univariate_roots(UniPoly<Complex>({c0, c1, c2}));
  Vec<Complex> seed{roots[0].value, 0.3, 1.0};
  ConicParametrization<Complex> par(q, seed);
  for (int t = 0; t < 5; ++t) {
    Complex u = rng.complex_unit(), v = rng.complex_unit();
    auto x = par(u, v);
    EXPECT_TRUE(q.contains(x, 1e-10));
    auto back = par.param_of(x);
    EXPECT_LE(std::abs(back[0] * v - back[1] * u), 1e-10 * std::abs(back[1]));
  }
}

TEST(Conic, DegenerateRejected) {
  QuadricForm<Rational> lines(Matrix<Rational>::from_rows({{0, Rational(1, 2), 0}, {Rational(1, 2), 0, 0}, {0, 0, 0}}));
  try {
    ConicParametrization<Rational>(lines, Vec<Rational>{1, 0, 0});
    FAIL();
  } catch (const DegenerateInput& e) {
    EXPECT_EQ(e.hint(), "boundary");
  }
}

TEST(TangentHyperplane, CovectorAndContainment) {
  QuadricForm<Rational> q(diag({1, 1, 1, 1, -1}));
  Vec<Rational> x{1, 0, 0, 0, 1};
  auto h = tangent_hyperplane(q, x);
  EXPECT_EQ(h.covector, q.polar(x));
  EXPECT_TRUE(h.contains(x));
  // Section of a smooth quadric by a tangent hyperplane is a cone of rank 3.
  auto span = kernel(Matrix<Rational>::from_rows({h.covector}));
  EXPECT_EQ(quadric_rank(q.restricted(Matrix<Rational>::from_columns(span))).rank, 3);
  QuadricForm<Rational> cone(diag({1, 1, -1, 1, 0}));
  EXPECT_THROW(tangent_hyperplane(cone, Vec<Rational>{0, 0, 0, 0, 1}), DegenerateInput);
  EXPECT_THROW(tangent_hyperplane(q, Vec<Rational>{1, 0, 0, 0, 0}), std::invalid_argument);
}

TEST(TangentHyperplane, RandomPointsRankThree) {
  Rng rng(12);
  QuadricForm<Rational> q(Matrix<Rational>::from_rows({{0, 0, 0, Rational(1, 2), 0}, {0, 0, Rational(-1, 2), 0, 0}, {0, Rational(-1, 2), 0, 0, 0}, {Rational(1, 2), 0, 0, 0, 0}, {0, 0, 0, 0, -1}}));
  for (int t = 0; t < 20; ++t) {
    // x0 x3 - x1 x2 - x4^2 = 0 solved for x3.
    Rational x0 = rng.nonzero_integer(9), x1 = rng.rational(), x2 = rng.rational(), x4 = rng.rational();
    Vec<Rational> x{x0, x1, x2, (x1 * x2 + x4 * x4) / x0, x4};
    auto h = tangent_hyperplane(q, x);
    EXPECT_TRUE(h.contains(x));
    auto span = kernel(Matrix<Rational>::from_rows({h.covector}));
    EXPECT_EQ(quadric_rank(q.restricted(Matrix<Rational>::from_columns(span))).rank, 3);
  }
}

TEST(PolarPoints, CoordinateQuadricTwoPoints) {
  QuadricForm<Rational> qe(diag({1, 1, 1, 1, -1}));
  auto q = qe.cast<Complex>();
  LinearSpan<Complex> plane({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}});
  auto pair = polar_points_on_quadric(q, plane);
  EXPECT_FALSE(pair.coincident);
  for (const auto& x : pair.points) {
    EXPECT_TRUE(q.contains(x));
    auto h = tangent_hyperplane(q, x);
    for (const auto& p : plane.basis()) EXPECT_TRUE(h.contains(p));
  }
  // Polar line is {x0 = x1 = x2 = 0}, so the pair is (0:0:0:1:+-1).
  for (const auto& x : pair.points) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(x[i]), 1e-12);
    EXPECT_NEAR(std::abs(x[3]), std::abs(x[4]), 1e-12);
  }
  EXPECT_NEAR(std::abs(pair.points[0][4] / pair.points[0][3] + pair.points[1][4] / pair.points[1][3]), 0.0, 1e-12);
}

TEST(PolarPoints, TangentPlaneCoincident) {
  QuadricForm<Complex> q(diag({1, 1, 1, 1, -1}).cast<Complex>());
  // Plane inside the tangent hyperplane at x = (1,0,0,0,1) and containing x:
  // its polar line is tangent to Q at x.
  LinearSpan<Complex> plane({{1, 0, 0, 0, 1}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}});
  auto pair = polar_points_on_quadric(q, plane);
  EXPECT_TRUE(pair.coincident);
}

TEST(PolarPoints, RandomPlanesHundredTrials) {
  Rng rng(31);
  Matrix<Complex> a(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) a(i, j) = a(j, i) = rng.complex_unit();
  QuadricForm<Complex> q(a);
  for (int t = 0; t < 100; ++t) {
    LinearSpan<Complex> plane({rng.complex_vector(5), rng.complex_vector(5), rng.complex_vector(5)});
    auto pair = polar_points_on_quadric(q, plane);
    EXPECT_FALSE(pair.coincident);
    for (const auto& x : pair.points) {
      auto h = tangent_hyperplane(q, x);
      for (const auto& p : plane.basis()) EXPECT_LE(std::abs(h(p)) / (sup_norm(h.covector) * sup_norm(p)), 1e-9);
    }
  }
}

TEST(PolarPartner, ExactInvolution) {
  QuadricForm<Rational> q(Matrix<Rational>::from_rows({{0, 0, 0, Rational(1, 2), 0}, {0, 0, Rational(-1, 2), 0, 0}, {0, Rational(-1, 2), 0, 0, 0}, {Rational(1, 2), 0, 0, 0, 0}, {0, 0, 0, 0, -1}}));
  Vec<Rational> p{0, 0, 0, 0, 1};
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Rational x0 = rng.nonzero_integer(9), x1 = rng.rational(), x2 = rng.rational(), x4 = rng.nonzero_integer(5);
    Vec<Rational> x{x0, x1, x2, (x1 * x2 + x4 * x4) / x0, x4};
    auto y = polar_partner(q, x, {p});
    EXPECT_TRUE(q.contains(y));
    EXPECT_FALSE(proportional(x, y));
    EXPECT_TRUE(proportional(polar_partner(q, y, {p}), x));
  }
}
