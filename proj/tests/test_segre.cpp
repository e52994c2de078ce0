#include <gtest/gtest.h>

#include <set>

#include "cubicmod/segre.hpp"

using namespace cubicmod;

namespace {

const SegreModel& model() {
  static const SegreModel m = build_standard_segre();
  return m;
}

const PhiL& phi() {
  static const PhiL p = build_phi_L(default_base_points());
  return p;
}

}  // namespace

TEST(Segre, CountsAndIncidence) {
  const auto& m = model();
  EXPECT_EQ(m.nodes.size(), 10u);
  EXPECT_EQ(m.planes.size(), 15u);
  for (std::size_t k = 0; k < 15; ++k) EXPECT_EQ(m.nodes_on_plane(k).size(), 4u);
  for (std::size_t n = 0; n < 10; ++n) EXPECT_EQ(m.planes_through_node(n).size(), 6u);
  // Oracle: a node lies on x_i + x_j = 0 iff its entries i, j have opposite signs.
  for (std::size_t k = 0; k < 15; ++k)
    for (std::size_t n = 0; n < 10; ++n) {
      bool expect = true;
      for (auto [i, j] : m.planes[k].matching) expect = expect && m.nodes[n][static_cast<std::size_t>(i)] == -m.nodes[n][static_cast<std::size_t>(j)];
      EXPECT_EQ(m.incidence[k][n], expect);
    }
}

TEST(Segre, NodesAreSingularPlanesOnCubic) {
  const auto& m = model();
  for (const auto& n : m.nodes) {
    EXPECT_EQ(m.cubic6(n), 0);
    EXPECT_EQ(std::accumulate(n.begin(), n.end(), Rational(0)), 0);
    // Full gradient 3 x_i^2 is proportional to the hyperplane normal.
    EXPECT_TRUE(proportional(m.cubic6.gradient_at(n), Vec<Rational>(6, Rational(1))));
  }
  Rng rng(1);
  for (const auto& p : m.planes)
    for (int t = 0; t < 5; ++t) {
      Vec<Rational> x(6, Rational(0));
      for (const auto& b : p.basis) x = axpy(Rational(1), x, rng.rational(), b);
      EXPECT_EQ(m.cubic6(x), 0);
    }
}

TEST(Segre, SymmetricGroupTransitivity) {
  const auto& m = model();
  auto perms = all_perm6();
  ASSERT_EQ(perms.size(), 720u);
  std::set<int> node_orbit, plane_orbit;
  for (const auto& g : perms) {
    node_orbit.insert(m.node_index(permute_coords(g, m.nodes[0])));
    plane_orbit.insert(m.plane_index(permute_matching(g, m.planes[0].matching)));
    // Node and plane sets are stabilized.
    for (const auto& n : m.nodes) EXPECT_GE(m.node_index(permute_coords(g, n)), 0);
  }
  EXPECT_EQ(node_orbit.size(), 10u);
  EXPECT_EQ(plane_orbit.size(), 15u);
  EXPECT_EQ(node_orbit.count(-1), 0u);
  Perm6 id{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(permute_coords(id, m.nodes[3]), m.nodes[3]);
}

TEST(NodeCone, AllNodes) {
  const auto& m = model();
  for (std::size_t n = 0; n < 10; ++n) {
    auto r = node_cone_analysis(m, n);
    EXPECT_TRUE(r.f1_vanishes);
    EXPECT_EQ(r.cone_rank, 4);
    EXPECT_EQ(r.planes.size(), 6u);
    EXPECT_TRUE(r.planes_in_cone);
    EXPECT_EQ(r.rulings[0].size(), 3u);
    EXPECT_EQ(r.rulings[1].size(), 3u);
    EXPECT_TRUE(r.split_ok);
  }
}

TEST(NodeCone, SmoothPointHasLinearTerm) {
  const auto& m = model();
  // (1, -1, 0, 0, 0, 0) + chord construction would do; a simple smooth point:
  // x = (1, -1, 1, -1, 2, -2) lies on the plane x0+x1 = x2+x3 = x4+x5 = 0.
  Vec<Rational> x{1, -1, 1, -1, 2, -2};
  ASSERT_EQ(m.cubic6(x), 0);
  auto e = local_expand(m.threefold, SegreModel::to_chart(x));
  EXPECT_FALSE(e.f1.is_zero());
  EXPECT_FALSE(e.singular());
}

TEST(Expansion, ReproducesCubicOnProbes) {
  const auto& m = model();
  Vec<Rational> x{1, -1, 1, -1, 2, -2};
  Vec<Rational> p = SegreModel::to_chart(x);
  auto e = local_expand(m.threefold, p);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Vec<Rational> d = rng.rational_vector(4);
    Rational s = rng.rational();
    Rational lhs = m.threefold(e.point(s, d));
    Rational rhs = s * e.f1(d) + s * s * e.f2(d) + s * s * s * e.f3(d);
    EXPECT_EQ(lhs, rhs);
  }
  EXPECT_THROW(local_expand(m.threefold, Vec<Rational>{1, 1, 0, 0, 0}), std::domain_error);
}

TEST(PhiL, QuadricSystemAndUniqueCubic) {
  const auto& p = phi();
  EXPECT_EQ(p.quadrics.size(), 5u);
  for (const auto& q : p.quadrics)
    for (const auto& b : p.base) EXPECT_EQ(q(b), 0);
  EXPECT_EQ(p.cubic_kernel_dim, 1u);
  EXPECT_GE(p.fit_samples, 40u);
  Rng rng(99);
  for (int t = 0; t < 30; ++t) {
    auto x = rng.rational_vector(4, 30, 11);
    EXPECT_EQ(p.cubic(phi_L_eval(p, x)), 0);
  }
  EXPECT_THROW(phi_L_eval(p, p.base[0]), DegenerateInput);
}

TEST(PhiL, ContractedJoinsAreTenDistinctNodes) {
  const auto& p = phi();
  std::vector<Vec<Rational>> images;
  Rng rng(7);
  auto grad = p.cubic.gradient();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      auto node = join_image(p, i, j);
      for (int s = 0; s < 5; ++s) {
        Rational a = rng.nonzero_integer(9), b = rng.nonzero_integer(9);
        auto y = phi_L_raw(p, axpy(a, p.base[i], b, p.base[j]));
        EXPECT_TRUE(proportional(y, node));
      }
      for (const auto& g : grad) EXPECT_EQ(g(node), 0);
      images.push_back(node);
    }
  for (std::size_t a = 0; a < images.size(); ++a)
    for (std::size_t b = a + 1; b < images.size(); ++b) EXPECT_FALSE(proportional(images[a], images[b]));
}

TEST(PhiL, FifteenImagePlanes) {
  const auto& p = phi();
  Rng rng(8);
  // Ten planes through three base points.
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
        ASSERT_EQ(span_rank(imgs), 3);
        auto basis = detail::row_space(imgs);
        EXPECT_TRUE(p.cubic.compose(Matrix<Rational>::from_columns(basis)).is_zero());
      }
  // Five planes replacing the base points.
  for (std::size_t i = 0; i < 5; ++i) {
    auto m = base_point_plane_map(p, i);
    EXPECT_EQ(rank(m), 3u);
    EXPECT_TRUE(p.cubic.compose(m).is_zero());
  }
}

TEST(PhiL, NoOtherSingularPointsOnProbe) {
  const auto& p = phi();
  auto grad = p.cubic.cast<Complex>().gradient();
  Rng rng(10);
  double smallest = 1e9;
  for (int t = 0; t < 10000; ++t) {
    Vec<Complex> x = rng.complex_vector(4);
    Vec<Complex> y;
    for (const auto& q : p.quadrics) y.push_back(q.cast<Complex>()(x));
    y = sup_normalized(y);
    double g = 0;
    for (const auto& d : grad) g = std::max(g, std::abs(d(y)));
    smallest = std::min(smallest, g);
  }
  EXPECT_GT(smallest, 1e-6);
}

TEST(PhiL, RejectsCoplanarBase) {
  std::array<Vec<Rational>, 5> bad = {Vec<Rational>{1, 0, 0, 0}, Vec<Rational>{0, 1, 0, 0}, Vec<Rational>{1, 1, 0, 0}, Vec<Rational>{0, 0, 1, 0},
                                      Vec<Rational>{0, 0, 0, 1}};
  EXPECT_THROW(build_phi_L(bad), DegenerateInput);
}

TEST(TwistedCubic, KnownCurve) {
  auto pt = [](Rational t) { return Vec<Rational>{1, t, t * t, t * t * t}; };
  std::array<Vec<Rational>, 5> base{pt(0), pt(1), pt(-1), pt(2), pt(Rational(1, 2))};
  Vec<Rational> x = pt(3);
  auto s = twisted_cubic_sample(base, x, Vec<Rational>{1, 2, -3, 5});
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_EQ(s.rejected, 1);
  for (const auto& c : s.points) {
    EXPECT_LE(std::abs(c[0] * c[2] - c[1] * c[1]), 1e-10);
    EXPECT_LE(std::abs(c[1] * c[3] - c[2] * c[2]), 1e-10);
    EXPECT_LE(std::abs(c[0] * c[3] - c[1] * c[2]), 1e-10);
  }
}

TEST(TwistedCubic, GenericPointsAndProbeGuard) {
  const auto& p = phi();
  Rng rng(13);
  int sampled = 0;
  for (int t = 0; t < 40 && sampled < 10; ++t) {
    auto x = rng.rational_vector(4);
    if (sgn(x[0] * x[1] * x[2] * x[3]) == 0 || x[0] == x[1] || x[0] == x[2] || x[0] == x[3] || x[1] == x[2] || x[1] == x[3] || x[2] == x[3]) {
      EXPECT_THROW(twisted_cubic_sample(p.base, x, Vec<Rational>{1, 2, 3, 5}), DegenerateInput);
      continue;
    }
    Vec<Rational> probe;
    for (int i = 0; i < 4; ++i) probe.push_back(Rational(rng.nonzero_integer(9)));
    bool avoids = sgn(dot(probe, x)) != 0;
    for (const auto& b : p.base) avoids = avoids && sgn(dot(probe, b)) != 0;
    if (!avoids) continue;
    auto s = twisted_cubic_sample(p.base, x, probe);
    EXPECT_EQ(s.points.size(), 3u);
    EXPECT_LE(s.residual, 1e-10);
    ++sampled;
  }
  EXPECT_EQ(sampled, 10);
  Vec<Rational> through_p1{0, 1, 1, 1};  // vanishes at (1,0,0,0)
  EXPECT_THROW(twisted_cubic_sample(p.base, Vec<Rational>{1, 2, 3, 5}, through_p1), DegenerateInput);
}
