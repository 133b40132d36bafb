#include <cmath>

#include <gtest/gtest.h>

#include "closefn/domain.hpp"
#include "closefn/rng.hpp"

using namespace closefn;

TEST(BoxDomain, RejectsBadShapes) {
  EXPECT_THROW(BoxDomain({}, {}), Error);
  EXPECT_THROW(BoxDomain({0, 0, 0, 0}, {1, 1, 1, 1}), Error);
  EXPECT_THROW(BoxDomain({1.0}, {0.0}), Error);
  EXPECT_THROW(BoxDomain({0.0}, {1.0, 2.0}), Error);
  EXPECT_NO_THROW(BoxDomain({0, 0, 0}, {1, 1, 1}));
}

TEST(BoxDomain, Diameter) {
  EXPECT_DOUBLE_EQ(BoxDomain::interval(-1.0, 1.0).diameter(), 2.0);
  EXPECT_DOUBLE_EQ(BoxDomain({0.0, 0.0}, {3.0, 4.0}).diameter(), 5.0);
  EXPECT_EQ(BoxDomain({0.5, 0.5}, {0.5, 0.5}).diameter(), 0.0);
}

TEST(BoxDomain, ContainsAndProject) {
  const auto d = BoxDomain::cube(2, -1.0, 1.0);
  EXPECT_TRUE(d.contains(std::vector<double>{1.0 + 1e-13, -1.0}));
  EXPECT_FALSE(d.contains(std::vector<double>{1.0 + 1e-9, 0.0}));
  const auto p = d.project(std::vector<double>{2.0, -0.5});
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], -0.5);
}

TEST(Grid, EndpointsAndCounts) {
  const Grid g = Grid::make_default(BoxDomain::interval(-1.0, 1.0));
  ASSERT_EQ(g.size(), 2049u);
  EXPECT_EQ(g.point(0)[0], -1.0);
  EXPECT_EQ(g.point(2048)[0], 1.0);
  EXPECT_EQ(g.point(1024)[0], 0.0);
  EXPECT_EQ(Grid::make_default(BoxDomain::cube(2, 0, 1)).size(), 257u * 257u);
  EXPECT_EQ(Grid::make_default(BoxDomain::cube(3, 0, 1)).size(), 65u * 65u * 65u);
}

TEST(Grid, DegenerateAxis) {
  const BoxDomain d({0.0, 2.0}, {1.0, 2.0});
  EXPECT_THROW(Grid(d, {5, 5}), Error);
  const Grid g(d, {5, 1});
  EXPECT_EQ(g.size(), 5u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.point(i)[1], 2.0);
  EXPECT_THROW(Grid(BoxDomain::interval(0, 1), {1}), Error);
}

TEST(Grid, PointsInsideAndLexicographic) {
  const Grid g(BoxDomain({-1.0, 0.0}, {1.0, 3.0}), {3, 4});
  ASSERT_EQ(g.size(), 12u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_TRUE(g.domain().contains(g.point(i)));
  // first axis slowest
  EXPECT_EQ(g.point(0)[0], -1.0);
  EXPECT_EQ(g.point(1)[0], -1.0);
  EXPECT_EQ(g.point(1)[1], 1.0);
  EXPECT_EQ(g.point(4)[0], 0.0);
  EXPECT_EQ(g.point(11)[1], 3.0);
}

TEST(Grid, RefinedContainsCoarsePoints) {
  const Grid c(BoxDomain({-1.0, 0.0}, {1.0, 1.0}), {9, 5});
  const Grid f = c.refined();
  EXPECT_EQ(f.counts()[0], 17u);
  EXPECT_EQ(f.counts()[1], 9u);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(f.axis(0)[2 * k], c.axis(0)[k]);
  EXPECT_DOUBLE_EQ(f.cell_width(0), c.cell_width(0) / 2);
  EXPECT_DOUBLE_EQ(c.cell_diagonal(), std::hypot(0.25, 0.25));
}

TEST(Rng, DeterministicStreams) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.index(7), 7u);
  }
}
