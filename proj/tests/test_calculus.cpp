#include <cmath>

#include <gtest/gtest.h>

#include "closefn/calculus.hpp"
#include "closefn/checks.hpp"
#include "closefn/oracle.hpp"
#include "test_support.hpp"

using namespace closefn;

namespace {

Closeness make(double e, double d) { return Closeness::make(e, d, Rule::oracle); }

}  // namespace

TEST(Calculus, Reflexive) {
  const auto r = reflexive();
  EXPECT_EQ(r.epsilon, 0.0);
  EXPECT_EQ(r.delta, 0.0);
  const auto w = weaken(r, 1.0, 1.0);
  EXPECT_EQ(w.epsilon, 1.0);
  EXPECT_EQ(w.delta, 1.0);
  const auto c = make(0.3, 0.4);
  const auto t = transitive(r, c);
  EXPECT_EQ(t.epsilon, 0.3);
  EXPECT_EQ(t.delta, 0.4);
}

TEST(Calculus, Weaken) {
  const auto c = make(0.1, 0.2);
  const auto same = weaken(c, 0.1, 0.2);
  EXPECT_EQ(same.epsilon, 0.1);
  EXPECT_EQ(same.delta, 0.2);
  const auto up = weaken(c, 0.5, 0.2);
  EXPECT_EQ(up.epsilon, 0.5);
  EXPECT_EQ(up.delta, 0.2);
  try {
    weaken(c, 0.05, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WeakeningViolation);
  }
  EXPECT_EQ(up.chain, "weaken(oracle)");
}

TEST(Calculus, SymmetricAndShiftPreserveValues) {
  for (const auto& c : {make(0.0, 0.0), make(0.1, 0.2), make(3.0, 7.5)}) {
    const auto s = symmetric(c);
    EXPECT_EQ(s.epsilon, c.epsilon);
    EXPECT_EQ(s.delta, c.delta);
    EXPECT_TRUE(s.roles_swapped);
    EXPECT_FALSE(symmetric(s).roles_swapped);
    const auto h = shift(c);
    EXPECT_EQ(h.epsilon, c.epsilon);
    EXPECT_EQ(h.delta, c.delta);
  }
}

TEST(Calculus, Transitive) {
  const auto t = transitive(make(std::log(2.0), 0.1), make(std::log(2.0), 0.2));
  EXPECT_DOUBLE_EQ(t.epsilon, std::log(4.0));
  EXPECT_DOUBLE_EQ(t.delta, 0.3);
  EXPECT_EQ(t.chain, "transitive(oracle,oracle)");
  try {
    transitive(make(30.0, 0.0), make(30.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EpsilonOverflow);
  }
}

TEST(Calculus, Average) {
  const double e = std::log(2.0);
  const auto a = average({make(e, 0.1), make(e, 0.1)}, WeightVector({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(a.epsilon, e);
  EXPECT_NEAR(a.delta, 0.3, 1e-15);
  const auto one = average({make(0.7, 0.0)}, WeightVector({1.0}));
  EXPECT_EQ(one.epsilon, 0.7);
  EXPECT_EQ(one.delta, 0.0);
  // heterogeneous inputs are weakened to the maxima first
  const auto h = average({make(0.2, 0.5), make(0.4, 0.1)}, WeightVector({0.3, 0.7}));
  EXPECT_EQ(h.epsilon, 0.4);
  EXPECT_NEAR(h.delta, (std::exp(0.4) + 1.0) * 0.5, 1e-15);
}

TEST(Calculus, WeightVectorInvariants) {
  auto code = [](std::vector<double> w) {
    try {
      WeightVector v(std::move(w));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code({}), ErrorCode::InvalidWeights);
  EXPECT_EQ(code({0.5, 0.6}), ErrorCode::InvalidWeights);
  EXPECT_EQ(code({1.5, -0.5}), ErrorCode::InvalidWeights);
  EXPECT_NO_THROW(WeightVector({0.25, 0.25, 0.5}));
  EXPECT_THROW(average({make(0.1, 0.1)}, WeightVector({0.5, 0.5})), Error);
}

TEST(Calculus, ShiftLeavesOracleBitIdentical) {
  const BoxDomain dom = BoxDomain::interval(-1.0, 1.0);
  const Grid grid = Grid::make_default(dom);
  const auto f = make_huber(0.1, {0.3}, dom), g = make_scaled_abs(1.5, -0.2, dom);
  const double base = min_delta(f, g, 0.4, grid);
  EXPECT_EQ(min_delta(make_shifted(f, 37.25), make_shifted(g, -91.5), 0.4, grid), base);
  EXPECT_EQ(min_delta(g, f, 0.4, grid), base);
}

TEST(Calculus, RandomizedTrialsHold) {
  const BoxDomain dom = BoxDomain::interval(-1.0, 1.0);
  const Grid grid(dom, {513});
  const auto trials = calculus_trials(5, 60, dom, grid);
  ASSERT_EQ(trials.size(), 240u);
  for (const auto& t : trials)
    EXPECT_TRUE(t.holds) << t.trial << " " << to_string(t.rule) << " " << t.delta << " vs " << t.oracle_delta;
  const auto again = calculus_trials(5, 60, dom, grid);
  for (std::size_t i = 0; i < trials.size(); ++i) EXPECT_EQ(trials[i].oracle_delta, again[i].oracle_delta);
}

TEST(Calculus, TransitiveMatchesLiteralCheck) {
  // The composed certificate holds under the literal definition too.
  const BoxDomain dom = BoxDomain::interval(-1.0, 1.0);
  const Grid grid(dom, {257});
  const auto f = testref::square_around(0.3, dom);
  const auto g = make_scaled_abs(2.0, 0.1, dom);
  const auto h = make_huber(0.2, {-0.4}, dom);
  const auto pf = gap_profile(f, grid), pg = gap_profile(g, grid), ph = gap_profile(h, grid);
  const auto t = transitive(oracle_closeness(pf, pg, 0.5), oracle_closeness(pg, ph, 0.25));
  EXPECT_TRUE(testref::close_literal(testref::gaps(f, grid), testref::gaps(h, grid), t.epsilon,
                                     t.delta * (1.0 + 1e-12)));
}
