#include <cmath>

#include <gtest/gtest.h>

#include "closefn/erm.hpp"

using namespace closefn;

namespace {

const BoxDomain kUnit = BoxDomain::interval(-1.0, 1.0);

ERMConfig discrete_config(LossKind kind, std::vector<std::vector<double>> atoms, std::vector<double> probs) {
  Distribution d;
  d.kind = Distribution::Kind::discrete;
  d.atoms = std::move(atoms);
  d.probs = std::move(probs);
  return ERMConfig{kind, d, {8, 32}, 10, 3, 0.0, Grid(kUnit, {513})};
}

// Composite Simpson on [lo, hi] of x^k times the normal density.
double normal_moment(int k, double mu, double sd, double lo, double hi) {
  const int n = 20000;
  const double h = (hi - lo) / n;
  auto f = [&](double x) { return std::pow(x, k) * std::exp(-0.5 * (x - mu) * (x - mu) / (sd * sd)); };
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Erm, TruncatedNormalMomentsMatchQuadrature) {
  const double z = normal_moment(0, 0.1, 0.5, -1.0, 1.0);
  const auto m = erm_detail::trunc_normal_moments(0.1, 0.5, -1.0, 1.0);
  EXPECT_NEAR(m.mean, normal_moment(1, 0.1, 0.5, -1.0, 1.0) / z, 1e-10);
  EXPECT_NEAR(m.second, normal_moment(2, 0.1, 0.5, -1.0, 1.0) / z, 1e-10);
}

TEST(Erm, QuantileTableIsSortedInsideSupport) {
  const auto q = erm_detail::trunc_normal_table(0.1, 0.5, -1.0, 1.0, 1000);
  ASSERT_EQ(q.size(), 1000u);
  EXPECT_TRUE(std::is_sorted(q.begin(), q.end()));
  EXPECT_GT(q.front(), -1.0);
  EXPECT_LT(q.back(), 1.0);
}

TEST(Erm, SquaredPopulationIsBiasVariance) {
  // mean 0.3, variance 0.04
  const auto cfg = discrete_config(LossKind::squared, {{0.1}, {0.5}}, {0.5, 0.5});
  const auto F = population_loss(cfg);
  for (double t : {-1.0, 0.0, 0.3, 0.9}) EXPECT_NEAR(F.evaluate(std::vector<double>{t}), (t - 0.3) * (t - 0.3) + 0.04, 1e-14);
  EXPECT_EQ(*F.regularity().rho, 2.0);
  EXPECT_EQ(*F.regularity().smooth_L, 2.0);
}

TEST(Erm, AbsolutePopulationIsFlatBetweenAtoms) {
  const auto cfg = discrete_config(LossKind::absolute, {{-0.5}, {0.5}}, {0.5, 0.5});
  const auto F = population_loss(cfg);
  for (double t : {-0.5, -0.1, 0.0, 0.5}) EXPECT_NEAR(F.evaluate(std::vector<double>{t}), 0.5, 1e-15);
  EXPECT_NEAR(F.evaluate(std::vector<double>{1.0}), 0.5 * 1.5 + 0.5 * 0.5, 1e-15);
}

TEST(Erm, PointMassAndSingleSample) {
  const auto cfg = discrete_config(LossKind::squared, {{0.3}}, {1.0});
  const auto F = population_loss(cfg);
  EXPECT_NEAR(F.evaluate(std::vector<double>{-0.7}), 1.0, 1e-14);
  const auto fn = empirical_loss_from_samples(LossKind::squared, {{0.25}}, kUnit);
  EXPECT_NEAR(fn.evaluate(std::vector<double>{0.75}), 0.25, 1e-14);
}

TEST(Erm, EmpiricalLossDeterministic) {
  const auto cfg = default_erm_config(LossKind::absolute);
  const auto a = empirical_loss(cfg, 100, 9), b = empirical_loss(cfg, 100, 9);
  for (double t : {-0.4, 0.0, 0.8}) EXPECT_EQ(a.evaluate(std::vector<double>{t}), b.evaluate(std::vector<double>{t}));
}

TEST(Erm, RateExperimentDeterministicAndShaped) {
  auto cfg = default_erm_config(LossKind::squared);
  cfg.n_list = {64, 256, 1024};
  cfg.replications = 10;
  cfg.grid = Grid(kUnit, {513});
  const auto r1 = rate_experiment(cfg), r2 = rate_experiment(cfg);
  ASSERT_EQ(r1.per_n.size(), 3u);
  ASSERT_EQ(r1.records.size(), 30u);
  EXPECT_EQ(r1.slope, r2.slope);
  for (std::size_t i = 0; i < r1.records.size(); ++i) EXPECT_EQ(r1.records[i].delta_hat, r2.records[i].delta_hat);
  EXPECT_EQ(r1.records[0].n, 64u);
  EXPECT_EQ(r1.records[10].n, 256u);
  for (const auto& p : r1.per_n) {
    EXPECT_GE(p.q90_delta, p.median_delta);
    EXPECT_GE(p.stderr_delta, 0.0);
  }
  EXPECT_LT(r1.slope, 0.0);
}

TEST(Erm, BoundHoldsAndZeroSlackFailsExactlyOnExcess) {
  auto cfg = default_erm_config(LossKind::absolute);
  cfg.n_list = {16, 64};
  cfg.replications = 20;
  cfg.grid = Grid(kUnit, {513});
  const auto r = rate_experiment(cfg);
  EXPECT_TRUE(excess_risk_bound_check(cfg, r).holds);
  // with no delta the bound reads excess <= e^eps * 0 at the ERM
  std::size_t positive = 0;
  for (const auto& rec : r.records) positive += rec.excess_risk > 0.0;
  ASSERT_GT(positive, 0u);
  EXPECT_EQ(excess_risk_bound_check(cfg, r, 0.0).violations, positive);
}

TEST(Erm, PointMassHasNoExcess) {
  const auto cfg = discrete_config(LossKind::squared, {{0.25}}, {1.0});
  const auto pF = gap_profile(population_loss(cfg), cfg.grid);
  const auto pn = gap_profile(empirical_loss(cfg, 1, 11), cfg.grid);
  EXPECT_EQ(pn.argmin, pF.argmin);
  EXPECT_NEAR(pF.gaps[pn.argmin], 0.0, 1e-15);
  EXPECT_NEAR(min_delta(pn, pF, 0.0), 0.0, 1e-14);
}

TEST(Erm, LogLogFitRecoversPowerLaw) {
  std::vector<double> x, y;
  for (double n = 64; n <= 16384; n *= 2) {
    x.push_back(n);
    y.push_back(3.0 * std::pow(n, -0.5));
  }
  const auto [slope, icpt] = fit_loglog(x, y);
  EXPECT_NEAR(slope, -0.5, 1e-12);
  EXPECT_NEAR(icpt, std::log(3.0), 1e-10);
}

TEST(Erm, DimensionMismatch) {
  auto cfg = discrete_config(LossKind::squared, {{0.1, 0.2}}, {1.0});
  try {
    population_loss(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedCombination);
  }
}
