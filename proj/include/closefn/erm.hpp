#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "closefn/domain.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"
#include "closefn/oracle.hpp"
#include "closefn/parallel.hpp"
#include "closefn/rng.hpp"

// Monte Carlo study of how close the empirical loss f_n is to the
// population loss F, and of the rate at which the oracle delta shrinks
// with the sample size.

namespace closefn {

enum class LossKind { absolute, squared };

inline std::string_view to_string(LossKind k) { return k == LossKind::absolute ? "absolute" : "squared"; }

// Either a finite set of atoms with probabilities, or a product of
// independent truncated gaussians. The truncated gaussian is sampled from
// an inverse-CDF table of midpoint quantiles.
struct Distribution {
  enum class Kind { discrete, truncated_gaussian };
  Kind kind = Kind::truncated_gaussian;

  std::vector<std::vector<double>> atoms;
  std::vector<double> probs;

  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> trunc_lower;
  std::vector<double> trunc_upper;
  std::size_t table_size = 10000;

  std::size_t dim() const { return kind == Kind::discrete ? (atoms.empty() ? 0 : atoms.front().size()) : mean.size(); }
};

struct ERMConfig {
  LossKind loss_kind = LossKind::squared;
  Distribution distribution;
  std::vector<std::size_t> n_list;
  std::size_t replications = 50;
  std::uint64_t seed = 42;
  double epsilon_report = 0.0;
  Grid grid;
};

// Defaults: d = 1, Z = [-1, 1], truncated N(0.1, 0.5^2), n = 64 ... 16384.
inline ERMConfig default_erm_config(LossKind kind) {
  Distribution dist;
  dist.kind = Distribution::Kind::truncated_gaussian;
  dist.mean = {0.1};
  dist.sd = {0.5};
  dist.trunc_lower = {-1.0};
  dist.trunc_upper = {1.0};
  ERMConfig cfg{kind, dist, {}, 50, 42, kind == LossKind::squared ? std::log(2.0) : 0.0,
                Grid::make_default(BoxDomain::interval(-1.0, 1.0))};
  for (std::size_t n = 64; n <= 16384; n *= 2) cfg.n_list.push_back(n);
  return cfg;
}

namespace erm_detail {

struct TruncNormalMoments {
  double mean;
  double second;
};

inline TruncNormalMoments trunc_normal_moments(double mu, double sd, double lo, double hi) {
  const boost::math::normal N;
  const double a = (lo - mu) / sd, b = (hi - mu) / sd;
  const double Z = boost::math::cdf(N, b) - boost::math::cdf(N, a);
  const double pa = boost::math::pdf(N, a), pb = boost::math::pdf(N, b);
  const double m = mu + sd * (pa - pb) / Z;
  const double var = sd * sd * (1.0 + (a * pa - b * pb) / Z - ((pa - pb) / Z) * ((pa - pb) / Z));
  return {m, var + m * m};
}

inline std::vector<double> trunc_normal_table(double mu, double sd, double lo, double hi, std::size_t size) {
  const boost::math::normal N;
  const double Fa = boost::math::cdf(N, (lo - mu) / sd), Fb = boost::math::cdf(N, (hi - mu) / sd);
  std::vector<double> q(size);
  for (std::size_t j = 0; j < size; ++j) {
    const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(size);
    q[j] = std::clamp(mu + sd * boost::math::quantile(N, Fa + u * (Fb - Fa)), lo, hi);
  }
  return q;
}

}  // namespace erm_detail

// Draws i.i.d. samples from a Distribution; deterministic given the Rng.
class Sampler {
 public:
  explicit Sampler(const Distribution& dist) : dist_(dist) {
    const std::size_t d = dist.dim();
    require(d >= 1, ErrorCode::InvalidArgument, "distribution has no dimension");
    if (dist.kind == Distribution::Kind::discrete) {
      require(!dist.atoms.empty() && dist.atoms.size() == dist.probs.size(), ErrorCode::InvalidArgument,
              "discrete distribution needs one probability per atom");
      double s = 0.0;
      cumulative_.reserve(dist.probs.size());
      for (std::size_t k = 0; k < dist.atoms.size(); ++k) {
        require(dist.atoms[k].size() == d, ErrorCode::InvalidArgument, "atoms must share a dimension");
        require(dist.probs[k] >= 0.0, ErrorCode::InvalidArgument, "probabilities must be >= 0");
        s += dist.probs[k];
        cumulative_.push_back(s);
      }
      require(std::abs(s - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "probabilities must sum to 1");
    } else {
      require(dist.sd.size() == d && dist.trunc_lower.size() == d && dist.trunc_upper.size() == d,
              ErrorCode::InvalidArgument, "truncated gaussian parameters must share a dimension");
      require(dist.table_size >= 2, ErrorCode::InvalidArgument, "quantile table too small");
      for (std::size_t i = 0; i < d; ++i) {
        require(dist.sd[i] > 0.0 && dist.trunc_lower[i] < dist.trunc_upper[i], ErrorCode::InvalidArgument,
                "truncated gaussian needs sd > 0 and lower < upper");
        tables_.push_back(erm_detail::trunc_normal_table(dist.mean[i], dist.sd[i], dist.trunc_lower[i],
                                                         dist.trunc_upper[i], dist.table_size));
      }
    }
  }

  std::vector<std::vector<double>> draw(Rng& rng, std::size_t n) const {
    std::vector<std::vector<double>> out(n);
    for (auto& z : out) {
      if (dist_.kind == Distribution::Kind::discrete) {
        const double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        z = dist_.atoms[static_cast<std::size_t>(it - cumulative_.begin())];
      } else {
        z.resize(tables_.size());
        for (std::size_t i = 0; i < tables_.size(); ++i) z[i] = tables_[i][rng.index(tables_[i].size())];
      }
    }
    return out;
  }

  const std::vector<std::vector<double>>& tables() const { return tables_; }

 private:
  Distribution dist_;
  std::vector<double> cumulative_;
  std::vector<std::vector<double>> tables_;
};

namespace erm_detail {

inline void validate(const ERMConfig& cfg) {
  const std::size_t d = cfg.grid.dim();
  require(d == 1 || d == 2, ErrorCode::InvalidArgument, "ERM harness supports d = 1 or d = 2");
  require(cfg.distribution.dim() == d, ErrorCode::InvalidArgument, "distribution dimension differs from grid");
  require(!cfg.n_list.empty() && cfg.n_list.front() >= 1, ErrorCode::InvalidArgument, "n_list must be nonempty, n >= 1");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    require(cfg.n_list[i - 1] < cfg.n_list[i], ErrorCode::InvalidArgument, "n_list must be ascending");
  require(cfg.replications >= 10, ErrorCode::InvalidArgument, "need at least 10 replications");
  require(cfg.epsilon_report >= 0.0 && cfg.epsilon_report <= kMaxEpsilon, ErrorCode::InvalidArgument,
          "epsilon_report must lie in [0, 50]");
}

// (1/n) sum ||x - z_i||^2 = ||x||^2 - 2 mean'x + second.
inline FunctionSpec squared_loss_average(const std::vector<double>& mean, double second, const BoxDomain& dom) {
  const std::size_t d = dom.dim();
  std::vector<double> A(d * d, 0.0), b(d);
  for (std::size_t i = 0; i < d; ++i) {
    A[i * d + i] = 2.0;
    b[i] = -2.0 * mean[i];
  }
  return make_quadratic(std::move(A), std::move(b), second, dom);
}

}  // namespace erm_detail

// Exact population loss F(x) = E l(x, z).
inline FunctionSpec population_loss(const ERMConfig& cfg) {
  const auto& dist = cfg.distribution;
  const auto& dom = cfg.grid.domain();
  const std::size_t d = dom.dim();
  require(dist.dim() == d, ErrorCode::UnsupportedCombination, "distribution dimension differs from domain");
  if (cfg.loss_kind == LossKind::squared) {
    std::vector<double> mean(d, 0.0);
    double second = 0.0;
    if (dist.kind == Distribution::Kind::discrete) {
      for (std::size_t k = 0; k < dist.atoms.size(); ++k)
        for (std::size_t i = 0; i < d; ++i) {
          mean[i] += dist.probs[k] * dist.atoms[k][i];
          second += dist.probs[k] * dist.atoms[k][i] * dist.atoms[k][i];
        }
    } else {
      for (std::size_t i = 0; i < d; ++i) {
        const auto m = erm_detail::trunc_normal_moments(dist.mean[i], dist.sd[i], dist.trunc_lower[i],
                                                        dist.trunc_upper[i]);
        mean[i] = m.mean;
        second += m.second;
      }
    }
    return erm_detail::squared_loss_average(mean, second, dom);
  }
  if (dist.kind == Distribution::Kind::discrete) return make_abs_sum(dist.atoms, dist.probs, dom);
  // The absolute-loss population is taken against the sampling table so
  // that sampling and population are mutually consistent.
  const Sampler sampler(dist);
  const auto& tables = sampler.tables();
  const std::size_t m = tables.front().size();
  std::vector<std::vector<double>> points(m, std::vector<double>(d));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < d; ++i) points[j][i] = tables[i][j];
  return make_abs_sum(std::move(points), std::vector<double>(m, 1.0 / static_cast<double>(m)), dom);
}

// f_n from given samples. The sample average of squared losses collapses
// to one quadratic; absolute losses become an abs_sum.
inline FunctionSpec empirical_loss_from_samples(LossKind kind, const std::vector<std::vector<double>>& z,
                                                const BoxDomain& dom) {
  require(!z.empty(), ErrorCode::InvalidArgument, "empirical loss needs n >= 1");
  const std::size_t d = dom.dim();
  const double inv = 1.0 / static_cast<double>(z.size());
  if (kind == LossKind::squared) {
    std::vector<double> mean(d, 0.0);
    double second = 0.0;
    for (const auto& s : z)
      for (std::size_t i = 0; i < d; ++i) {
        mean[i] += s[i];
        second += s[i] * s[i];
      }
    for (auto& m : mean) m *= inv;
    return erm_detail::squared_loss_average(mean, second * inv, dom);
  }
  return make_abs_sum(z, std::vector<double>(z.size(), inv), dom);
}

inline FunctionSpec empirical_loss(const ERMConfig& cfg, std::size_t n, std::uint64_t rep_seed) {
  require(n >= 1, ErrorCode::InvalidArgument, "empirical loss needs n >= 1");
  const Sampler sampler(cfg.distribution);
  Rng rng(rep_seed);
  return empirical_loss_from_samples(cfg.loss_kind, sampler.draw(rng, n), cfg.grid.domain());
}

inline std::uint64_t replication_seed(const ERMConfig& cfg, std::size_t n, std::size_t rep) {
  return derive_seed(cfg.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
}

struct RateRecord {
  std::size_t n = 0;
  std::size_t replication = 0;
  double delta_hat = 0.0;
  double excess_risk = 0.0;
  double empirical_gap_at_erm = 0.0;  // gap of f_n at its own grid minimizer (0)
  std::uint64_t seed = 0;
};

struct RatePoint {
  std::size_t n = 0;
  double mean_delta = 0.0;
  double stderr_delta = 0.0;
  double median_delta = 0.0;
  double q90_delta = 0.0;
  double mean_excess = 0.0;
};

struct RateResult {
  std::vector<RatePoint> per_n;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<RateRecord> records;  // ordered by (n, replication)
};

namespace erm_detail {

inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t k = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(k);
  return k + 1 < v.size() ? v[k] * (1.0 - frac) + v[k + 1] * frac : v[k];
}

}  // namespace erm_detail

// Least-squares fit of log y against log x.
inline std::pair<double, double> fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "need at least two points to fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::InvalidArgument, "log-log fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {slope, (sy - slope * sx) / m};
}

inline RateResult rate_experiment(const ERMConfig& cfg) {
  erm_detail::validate(cfg);
  const FunctionSpec F = population_loss(cfg);
  const GapProfile pF = gap_profile(F, cfg.grid);
  const Sampler sampler(cfg.distribution);

  RateResult result;
  result.records.resize(cfg.n_list.size() * cfg.replications);
  parallel_for(
      result.records.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t task = begin; task < end; ++task) {
          const std::size_t n = cfg.n_list[task / cfg.replications];
          const std::size_t rep = task % cfg.replications;
          RateRecord rec;
          rec.n = n;
          rec.replication = rep;
          rec.seed = replication_seed(cfg, n, rep);
          Rng rng(rec.seed);
          const FunctionSpec fn = empirical_loss_from_samples(cfg.loss_kind, sampler.draw(rng, n), cfg.grid.domain());
          const GapProfile pn = gap_profile(fn, cfg.grid);
          rec.delta_hat = min_delta(pn, pF, cfg.epsilon_report);
          rec.excess_risk = pF.gaps[pn.argmin];
          rec.empirical_gap_at_erm = pn.gaps[pn.argmin];
          result.records[task] = rec;
        }
      },
      1);

  std::vector<double> ns, means;
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    std::vector<double> deltas;
    double excess = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const auto& rec = result.records[k * cfg.replications + r];
      deltas.push_back(rec.delta_hat);
      excess += rec.excess_risk;
    }
    RatePoint pt;
    pt.n = cfg.n_list[k];
    const double m = static_cast<double>(deltas.size());
    pt.mean_delta = std::accumulate(deltas.begin(), deltas.end(), 0.0) / m;
    double ss = 0.0;
    for (double v : deltas) ss += (v - pt.mean_delta) * (v - pt.mean_delta);
    pt.stderr_delta = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    pt.median_delta = erm_detail::quantile(deltas, 0.5);
    pt.q90_delta = erm_detail::quantile(deltas, 0.9);
    pt.mean_excess = excess / m;
    result.per_n.push_back(pt);
    ns.push_back(static_cast<double>(pt.n));
    means.push_back(pt.mean_delta);
  }
  std::tie(result.slope, result.intercept) = fit_loglog(ns, means);
  return result;
}

struct BoundCheck {
  bool holds = true;
  std::size_t violations = 0;
  std::size_t checked = 0;
};

// Plugs the grid ERM into the first closeness inequality:
// F(x_n) - min F <= e^eps (f_n(x_n) - min f_n + scale * delta_hat).
// `delta_scale` < 1 probes how tight the oracle delta is.
inline BoundCheck excess_risk_bound_check(const ERMConfig& cfg, const RateResult& result, double delta_scale = 1.0) {
  BoundCheck out;
  const double grow = std::exp(cfg.epsilon_report);
  for (const auto& rec : result.records) {
    ++out.checked;
    if (rec.excess_risk > grow * (rec.empirical_gap_at_erm + delta_scale * rec.delta_hat)) ++out.violations;
  }
  out.holds = out.violations == 0;
  return out;
}

inline BoundCheck excess_risk_bound_check(const ERMConfig& cfg, double delta_scale = 1.0) {
  return excess_risk_bound_check(cfg, rate_experiment(cfg), delta_scale);
}

}  // namespace closefn
