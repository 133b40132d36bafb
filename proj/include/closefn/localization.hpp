#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "closefn/error.hpp"
#include "closefn/parallel.hpp"
#include "closefn/rng.hpp"
#include "closefn/serialize.hpp"

// Finite-class local Rademacher analysis: noise condition, localized
// complexity envelope, its fixed point, and the resulting closeness bound
// between empirical and population risk.

namespace closefn {

// Discrete learning problem. Rows of `loss` are hypotheses; the first
// |hypotheses| rows form the restricted class, and an optional extra row
// holds a comparator h* outside that class.
struct FiniteClassProblem {
  std::vector<std::string> hypotheses;
  std::vector<std::string> outcomes;
  std::vector<double> probs;
  std::vector<std::vector<double>> loss;  // loss[h][z]
  std::size_t h_star_row = 0;
  double b = 1.0;
  double alpha = 1.0;
  double gamma = 0.05;
  std::size_t n = 100;

  std::size_t class_size() const { return hypotheses.size(); }
  std::size_t outcome_count() const { return outcomes.size(); }

  void validate() const {
    require(!hypotheses.empty(), ErrorCode::InvalidArgument, "problem has no hypotheses");
    require(!outcomes.empty() && outcomes.size() == probs.size(), ErrorCode::InvalidArgument,
            "each outcome needs one probability");
    require(loss.size() == hypotheses.size() || loss.size() == hypotheses.size() + 1, ErrorCode::InvalidArgument,
            "loss needs one row per hypothesis, plus at most one extra comparator row");
    require(h_star_row < loss.size(), ErrorCode::InvalidArgument, "h_star_row out of range");
    require(b > 0.0 && std::isfinite(b), ErrorCode::InvalidArgument, "b must be > 0");
    require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    require(gamma > 0.0 && gamma < 1.0, ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    double s = 0.0;
    for (double p : probs) {
      require(p >= 0.0 && std::isfinite(p), ErrorCode::InvalidArgument, "probabilities must be >= 0");
      s += p;
    }
    require(std::abs(s - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "probabilities must sum to 1");
    for (const auto& row : loss) {
      require(row.size() == outcomes.size(), ErrorCode::InvalidArgument, "loss row length differs from outcomes");
      for (double v : row)
        require(std::isfinite(v) && std::abs(v) <= b, ErrorCode::InvalidArgument, "loss entries must satisfy |l| <= b");
    }
  }
};

inline FiniteClassProblem problem_from_json(const Json& j) {
  try {
    FiniteClassProblem p;
    for (const auto& h : field(j, "hypotheses"))
      p.hypotheses.push_back(h.is_string() ? h.get<std::string>() : h.dump());
    for (const auto& o : field(j, "outcomes")) {
      const auto& z = field(o, "z", "outcome");
      p.outcomes.push_back(z.is_string() ? z.get<std::string>() : z.dump());
      p.probs.push_back(parse_real(field(o, "p", "outcome"), "outcome p"));
    }
    p.loss = parse_real_matrix(field(j, "loss"), "loss");
    p.h_star_row = field(j, "h_star_row").get<std::size_t>();
    p.b = parse_real(field(j, "b"), "b");
    p.alpha = parse_real(field(j, "alpha"), "alpha");
    p.gamma = parse_real(field(j, "gamma"), "gamma");
    p.n = field(j, "n").get<std::size_t>();
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("finite class problem: ") + e.what());
  }
}

inline Json problem_to_json(const FiniteClassProblem& p) {
  Json outcomes = Json::array();
  for (std::size_t k = 0; k < p.outcomes.size(); ++k) outcomes.push_back({{"z", p.outcomes[k]}, {"p", p.probs[k]}});
  return {{"hypotheses", p.hypotheses}, {"outcomes", outcomes}, {"loss", p.loss}, {"h_star_row", p.h_star_row},
          {"b", p.b},   {"alpha", p.alpha},   {"gamma", p.gamma}, {"n", p.n}};
}

struct PopulationQuantities {
  std::vector<double> risk;           // L(h) for every loss row
  std::vector<double> second_moment;  // E[(l_h - l_h*)^2] for every loss row
  std::size_t h_bar = 0;              // minimizer over the restricted class
  std::size_t h_star = 0;             // minimizer over all rows
};

inline PopulationQuantities population_quantities(const FiniteClassProblem& p) {
  p.validate();
  PopulationQuantities q;
  const std::size_t rows = p.loss.size();
  q.risk.assign(rows, 0.0);
  for (std::size_t h = 0; h < rows; ++h)
    for (std::size_t z = 0; z < p.outcome_count(); ++z) q.risk[h] += p.probs[z] * p.loss[h][z];
  for (std::size_t h = 1; h < rows; ++h) {
    if (h < p.class_size() && q.risk[h] < q.risk[q.h_bar]) q.h_bar = h;
    if (q.risk[h] < q.risk[q.h_star]) q.h_star = h;
  }
  q.second_moment.assign(rows, 0.0);
  for (std::size_t h = 0; h < rows; ++h)
    for (std::size_t z = 0; z < p.outcome_count(); ++z) {
      const double d = p.loss[h][z] - p.loss[p.h_star_row][z];
      q.second_moment[h] += p.probs[z] * d * d;
    }
  return q;
}

struct NoiseCertificate {
  std::size_t h_star = 0;
  double C = 0.0;
  double alpha = 0.0;
  std::size_t argmax = 0;              // hypothesis attaining C
  std::vector<std::size_t> violations;  // equal risk, positive second moment
};

// Smallest C with E[(l_h - l_h*)^2] <= C (L(h) - L(h*))^alpha over the
// restricted class.
inline NoiseCertificate verify_noise_condition(const FiniteClassProblem& p, std::size_t h_star, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  require(h_star < p.loss.size(), ErrorCode::InvalidArgument, "h_star out of range");
  FiniteClassProblem q = p;
  q.h_star_row = h_star;
  const PopulationQuantities pq = population_quantities(q);
  NoiseCertificate cert;
  cert.h_star = h_star;
  cert.alpha = alpha;
  const double base = pq.risk[h_star];
  for (std::size_t h = 0; h < p.class_size(); ++h) {
    const double gap = pq.risk[h] - base;
    require(gap >= 0.0, ErrorCode::NoiseViolation,
            "hypothesis '" + p.hypotheses[h] + "' has lower risk than the comparator");
    const double m = pq.second_moment[h];
    if (gap > 0.0 || alpha == 0.0) {
      const double c = m / std::pow(gap, alpha);
      if (c > cert.C) {
        cert.C = c;
        cert.argmax = h;
      }
    } else if (m > 0.0) {
      cert.violations.push_back(h);
    }
  }
  return cert;
}

// A star-hull member alpha * (l_h - l_h*), stored by its values over the
// outcomes.
struct StarMember {
  std::size_t h = 0;
  double scale = 0.0;
  std::vector<double> values;
  double second_moment = 0.0;
};

inline constexpr std::size_t kStarGridSize = 101;

inline double star_scale(std::size_t k) { return static_cast<double>(k) / static_cast<double>(kStarGridSize - 1); }

inline std::vector<StarMember> build_star_hull(const FiniteClassProblem& p) {
  const PopulationQuantities pq = population_quantities(p);
  std::vector<StarMember> out;
  out.reserve(kStarGridSize * p.class_size());
  for (std::size_t h = 0; h < p.class_size(); ++h)
    for (std::size_t k = 0; k < kStarGridSize; ++k) {
      StarMember m;
      m.h = h;
      m.scale = star_scale(k);
      m.values.resize(p.outcome_count());
      for (std::size_t z = 0; z < p.outcome_count(); ++z)
        m.values[z] = m.scale * (p.loss[h][z] - p.loss[p.h_star_row][z]);
      m.second_moment = m.scale * m.scale * pq.second_moment[h];
      out.push_back(std::move(m));
    }
  return out;
}

namespace loc_detail {

inline std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> c(probs.size());
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) c[k] = (s += probs[k]);
  return c;
}

inline std::size_t draw_outcome(Rng& rng, const std::vector<double>& cum) {
  const double u = rng.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
}

// sum_i sigma_i over the samples landing on each outcome.
inline std::vector<double> signed_counts(Rng& rng, const std::vector<double>& cum, std::size_t n) {
  std::vector<double> s(cum.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t z = draw_outcome(rng, cum);
    s[z] += rng.sign();
  }
  return s;
}

inline std::uint64_t draw_seed(std::uint64_t seed, std::size_t draw) { return derive_seed(seed, {draw}); }

}  // namespace loc_detail

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t draws = 0;
};

// E sup_{g in subset} (1/n) sum sigma_i g(z_i) by Monte Carlo.
inline MonteCarloEstimate rademacher_estimate(const FiniteClassProblem& p, const std::vector<StarMember>& subset,
                                              std::size_t n, std::size_t mc_draws, std::uint64_t seed) {
  require(!subset.empty(), ErrorCode::EmptySubset, "Rademacher estimate over an empty subset");
  require(mc_draws >= 1 && n >= 1, ErrorCode::InvalidArgument, "need mc_draws >= 1 and n >= 1");
  const auto cum = loc_detail::cumulative(p.probs);
  std::vector<double> sups(mc_draws);
  parallel_for(
      mc_draws,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t d = begin; d < end; ++d) {
          Rng rng(loc_detail::draw_seed(seed, d));
          const auto s = loc_detail::signed_counts(rng, cum, n);
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& m : subset) {
            double v = 0.0;
            for (std::size_t z = 0; z < s.size(); ++z) v += s[z] * m.values[z];
            best = std::max(best, v / static_cast<double>(n));
          }
          sups[d] = best;
        }
      },
      1);
  MonteCarloEstimate est;
  est.draws = mc_draws;
  for (double v : sups) est.mean += v;
  est.mean /= static_cast<double>(mc_draws);
  if (mc_draws > 1) {
    double ss = 0.0;
    for (double v : sups) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(mc_draws - 1) / static_cast<double>(mc_draws));
  }
  return est;
}

// Sub-root majorant of the localized complexity on a grid of radii.
// Between grid points psi(r)/r is interpolated linearly; below the grid the
// ratio is held constant, above it psi is held constant.
class SubRootEnvelope {
 public:
  SubRootEnvelope() = default;
  SubRootEnvelope(std::vector<double> r, std::vector<double> psi) : r_(std::move(r)), psi_(std::move(psi)) {
    require(!r_.empty() && r_.size() == psi_.size(), ErrorCode::InvalidArgument,
            "envelope needs one value per grid radius");
    for (std::size_t i = 0; i < r_.size(); ++i) {
      require(r_[i] > 0.0 && (i == 0 || r_[i - 1] < r_[i]), ErrorCode::InvalidArgument,
              "envelope radii must be positive and ascending");
      require(psi_[i] >= 0.0 && std::isfinite(psi_[i]), ErrorCode::InvalidArgument, "envelope values must be >= 0");
    }
  }

  // Minimal sub-root majorant of raw values.
  static SubRootEnvelope from_raw(const std::vector<double>& r, const std::vector<double>& raw) {
    require(r.size() == raw.size() && !r.empty(), ErrorCode::InvalidArgument, "raw values need one radius each");
    const std::size_t m = r.size();
    std::vector<double> psi(m);
    double ratio = 0.0;
    for (std::size_t k = m; k-- > 0;) {
      ratio = std::max(ratio, std::max(raw[k], 0.0) / r[k]);
      psi[k] = r[k] * ratio;
    }
    for (std::size_t k = 1; k < m; ++k) psi[k] = std::max(psi[k], psi[k - 1]);
    return SubRootEnvelope(r, std::move(psi));
  }

  const std::vector<double>& r_grid() const { return r_; }
  const std::vector<double>& psi_values() const { return psi_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }

  double operator()(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= r_.back()) return psi_.back();
    if (u <= r_.front()) return u * psi_.front() / r_.front();
    const auto it = std::upper_bound(r_.begin(), r_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - r_.begin());
    const double r0 = r_[k - 1], r1 = r_[k];
    const double q0 = psi_[k - 1] / r0, q1 = psi_[k] / r1;
    const double t = (u - r0) / (r1 - r0);
    return u * (q0 + t * (q1 - q0));
  }

  bool is_nondecreasing() const {
    for (std::size_t k = 1; k < psi_.size(); ++k)
      if (psi_[k] < psi_[k - 1]) return false;
    return true;
  }

  // Up to rounding of psi = r * ratio.
  bool ratio_nonincreasing() const {
    for (std::size_t k = 1; k < psi_.size(); ++k)
      if (psi_[k] / r_[k] > (psi_[k - 1] / r_[k - 1]) * (1.0 + 1e-12)) return false;
    return true;
  }

 private:
  std::vector<double> r_;
  std::vector<double> psi_;
};

// 64 log-spaced radii over [1e-4 * 2b, 2b].
inline std::vector<double> default_r_grid(double b) {
  const std::size_t m = 64;
  const double lo = std::log(1e-4 * 2.0 * b), hi = std::log(2.0 * b);
  std::vector<double> r(m);
  for (std::size_t k = 0; k < m; ++k)
    r[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(m - 1));
  r.front() = 1e-4 * 2.0 * b;
  r.back() = 2.0 * b;
  return r;
}

struct PsiBuild {
  std::vector<double> raw;
  SubRootEnvelope envelope;
};

// Localized complexity at each radius. For a fixed sign/sample draw the sup
// over {a g_h : a^2 E g_h^2 <= r^2} is attained at the largest admissible
// grid scale when the correlation is positive and at the zero member
// otherwise, so all radii share the draws of one pass.
inline PsiBuild build_psi(const FiniteClassProblem& p, const std::vector<double>& r_grid, std::size_t n,
                          std::size_t mc_draws, std::uint64_t seed) {
  require(!r_grid.empty(), ErrorCode::InvalidArgument, "r_grid is empty");
  for (std::size_t k = 0; k < r_grid.size(); ++k)
    require(r_grid[k] > 0.0 && (k == 0 || r_grid[k - 1] < r_grid[k]), ErrorCode::InvalidArgument,
            "r_grid must be positive and ascending");
  require(mc_draws >= 1 && n >= 1, ErrorCode::InvalidArgument, "need mc_draws >= 1 and n >= 1");
  const PopulationQuantities pq = population_quantities(p);
  const std::size_t H = p.class_size(), R = r_grid.size();

  // Largest admissible scale per (h, r), matching the member set of the
  // star hull.
  std::vector<double> top(H * R, 0.0);
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t k = 0; k < R; ++k) {
      const double r2 = r_grid[k] * r_grid[k];
      for (std::size_t j = kStarGridSize; j-- > 0;) {
        const double a = star_scale(j);
        if (a * a * pq.second_moment[h] <= r2) {
          top[h * R + k] = a;
          break;
        }
      }
    }

  std::vector<std::vector<double>> diff(H, std::vector<double>(p.outcome_count()));
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t z = 0; z < p.outcome_count(); ++z) diff[h][z] = p.loss[h][z] - p.loss[p.h_star_row][z];

  const auto cum = loc_detail::cumulative(p.probs);
  std::vector<double> per_draw(mc_draws * R, 0.0);
  parallel_for(
      mc_draws,
      [&](std::size_t begin, std::size_t end) {
        std::vector<double> corr(H);
        for (std::size_t d = begin; d < end; ++d) {
          Rng rng(loc_detail::draw_seed(seed, d));
          const auto s = loc_detail::signed_counts(rng, cum, n);
          for (std::size_t h = 0; h < H; ++h) {
            double v = 0.0;
            for (std::size_t z = 0; z < s.size(); ++z) v += s[z] * diff[h][z];
            corr[h] = v / static_cast<double>(n);
          }
          for (std::size_t k = 0; k < R; ++k) {
            double best = 0.0;
            for (std::size_t h = 0; h < H; ++h)
              if (corr[h] > 0.0) best = std::max(best, top[h * R + k] * corr[h]);
            per_draw[d * R + k] = best;
          }
        }
      },
      1);

  PsiBuild out;
  out.raw.assign(R, 0.0);
  for (std::size_t d = 0; d < mc_draws; ++d)
    for (std::size_t k = 0; k < R; ++k) out.raw[k] += per_draw[d * R + k];
  for (auto& v : out.raw) v /= static_cast<double>(mc_draws);
  out.envelope = SubRootEnvelope::from_raw(r_grid, out.raw);
  return out;
}

struct FixedPoint {
  double r_star = 0.0;
  bool no_root = false;
  double residual = 0.0;  // psi(w(r*)) - r*
  std::size_t iterations = 0;
};

// w(r) = sqrt(C r^alpha).
inline double localization_radius(double r, double C, double alpha) { return std::sqrt(C * std::pow(r, alpha)); }

// Root of psi(w(r)) = r by bisection. psi(w(r))/r decreases in r, so the
// root is unique where psi(w(r)) > 0.
inline FixedPoint solve_fixed_point(const SubRootEnvelope& env, double C, double alpha) {
  require(C >= 0.0 && std::isfinite(C), ErrorCode::InvalidArgument, "C must be >= 0");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  auto phi = [&](double r) { return env(localization_radius(r, C, alpha)) - r; };
  FixedPoint fp;
  double lo = env.r_min(), hi = env.r_max();
  for (int k = 0; k < 200 && phi(hi) > 0.0; ++k) hi *= 2.0;
  for (int k = 0; k < 200 && phi(lo) < 0.0; ++k) lo *= 0.5;
  if (phi(lo) < 0.0) {
    fp.r_star = env.r_min();
    fp.no_root = true;
    fp.residual = phi(fp.r_star);
    return fp;
  }
  if (phi(lo) == 0.0) {
    fp.r_star = lo;
    return fp;
  }
  // phi(lo) > 0 >= phi(hi)
  for (; fp.iterations < 200 && hi - lo > 1e-12 * hi; ++fp.iterations) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  fp.r_star = hi;
  fp.residual = phi(hi);
  return fp;
}

struct DeltaBound {
  double U_gamma = 0.0;
  double delta = 0.0;
};

// U = 16 [2 r* + (C r*^(alpha-1) + 2b/3) log(4/gamma) / n], delta = gap + U.
inline DeltaBound compute_delta(const FiniteClassProblem& p, double r_star, const NoiseCertificate& noise,
                                double approximation_gap) {
  require(r_star >= 0.0, ErrorCode::InvalidArgument, "r_star must be >= 0");
  require(noise.alpha >= 1.0 || r_star > 0.0, ErrorCode::DegenerateRStar, "r_star must be > 0 when alpha < 1");
  const double term = noise.C * std::pow(r_star, noise.alpha - 1.0);
  const double U = 16.0 * (2.0 * r_star + (term + 2.0 * p.b / 3.0) * std::log(4.0 / p.gamma) /
                                              static_cast<double>(p.n));
  return {U, approximation_gap + U};
}

struct LocalizationResult {
  PopulationQuantities population;
  NoiseCertificate noise;
  PsiBuild psi;
  FixedPoint fixed_point;
  double r_star = 0.0;
  double U_gamma = 0.0;
  double delta = 0.0;
  double approximation_gap = 0.0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double mc_failure_rate = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();
};

// (eps, delta)-closeness over the restricted class with gaps taken relative
// to the class minimum. Returns the largest violation margin.
inline double finite_closeness_margin(const std::vector<double>& a, const std::vector<double>& b, double eps,
                                      double delta) {
  const double ma = *std::min_element(a.begin(), a.end());
  const double mb = *std::min_element(b.begin(), b.end());
  const double shrink = std::exp(-eps);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < a.size(); ++h) {
    const double ga = a[h] - ma, gb = b[h] - mb;
    worst = std::max(worst, shrink * ga - gb - delta);
    worst = std::max(worst, shrink * gb - ga - delta);
  }
  return worst;
}

// Computes r*, U and delta once, then draws `replications` samples of size
// n and counts how often the empirical and population risks fail to be
// (log 2, delta * delta_scale)-close over the restricted class.
inline LocalizationResult validate_proposition(const FiniteClassProblem& p, std::size_t replications,
                                               std::uint64_t seed, std::size_t mc_draws = 200,
                                               double delta_scale = 1.0) {
  require(replications >= 100, ErrorCode::InvalidArgument, "need at least 100 replications");
  LocalizationResult res;
  res.population = population_quantities(p);
  res.noise = verify_noise_condition(p, p.h_star_row, p.alpha);
  require(res.noise.violations.empty(), ErrorCode::NoiseViolation,
          "noise condition fails for a hypothesis with the comparator's risk");
  res.psi = build_psi(p, default_r_grid(p.b), p.n, mc_draws, derive_seed(seed, {0}));
  res.fixed_point = solve_fixed_point(res.psi.envelope, res.noise.C, p.alpha);
  res.r_star = res.fixed_point.r_star;
  res.approximation_gap = res.population.risk[res.population.h_bar] - res.population.risk[p.h_star_row];
  const DeltaBound db = compute_delta(p, res.r_star, res.noise, res.approximation_gap);
  res.U_gamma = db.U_gamma;
  res.delta = db.delta;

  const std::vector<double> L(res.population.risk.begin(), res.population.risk.begin() + p.class_size());
  const auto cum = loc_detail::cumulative(p.probs);
  const double threshold = res.delta * delta_scale;
  std::vector<double> margins(replications);
  parallel_for(
      replications,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          Rng rng(derive_seed(seed, {1, r}));
          std::vector<double> counts(p.outcome_count(), 0.0);
          for (std::size_t i = 0; i < p.n; ++i) counts[loc_detail::draw_outcome(rng, cum)] += 1.0;
          std::vector<double> Ln(p.class_size(), 0.0);
          for (std::size_t h = 0; h < p.class_size(); ++h) {
            for (std::size_t z = 0; z < p.outcome_count(); ++z) Ln[h] += counts[z] * p.loss[h][z];
            Ln[h] /= static_cast<double>(p.n);
          }
          margins[r] = finite_closeness_margin(Ln, L, std::log(2.0), threshold);
        }
      },
      1);
  res.replications = replications;
  for (double m : margins) {
    if (m > 0.0) ++res.failures;
    res.worst_margin = std::max(res.worst_margin, m);
  }
  res.mc_failure_rate = static_cast<double>(res.failures) / static_cast<double>(replications);
  return res;
}

inline Json localization_to_json(const FiniteClassProblem& p, const LocalizationResult& r) {
  Json env = Json::object();
  env["r_grid"] = r.psi.envelope.r_grid();
  env["psi"] = r.psi.envelope.psi_values();
  env["raw"] = r.psi.raw;
  return {{"r_star", r.r_star},
          {"no_root", r.fixed_point.no_root},
          {"fixed_point_residual", r.fixed_point.residual},
          {"U_gamma", r.U_gamma},
          {"delta", r.delta},
          {"approximation_gap", r.approximation_gap},
          {"mc_failure_rate", r.mc_failure_rate},
          {"failures", r.failures},
          {"replications", r.replications},
          {"worst_margin", r.worst_margin},
          {"gamma", p.gamma},
          {"alpha", p.alpha},
          {"b", p.b},
          {"n", p.n},
          {"C", r.noise.C},
          {"noise_argmax", p.hypotheses[r.noise.argmax]},
          {"h_bar", p.hypotheses[r.population.h_bar]},
          {"h_star_row", p.h_star_row},
          {"risk", r.population.risk},
          {"second_moment", r.population.second_moment},
          {"envelope", env}};
}

}  // namespace closefn
