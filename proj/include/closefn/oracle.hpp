#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "closefn/closeness.hpp"
#include "closefn/domain.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"
#include "closefn/parallel.hpp"

namespace closefn {

// Sub-optimality gaps of a function over a grid. The infimum over the
// domain is approximated by the grid minimum, so min(gaps) == 0 exactly.
// `grid` is non-owning.
struct GapProfile {
  const Grid* grid = nullptr;
  std::vector<double> values;  // f at each grid point
  std::vector<double> gaps;
  double min_value = 0.0;
  std::size_t argmin = 0;  // lexicographically smallest minimizing index
  double max_gap = 0.0;
};

namespace oracle_detail {

inline void check_domains(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  require(f.domain() == g.domain(), ErrorCode::DomainMismatch, "functions are defined on different domains");
  require(f.domain() == grid.domain(), ErrorCode::DomainMismatch, "grid domain differs from function domain");
}

inline void check_profiles(const GapProfile& pf, const GapProfile& pg) {
  require(pf.grid != nullptr && pg.grid != nullptr && pf.gaps.size() == pg.gaps.size() &&
              pf.grid->domain() == pg.grid->domain(),
          ErrorCode::DomainMismatch, "gap profiles are over different grids");
}

inline void check_epsilon(double eps) {
  require(std::isfinite(eps) && eps >= 0.0, ErrorCode::InvalidArgument, "epsilon must be >= 0");
  require(eps <= kMaxEpsilon, ErrorCode::EpsilonOverflow, "epsilon exceeds cap of 50");
}

inline std::string format_point(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + std::to_string(p[i]);
  return s + ")";
}

}  // namespace oracle_detail

inline GapProfile gap_profile(const FunctionSpec& f, const Grid& grid) {
  require(f.domain() == grid.domain(), ErrorCode::DomainMismatch, "grid domain differs from function domain");
  // Additive constants do not change gaps. Peel shift wrappers so that gaps
  // of f + a are bit-identical to those of f.
  const FunctionSpec* core = &f;
  double shift = 0.0;
  while (const auto* s = std::get_if<family::Shifted>(&core->family())) {
    shift += s->shift;
    core = s->base.get();
  }

  GapProfile prof;
  prof.grid = &grid;
  const std::size_t n = grid.size();
  prof.values.resize(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) prof.values[i] = core->value(grid.point(i));
  });
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = prof.values[i];
    if (!std::isfinite(v))
      fail(ErrorCode::NonFiniteEvaluation,
           "non-finite value at grid point " + oracle_detail::format_point(grid.point(i)));
    if (v < mn) {
      mn = v;
      prof.argmin = i;
    }
  }
  prof.gaps.resize(n);
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prof.gaps[i] = prof.values[i] - mn;
    mx = std::max(mx, prof.gaps[i]);
  }
  prof.max_gap = mx;
  prof.min_value = mn + shift;
  if (shift != 0.0)
    for (auto& v : prof.values) v += shift;
  return prof;
}

// Gap profile of a function given only its values on the grid.
inline GapProfile profile_from_values(const Grid& grid, std::vector<double> values) {
  require(values.size() == grid.size(), ErrorCode::DomainMismatch, "value count differs from grid size");
  GapProfile prof;
  prof.grid = &grid;
  prof.values = std::move(values);
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    require(std::isfinite(prof.values[i]), ErrorCode::NonFiniteEvaluation,
            "non-finite value at grid point " + oracle_detail::format_point(grid.point(i)));
    if (prof.values[i] < mn) {
      mn = prof.values[i];
      prof.argmin = i;
    }
  }
  prof.gaps.resize(prof.values.size());
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    prof.gaps[i] = prof.values[i] - mn;
    prof.max_gap = std::max(prof.max_gap, prof.gaps[i]);
  }
  prof.min_value = mn;
  return prof;
}

// Result of testing the two defining inequalities on every grid point.
// The margin of a point is e^{-eps} * gap_one - gap_other - delta; the
// pair is close iff every margin is <= 0.
struct ClosenessCheck {
  bool holds = true;
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::size_t worst_index = 0;
  std::vector<double> worst_point;
  // 0: gap_g exceeds its bound in terms of gap_f; 1: the reverse.
  int worst_direction = 0;
};

inline ClosenessCheck check_closeness(const GapProfile& pf, const GapProfile& pg, double eps, double delta) {
  oracle_detail::check_profiles(pf, pg);
  oracle_detail::check_epsilon(eps);
  require(std::isfinite(delta) && delta >= 0.0, ErrorCode::InvalidArgument, "delta must be >= 0");
  const double shrink = std::exp(-eps);
  ClosenessCheck out;
  for (std::size_t i = 0; i < pf.gaps.size(); ++i) {
    const double m0 = shrink * pg.gaps[i] - pf.gaps[i] - delta;
    const double m1 = shrink * pf.gaps[i] - pg.gaps[i] - delta;
    if (m0 > out.worst_margin) {
      out.worst_margin = m0;
      out.worst_index = i;
      out.worst_direction = 0;
    }
    if (m1 > out.worst_margin) {
      out.worst_margin = m1;
      out.worst_index = i;
      out.worst_direction = 1;
    }
  }
  out.holds = out.worst_margin <= 0.0;
  const auto p = pf.grid->point(out.worst_index);
  out.worst_point.assign(p.begin(), p.end());
  return out;
}

inline ClosenessCheck check_closeness(const FunctionSpec& f, const FunctionSpec& g, double eps, double delta,
                                      const Grid& grid) {
  oracle_detail::check_domains(f, g, grid);
  return check_closeness(gap_profile(f, grid), gap_profile(g, grid), eps, delta);
}

// Smallest delta for which the pair is (eps, delta)-close on the grid.
inline double min_delta(const GapProfile& pf, const GapProfile& pg, double eps) {
  oracle_detail::check_profiles(pf, pg);
  oracle_detail::check_epsilon(eps);
  const double shrink = std::exp(-eps);
  double worst = 0.0;
  for (std::size_t i = 0; i < pf.gaps.size(); ++i) {
    worst = std::max(worst, shrink * pg.gaps[i] - pf.gaps[i]);
    worst = std::max(worst, shrink * pf.gaps[i] - pg.gaps[i]);
  }
  return worst;
}

inline double min_delta(const FunctionSpec& f, const FunctionSpec& g, double eps, const Grid& grid) {
  oracle_detail::check_domains(f, g, grid);
  return min_delta(gap_profile(f, grid), gap_profile(g, grid), eps);
}

inline Closeness oracle_closeness(const GapProfile& pf, const GapProfile& pg, double eps) {
  return Closeness::make(eps, min_delta(pf, pg, eps), Rule::oracle);
}

struct DeltaPoint {
  double epsilon;
  double delta;
};

inline std::vector<DeltaPoint> delta_curve(const GapProfile& pf, const GapProfile& pg,
                                           const std::vector<double>& eps_list) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    oracle_detail::check_epsilon(eps_list[i]);
    require(i == 0 || eps_list[i - 1] <= eps_list[i], ErrorCode::InvalidArgument,
            "epsilon list must be ascending");
  }
  std::vector<DeltaPoint> out;
  out.reserve(eps_list.size());
  for (double e : eps_list) out.push_back({e, min_delta(pf, pg, e)});
  return out;
}

inline std::vector<DeltaPoint> delta_curve(const FunctionSpec& f, const FunctionSpec& g,
                                           const std::vector<double>& eps_list, const Grid& grid) {
  oracle_detail::check_domains(f, g, grid);
  return delta_curve(gap_profile(f, grid), gap_profile(g, grid), eps_list);
}

// ---- sub-level set characterization -------------------------------------

// 101 uniform levels over [-0.1 G, G], G the larger of the two max gaps.
inline std::vector<double> uniform_t_sweep(const GapProfile& pf, const GapProfile& pg, std::size_t levels = 101) {
  const double G = std::max(pf.max_gap, pg.max_gap);
  std::vector<double> t(levels);
  for (std::size_t k = 0; k < levels; ++k)
    t[k] = -0.1 * G + 1.1 * G * static_cast<double>(k) / static_cast<double>(levels - 1);
  return t;
}

// Uniform sweep plus, for every grid point, the level gap_f(x) and the
// largest level strictly below it. Those are the levels at which x enters
// S(f, t), so testing them makes the inclusion check exhaustive.
inline std::vector<double> full_t_sweep(const GapProfile& pf, const GapProfile& pg) {
  std::vector<double> t = uniform_t_sweep(pf, pg);
  t.reserve(t.size() + 2 * pf.gaps.size());
  for (double v : pf.gaps) {
    t.push_back(v);
    t.push_back(std::nextafter(v, -std::numeric_limits<double>::infinity()));
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

namespace oracle_detail {

// For the points sorted by `key` ascending, prefix maxima of `other`; lets
// max{other(x) : key(x) <= s} be answered by binary search.
struct PrefixMax {
  std::vector<double> keys;
  std::vector<double> max_other;

  PrefixMax(const std::vector<double>& key, const std::vector<double>& other) {
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    keys.resize(order.size());
    max_other.resize(order.size());
    double run = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < order.size(); ++k) {
      keys[k] = key[order[k]];
      run = std::max(run, other[order[k]]);
      max_other[k] = run;
    }
  }

  // Max of `other` over {x : key(x) <= s}; -inf for the empty set.
  double query(double s) const {
    const auto it = std::upper_bound(keys.begin(), keys.end(), s);
    if (it == keys.begin()) return -std::numeric_limits<double>::infinity();
    return max_other[static_cast<std::size_t>(it - keys.begin()) - 1];
  }
};

}  // namespace oracle_detail

// Verifies S(g, e^{-eps} t - delta) ⊆ S(f, t) ⊆ S(g, e^{eps} (t + delta))
// for every t in t_levels, with S(h, t) = {x : gap_h(x) <= t}.
inline bool sublevel_inclusion_check(const GapProfile& pf, const GapProfile& pg, double eps, double delta,
                                     const std::vector<double>& t_levels) {
  oracle_detail::check_profiles(pf, pg);
  oracle_detail::check_epsilon(eps);
  require(std::isfinite(delta) && delta >= 0.0, ErrorCode::InvalidArgument, "delta must be >= 0");
  // S(f,t) ⊆ S(g,s)  <=>  max{gap_g : gap_f <= t} <= s, and symmetrically.
  const oracle_detail::PrefixMax by_f(pf.gaps, pg.gaps);
  const oracle_detail::PrefixMax by_g(pg.gaps, pf.gaps);
  const double grow = std::exp(eps), shrink = std::exp(-eps);
  for (double t : t_levels) {
    // For t < 0 the inner level is negative and its sub-level set empty;
    // scaling a denormal t would underflow to -0 and pick up the minimizers.
    const double inner = t < 0.0 ? t : shrink * t - delta;
    if (by_g.query(inner) > t) return false;
    const double outer = grow * (t + delta);
    if (by_f.query(t) > outer) return false;
  }
  return true;
}

inline bool sublevel_inclusion_check(const FunctionSpec& f, const FunctionSpec& g, double eps, double delta,
                                     const Grid& grid, const std::vector<double>& t_levels) {
  oracle_detail::check_domains(f, g, grid);
  return sublevel_inclusion_check(gap_profile(f, grid), gap_profile(g, grid), eps, delta, t_levels);
}

}  // namespace closefn
