#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "closefn/certificates.hpp"
#include "closefn/domain.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"
#include "closefn/oracle.hpp"
#include "closefn/parallel.hpp"

namespace closefn {

enum class SequenceKind { drift, shift, scale };

inline std::string_view to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::drift: return "drift";
    case SequenceKind::shift: return "shift";
    case SequenceKind::scale: return "scale";
  }
  return "?";
}

// Loss sequence F_1 .. F_T built from one base family whose location or
// scale moves with t.
//   drift: center a_t = start + t * drift_step
//   shift: center start for t < shift_time, shift_to from shift_time on
//   scale: fixed center, scale c_t = 1 + scale_amplitude * sin(2 pi t / scale_period)
struct OnlineSequenceSpec {
  std::size_t T = 100;
  SequenceKind kind = SequenceKind::drift;
  std::string base_family = "quadratic";  // quadratic | huber | scaled_abs
  BoxDomain domain = BoxDomain::interval(-1.0, 1.0);
  double curvature = 2.0;  // quadratic curvature
  double tau = 0.1;        // huber width
  double slope = 1.0;      // scaled_abs slope
  std::vector<double> start = {-0.5};
  std::vector<double> drift_step = {0.01};
  std::size_t shift_time = 50;
  std::vector<double> shift_to = {0.4};
  double scale_amplitude = 0.5;
  double scale_period = 25.0;
};

namespace online_detail {

inline void validate(const OnlineSequenceSpec& s) {
  const std::size_t d = s.domain.dim();
  require(s.T >= 2, ErrorCode::InvalidArgument, "horizon T must be >= 2");
  require(s.base_family == "quadratic" || s.base_family == "huber" || s.base_family == "scaled_abs",
          ErrorCode::InvalidArgument, "base family must be quadratic, huber or scaled_abs");
  require(s.base_family != "scaled_abs" || d == 1, ErrorCode::UnsupportedCombination,
          "scaled_abs base is one-dimensional");
  require(s.start.size() == d, ErrorCode::InvalidArgument, "start must have the domain dimension");
  if (s.kind == SequenceKind::drift)
    require(s.drift_step.size() == d, ErrorCode::InvalidArgument, "drift_step must have the domain dimension");
  if (s.kind == SequenceKind::shift) {
    require(s.shift_to.size() == d, ErrorCode::InvalidArgument, "shift_to must have the domain dimension");
    require(s.shift_time >= 2 && s.shift_time <= s.T, ErrorCode::InvalidArgument, "shift_time must lie in [2, T]");
  }
  if (s.kind == SequenceKind::scale) {
    require(s.base_family != "huber", ErrorCode::UnsupportedCombination, "scale schedule needs a scalable base");
    require(std::abs(s.scale_amplitude) < 1.0 && s.scale_period > 0.0, ErrorCode::InvalidArgument,
            "scale schedule needs |amplitude| < 1 and period > 0");
  }
  require(s.curvature > 0.0 && s.tau > 0.0 && s.slope > 0.0, ErrorCode::InvalidArgument,
          "base parameters must be positive");
}

inline FunctionSpec make_base(const OnlineSequenceSpec& s, const std::vector<double>& center, double scale) {
  if (s.base_family == "quadratic") return make_isotropic_quadratic(scale * s.curvature, center, s.domain);
  if (s.base_family == "huber") return make_huber(s.tau, center, s.domain);
  return make_scaled_abs(scale * s.slope, center[0], s.domain);
}

}  // namespace online_detail

// F_1 .. F_T (element t-1 holds F_t).
inline std::vector<FunctionSpec> build_sequence(const OnlineSequenceSpec& s) {
  online_detail::validate(s);
  const std::size_t d = s.domain.dim();
  std::vector<FunctionSpec> seq;
  seq.reserve(s.T);
  for (std::size_t t = 1; t <= s.T; ++t) {
    std::vector<double> center = s.start;
    double scale = 1.0;
    switch (s.kind) {
      case SequenceKind::drift:
        for (std::size_t i = 0; i < d; ++i) center[i] = s.start[i] + static_cast<double>(t) * s.drift_step[i];
        break;
      case SequenceKind::shift:
        if (t >= s.shift_time) center = s.shift_to;
        break;
      case SequenceKind::scale:
        scale = 1.0 + s.scale_amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / s.scale_period);
        break;
    }
    seq.push_back(online_detail::make_base(s, center, scale));
  }
  return seq;
}

// One row per t >= 2 comparing F_{t-1} with F_t. Empty optionals are
// cells that do not apply; `note` says why.
struct VariationRow {
  std::size_t t = 0;
  double sup_metric = 0.0;
  std::optional<double> grad_metric;
  std::optional<double> min_metric;
  double cert_sup_delta = 0.0;           // 2 * sup_metric, eps = 0
  double cert_sup_centered_delta = 0.0;  // optimally centered, eps = 0
  std::optional<double> cert_grad_delta;  // 2 M grad_metric, eps = 0
  std::optional<double> cert_min_delta;
  std::optional<double> cert_min_epsilon;
  double oracle_delta = 0.0;       // at eps_for_oracle
  double oracle_delta_eps0 = 0.0;  // at eps = 0
  std::optional<double> oracle_delta_min_eps;
  std::string note;
};

struct VariationTotals {
  double sup_metric = 0.0;
  double grad_metric = 0.0;
  double min_metric = 0.0;
  double cert_sup_delta = 0.0;
  double cert_grad_delta = 0.0;
  double cert_min_delta = 0.0;
  double oracle_delta = 0.0;
};

struct VariationTable {
  double eps_for_oracle = 0.0;
  std::vector<VariationRow> rows;
  VariationTotals totals;
};

namespace online_detail {

inline bool interior(const BoxDomain& dom, const std::vector<double>& x) {
  for (std::size_t i = 0; i < dom.dim(); ++i) {
    if (dom.lower(i) == dom.upper(i)) continue;
    if (!(x[i] > dom.lower(i) && x[i] < dom.upper(i))) return false;
  }
  return true;
}

inline void add_note(std::string& note, const std::string& s) { note += (note.empty() ? "" : ";") + s; }

}  // namespace online_detail

inline VariationTable variation_table(const std::vector<FunctionSpec>& seq, double eps_for_oracle, const Grid& grid) {
  require(seq.size() >= 2, ErrorCode::InvalidArgument, "sequence needs at least two losses");
  for (const auto& f : seq)
    require(f.domain() == grid.domain(), ErrorCode::DomainMismatch, "sequence and grid domains differ");
  VariationTable table;
  table.eps_for_oracle = eps_for_oracle;
  std::vector<GapProfile> profiles(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) profiles[k] = gap_profile(seq[k], grid);

  table.rows.resize(seq.size() - 1);
  parallel_for(
      table.rows.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          const FunctionSpec& prev = seq[k];
          const FunctionSpec& cur = seq[k + 1];
          VariationRow row;
          row.t = k + 2;
          const Closeness c0 = cert_sup_uncentered(prev, cur, grid);
          row.sup_metric = c0.detail.at("D0");
          row.cert_sup_delta = c0.delta;
          row.cert_sup_centered_delta = cert_sup(prev, cur, grid).delta;
          row.oracle_delta = min_delta(profiles[k], profiles[k + 1], eps_for_oracle);
          row.oracle_delta_eps0 = min_delta(profiles[k], profiles[k + 1], 0.0);
          if (prev.is_smooth() && cur.is_smooth()) {
            const Closeness cg = cert_grad_sup(prev, cur, grid);
            row.grad_metric = cg.detail.at("D1");
            row.cert_grad_delta = cg.delta;
            const auto& a = prev.regularity();
            const auto& b = cur.regularity();
            if (a.rho && a.smooth_L && a.minimizer && b.rho && b.smooth_L && b.minimizer) {
              const Closeness cm = cert_minimizers(prev, cur);
              row.min_metric = cm.detail.at("minimizer_distance");
              if (online_detail::interior(grid.domain(), *a.minimizer) &&
                  online_detail::interior(grid.domain(), *b.minimizer)) {
                row.cert_min_delta = cm.delta;
                row.cert_min_epsilon = cm.epsilon;
                row.oracle_delta_min_eps = min_delta(profiles[k], profiles[k + 1], cm.epsilon);
              } else {
                online_detail::add_note(row.note, "boundary_minimizer");
              }
            } else {
              online_detail::add_note(row.note, std::string(to_string(ErrorCode::MissingRegularity)));
            }
          } else {
            online_detail::add_note(row.note, std::string(to_string(ErrorCode::NonSmoothFunction)));
          }
          table.rows[k] = std::move(row);
        }
      },
      1);

  auto& tot = table.totals;
  for (const auto& r : table.rows) {
    tot.sup_metric += r.sup_metric;
    tot.grad_metric += r.grad_metric.value_or(0.0);
    tot.min_metric += r.min_metric.value_or(0.0);
    tot.cert_sup_delta += r.cert_sup_delta;
    tot.cert_grad_delta += r.cert_grad_delta.value_or(0.0);
    tot.cert_min_delta += r.cert_min_delta.value_or(0.0);
    tot.oracle_delta += r.oracle_delta;
  }
  return table;
}

// Number of certificate cells below the oracle delta at the certificate's
// epsilon. Zero for a sound table.
inline std::size_t certificate_violations(const VariationTable& table) {
  std::size_t bad = 0;
  for (const auto& r : table.rows) {
    if (!dominates(r.cert_sup_delta, r.oracle_delta_eps0)) ++bad;
    if (!dominates(r.cert_sup_centered_delta, r.oracle_delta_eps0)) ++bad;
    if (r.cert_grad_delta && !dominates(*r.cert_grad_delta, r.oracle_delta_eps0)) ++bad;
    if (r.cert_min_delta && !dominates(*r.cert_min_delta, *r.oracle_delta_min_eps)) ++bad;
  }
  return bad;
}

struct LearnerStep {
  std::size_t t = 0;
  std::vector<double> theta;
  double excess = 0.0;
  bool restarted = false;
  std::optional<double> window_delta;  // delta* between window average and F_t
};

struct LearnerResult {
  std::vector<LearnerStep> steps;
  double cumulative_excess = 0.0;
  std::size_t restarts = 0;
};

// Follow-the-window-average: play the grid minimizer of the average of the
// losses in the window, then reset the window when the new loss is not
// (eps, delta_threshold)-close to that average.
inline LearnerResult restart_learner(const std::vector<FunctionSpec>& seq, double eps, double delta_threshold,
                                     const Grid& grid) {
  require(eps >= 0.0 && eps <= kMaxEpsilon, ErrorCode::InvalidArgument, "eps must lie in [0, 50]");
  require(delta_threshold > 0.0, ErrorCode::InvalidArgument, "delta_threshold must be > 0");
  const std::size_t N = grid.size();
  std::vector<double> window_sum(N, 0.0);
  std::size_t window = 0;
  const std::vector<double> center = grid.domain().center();

  LearnerResult out;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    LearnerStep step;
    step.t = k + 1;
    const GapProfile pt = gap_profile(seq[k], grid);
    std::optional<GapProfile> avg;
    if (window == 0) {
      step.theta = center;
    } else {
      std::vector<double> values(N);
      const double inv = 1.0 / static_cast<double>(window);
      for (std::size_t i = 0; i < N; ++i) values[i] = window_sum[i] * inv;
      avg = profile_from_values(grid, std::move(values));
      const auto p = grid.point(avg->argmin);
      step.theta.assign(p.begin(), p.end());
    }
    step.excess = seq[k].value(step.theta) - pt.min_value;
    if (avg) {
      step.window_delta = min_delta(*avg, pt, eps);
      if (*step.window_delta > delta_threshold) {
        step.restarted = true;
        ++out.restarts;
        std::fill(window_sum.begin(), window_sum.end(), 0.0);
        window = 0;
      }
    }
    for (std::size_t i = 0; i < N; ++i) window_sum[i] += pt.values[i];
    ++window;
    out.cumulative_excess += step.excess;
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace closefn
