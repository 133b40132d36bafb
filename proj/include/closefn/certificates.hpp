#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "closefn/closeness.hpp"
#include "closefn/domain.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"
#include "closefn/oracle.hpp"

// Closeness certificates computed from regularity information instead of
// exhaustive comparison of gaps. Grid-based quantities (D0, D1, ranges)
// are maxima over the supplied grid.

namespace closefn {

// A certificate delta and the grid oracle delta can be the same real number
// computed along different floating-point paths (e.g. the centered sup rule
// when both minimizers sit where f - g is extremal). Domination is judged up
// to this relative rounding allowance.
inline constexpr double kRoundoff = 1e-12;

inline bool dominates(double certificate_delta, double oracle_delta) {
  return certificate_delta >= oracle_delta - kRoundoff * (1.0 + oracle_delta);
}

namespace cert_detail {

inline void check_pair(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  require(f.domain() == g.domain(), ErrorCode::DomainMismatch, "functions are defined on different domains");
  require(f.domain() == grid.domain(), ErrorCode::DomainMismatch, "grid domain differs from function domain");
}

inline void require_smooth(const FunctionSpec& f, const char* which) {
  require(f.is_smooth(), ErrorCode::NonSmoothFunction,
          std::string(which) + " (family '" + std::string(f.family_name()) + "') has no gradient");
}

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace cert_detail

// Max over the grid of ||grad f - grad g||_2.
inline double gradient_gap_sup(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  cert_detail::check_pair(f, g, grid);
  cert_detail::require_smooth(f, "f");
  cert_detail::require_smooth(g, "g");
  const std::size_t d = grid.dim();
  std::vector<double> gf(d), gg(d);
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    f.gradient_into(p, gf);
    g.gradient_into(p, gg);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += (gf[k] - gg[k]) * (gf[k] - gg[k]);
    best = std::max(best, s);
  }
  const double out = std::sqrt(best);
  require(std::isfinite(out), ErrorCode::NonFiniteEvaluation, "non-finite gradient difference");
  return out;
}

// (0, 2 D0) with D0 = sup |f - g - c|; c is the midpoint of the range of
// f - g, which minimizes D0.
inline Closeness cert_sup(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  cert_detail::check_pair(f, g, grid);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    const double r = f.value(p) - g.value(p);
    require(std::isfinite(r), ErrorCode::NonFiniteEvaluation, "non-finite value in f - g");
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double c = 0.5 * (hi + lo);
  const double D0 = 0.5 * (hi - lo);
  return Closeness::make(0.0, hi - lo, Rule::sup, {{"c", c}, {"D0", D0}});
}

// Part-1 certificate with the centering constant fixed at c = 0, i.e.
// (0, 2 ||f - g||_inf).
inline Closeness cert_sup_uncentered(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  cert_detail::check_pair(f, g, grid);
  double D0 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    const double r = std::abs(f.value(p) - g.value(p));
    require(std::isfinite(r), ErrorCode::NonFiniteEvaluation, "non-finite value in f - g");
    D0 = std::max(D0, r);
  }
  return Closeness::make(0.0, 2.0 * D0, Rule::sup, {{"c", 0.0}, {"D0", D0}});
}

// (0, 2 M D1).
inline Closeness cert_grad_sup(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  const double D1 = gradient_gap_sup(f, g, grid);
  const double M = grid.domain().diameter();
  return Closeness::make(0.0, 2.0 * M * D1, Rule::grad_sup, {{"D1", D1}, {"M", M}});
}

// (log 2, (2/rho) min{D1^2, rho M D1}) where rho is the strong convexity of
// one of the two functions. Both orderings are tried when both carry rho
// and the smaller delta is returned.
inline Closeness cert_grad_strongly_convex(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  const double D1 = gradient_gap_sup(f, g, grid);
  const double M = grid.domain().diameter();
  const auto& rf = f.regularity().rho;
  const auto& rg = g.regularity().rho;
  require(rf.has_value() || rg.has_value(), ErrorCode::MissingRegularity,
          "gradient/strong-convexity certificate needs rho for f or g");
  auto bound = [&](double rho) { return (2.0 / rho) * std::min(D1 * D1, rho * M * D1); };
  double rho = 0.0, delta = std::numeric_limits<double>::infinity();
  double ordering = 0.0;  // 0: rho of g, 1: rho of f
  if (rg) {
    rho = *rg;
    delta = bound(rho);
  }
  if (rf && bound(*rf) < delta) {
    rho = *rf;
    delta = bound(rho);
    ordering = 1.0;
  }
  return Closeness::make(std::log(2.0), delta, Rule::grad_sc,
                         {{"D1", D1}, {"rho", rho}, {"M", M}, {"rho_from_f", ordering}});
}

// (log(4L/rho), rho/2 ||x*_f - x*_g||^2 + rho/(4 L^2) ||grad f(x*_f) - grad g(x*_g)||^2)
// with rho = min and L = max over the two functions' declared constants.
inline Closeness cert_minimizers(const FunctionSpec& f, const FunctionSpec& g) {
  require(f.domain() == g.domain(), ErrorCode::DomainMismatch, "functions are defined on different domains");
  const auto& a = f.regularity();
  const auto& b = g.regularity();
  require(a.rho && a.smooth_L && a.minimizer && b.rho && b.smooth_L && b.minimizer,
          ErrorCode::MissingRegularity, "minimizer certificate needs rho, L and minimizer for both functions");
  cert_detail::require_smooth(f, "f");
  cert_detail::require_smooth(g, "g");
  const double rho = std::min(*a.rho, *b.rho);
  const double L = std::max(*a.smooth_L, *b.smooth_L);
  const auto& xf = *a.minimizer;
  const auto& xg = *b.minimizer;
  double dist2 = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i) dist2 += (xf[i] - xg[i]) * (xf[i] - xg[i]);
  const auto gf = f.gradient(xf);
  const auto gg = g.gradient(xg);
  double grad2 = 0.0;
  for (std::size_t i = 0; i < gf.size(); ++i) grad2 += (gf[i] - gg[i]) * (gf[i] - gg[i]);
  const double delta = 0.5 * rho * dist2 + rho / (4.0 * L * L) * grad2;
  return Closeness::make(std::log(4.0 * L / rho), delta, Rule::minimizers,
                         {{"rho", rho}, {"L", L}, {"minimizer_distance", std::sqrt(dist2)},
                          {"minimizer_gradient_gap", std::sqrt(grad2)}});
}

// (0, max{F, G}) with F, G the largest gaps of f and g on the grid.
inline Closeness cert_range(const GapProfile& pf, const GapProfile& pg) {
  return Closeness::make(0.0, std::max(pf.max_gap, pg.max_gap), Rule::range,
                         {{"F", pf.max_gap}, {"G", pg.max_gap}});
}

inline Closeness cert_range(const FunctionSpec& f, const FunctionSpec& g, const Grid& grid) {
  cert_detail::check_pair(f, g, grid);
  return cert_range(gap_profile(f, grid), gap_profile(g, grid));
}

// Outcome of one certificate rule on a pair: either a certificate or the
// reason it does not apply.
struct CertificateOutcome {
  Rule rule;
  std::optional<Closeness> certificate;
  std::string reason;
};

// Every certificate rule on the pair; rules whose preconditions fail are
// reported with their error code instead of throwing.
inline std::vector<CertificateOutcome> all_certificates(const FunctionSpec& f, const FunctionSpec& g,
                                                        const Grid& grid) {
  std::vector<CertificateOutcome> out;
  auto attempt = [&](Rule rule, auto&& fn) {
    CertificateOutcome o{rule, std::nullopt, ""};
    try {
      o.certificate = fn();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonSmoothFunction && e.code() != ErrorCode::MissingRegularity) throw;
      o.reason = std::string(to_string(e.code()));
    }
    out.push_back(std::move(o));
  };
  attempt(Rule::sup, [&] { return cert_sup(f, g, grid); });
  attempt(Rule::grad_sup, [&] { return cert_grad_sup(f, g, grid); });
  attempt(Rule::grad_sc, [&] { return cert_grad_strongly_convex(f, g, grid); });
  attempt(Rule::minimizers, [&] { return cert_minimizers(f, g); });
  attempt(Rule::range, [&] { return cert_range(f, g, grid); });
  return out;
}

}  // namespace closefn
