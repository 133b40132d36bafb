#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "closefn/domain.hpp"
#include "closefn/functions.hpp"
#include "closefn/rng.hpp"

namespace closefn {

// Relative weights over family names for random draws.
using FamilyMix = std::map<std::string, double>;

inline FamilyMix default_family_mix() {
  return {{"quadratic", 4.0}, {"scaled_abs", 1.0}, {"max_affine", 1.0}, {"huber", 1.0},
          {"logistic_1d", 1.0}, {"shifted", 1.0},  {"mixture", 1.0}};
}

struct CorpusOptions {
  // Place minimizers outside the central 80% (possibly outside the box)
  // so that boundary regimes are exercised.
  bool boundary_minimizers = false;
  // Probability that the second function is a small perturbation of the
  // first (a mixture with a random function), giving near-identical pairs.
  double perturb_probability = 0.25;
};

namespace corpus_detail {

inline bool one_dimensional_only(const std::string& fam) { return fam == "scaled_abs" || fam == "logistic_1d"; }

inline std::string pick_family(Rng& rng, const FamilyMix& mix, std::size_t d) {
  double total = 0.0;
  for (const auto& [name, w] : mix) {
    require(w >= 0.0 && std::isfinite(w), ErrorCode::InvalidArgument, "family mix weights must be >= 0");
    if (d == 1 || !one_dimensional_only(name)) total += w;
  }
  require(total > 0.0, ErrorCode::InvalidArgument, "family mix has no family usable in this dimension");
  double u = rng.uniform() * total;
  std::string last;
  for (const auto& [name, w] : mix) {
    if ((d > 1 && one_dimensional_only(name)) || w == 0.0) continue;
    last = name;
    if (u < w) return name;
    u -= w;
  }
  return last;
}

inline std::vector<double> draw_location(Rng& rng, const BoxDomain& dom, bool boundary) {
  std::vector<double> m(dom.dim());
  for (std::size_t i = 0; i < dom.dim(); ++i) {
    const double lo = dom.lower(i), hi = dom.upper(i), w = hi - lo;
    if (!boundary) {
      m[i] = lo + w * (0.1 + 0.8 * rng.uniform());
    } else {
      const double off = 0.5 * w * rng.uniform();
      m[i] = rng.uniform() < 0.5 ? lo - off : hi + off;
    }
  }
  return m;
}

// Random orthogonal matrix (row-major) by Gram-Schmidt on uniform vectors.
inline std::vector<double> random_rotation(Rng& rng, std::size_t d) {
  std::vector<std::vector<double>> q;
  while (q.size() < d) {
    std::vector<double> v(d);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    for (const auto& u : q) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += v[k] * u[k];
      for (std::size_t k = 0; k < d; ++k) v[k] -= dot * u[k];
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-3) continue;
    for (auto& x : v) x /= n;
    q.push_back(std::move(v));
  }
  std::vector<double> out(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = q[i][k];
  return out;
}

inline FunctionSpec draw_base(Rng& rng, const std::string& fam, const BoxDomain& dom, const CorpusOptions& opt);

inline std::string pick_base_family(Rng& rng, std::size_t d) {
  static const char* one_d[] = {"quadratic", "scaled_abs", "max_affine", "huber", "logistic_1d"};
  static const char* multi_d[] = {"quadratic", "max_affine", "huber"};
  return d == 1 ? one_d[rng.index(5)] : multi_d[rng.index(3)];
}

inline FunctionSpec draw_function(Rng& rng, const std::string& fam, const BoxDomain& dom,
                                  const CorpusOptions& opt) {
  if (fam == "shifted") {
    FunctionSpec base = draw_base(rng, pick_base_family(rng, dom.dim()), dom, opt);
    return make_shifted(std::move(base), rng.uniform(-10.0, 10.0));
  }
  if (fam == "mixture") {
    const std::size_t m = 2 + rng.index(2);
    std::vector<FunctionSpec> comps;
    std::vector<double> w(m);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      comps.push_back(draw_base(rng, pick_base_family(rng, dom.dim()), dom, opt));
      w[i] = 0.05 + rng.uniform();
      s += w[i];
    }
    for (auto& x : w) x /= s;
    return make_mixture(std::move(comps), std::move(w));
  }
  return draw_base(rng, fam, dom, opt);
}

inline FunctionSpec draw_base(Rng& rng, const std::string& fam, const BoxDomain& dom, const CorpusOptions& opt) {
  const std::size_t d = dom.dim();
  if (fam == "quadratic") {
    // Eigenvalues in [0.1, 10], random orientation, minimizer placed by opt.
    const auto Q = random_rotation(rng, d);
    std::vector<double> lambda(d);
    for (auto& l : lambda) l = rng.uniform(0.1, 10.0);
    std::vector<double> A(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += Q[k * d + i] * lambda[k] * Q[k * d + j];
        A[i * d + j] = s;
      }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) A[j * d + i] = A[i * d + j];
    const auto m = draw_location(rng, dom, opt.boundary_minimizers);
    std::vector<double> b(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b[i] -= A[i * d + j] * m[j];
    return make_quadratic(std::move(A), std::move(b), rng.uniform(-1.0, 1.0), dom);
  }
  if (fam == "scaled_abs") {
    return make_scaled_abs(rng.uniform(0.5, 4.0), draw_location(rng, dom, opt.boundary_minimizers)[0], dom);
  }
  if (fam == "max_affine") {
    const std::size_t k = 2 + rng.index(4);
    std::vector<std::vector<double>> slopes(k, std::vector<double>(d));
    std::vector<double> offsets(k);
    for (std::size_t p = 0; p < k; ++p) {
      for (auto& a : slopes[p]) a = rng.uniform(-3.0, 3.0);
      offsets[p] = rng.uniform(-1.0, 1.0);
    }
    return make_max_affine(std::move(slopes), std::move(offsets), dom);
  }
  if (fam == "huber") {
    return make_huber(rng.uniform(0.05, 1.0), draw_location(rng, dom, opt.boundary_minimizers), dom);
  }
  if (fam == "logistic_1d") {
    const std::size_t m = 3 + rng.index(8);
    std::vector<double> x(m), y(m);
    for (std::size_t j = 0; j < m; ++j) {
      x[j] = rng.uniform(-3.0, 3.0);
      y[j] = rng.sign();
    }
    return make_logistic_1d(std::move(x), std::move(y), rng.uniform(0.1, 2.0), dom);
  }
  fail(ErrorCode::InvalidArgument, "unknown family '" + fam + "' in family mix");
}

}  // namespace corpus_detail

inline FunctionSpec random_function(Rng& rng, const FamilyMix& mix, const BoxDomain& domain,
                                    const CorpusOptions& opt = {}) {
  const std::string fam = corpus_detail::pick_family(rng, mix, domain.dim());
  return corpus_detail::draw_function(rng, fam, domain, opt);
}

// Deterministic pair for a given seed.
inline std::pair<FunctionSpec, FunctionSpec> random_pair(std::uint64_t seed, const FamilyMix& mix,
                                                         const BoxDomain& domain, const CorpusOptions& opt = {}) {
  Rng rng(seed);
  FunctionSpec f = random_function(rng, mix, domain, opt);
  if (rng.uniform() < opt.perturb_probability) {
    FunctionSpec h = random_function(rng, mix, domain, opt);
    const double w = rng.uniform(0.01, 0.2);
    FunctionSpec g = make_mixture({f, std::move(h)}, {1.0 - w, w});
    return {std::move(f), std::move(g)};
  }
  FunctionSpec g = random_function(rng, mix, domain, opt);
  return {std::move(f), std::move(g)};
}

// Pair number `index` of the corpus rooted at `master_seed`.
inline std::pair<FunctionSpec, FunctionSpec> corpus_pair(std::uint64_t master_seed, std::uint64_t index,
                                                         const FamilyMix& mix, const BoxDomain& domain,
                                                         const CorpusOptions& opt = {}) {
  return random_pair(derive_seed(master_seed, {index}), mix, domain, opt);
}

}  // namespace closefn
