#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "closefn/calculus.hpp"
#include "closefn/corpus.hpp"
#include "closefn/oracle.hpp"
#include "closefn/rng.hpp"

// Randomized trials of the closeness algebra against the grid oracle.

namespace closefn {

struct CalculusTrial {
  std::size_t trial = 0;
  Rule rule = Rule::transitive;
  double epsilon = 0.0;
  double delta = 0.0;         // what the rule certifies
  double oracle_delta = 0.0;  // grid delta* of the combined pair at epsilon
  bool holds = true;
};

// Per trial: a random triple (f, g, h) checks the transitive rule, a random
// mixture sum_i w_i f_i against g checks the averaging rule, and the pair
// (f, g) checks that shifting and swapping leave delta* bit-identical.
inline std::vector<CalculusTrial> calculus_trials(std::uint64_t seed, std::size_t trials, const BoxDomain& domain,
                                                  const Grid& grid, const FamilyMix& mix = default_family_mix()) {
  std::vector<CalculusTrial> out;
  out.reserve(4 * trials);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, {k}));
    const FunctionSpec f = random_function(rng, mix, domain);
    const FunctionSpec g = random_function(rng, mix, domain);
    const FunctionSpec h = random_function(rng, mix, domain);
    const GapProfile pf = gap_profile(f, grid), pg = gap_profile(g, grid), ph = gap_profile(h, grid);

    const double e1 = rng.uniform(0.0, 1.5), e2 = rng.uniform(0.0, 1.5);
    const Closeness c1 = oracle_closeness(pf, pg, e1);
    const Closeness c2 = oracle_closeness(pg, ph, e2);
    const Closeness ct = transitive(c1, c2);
    const double dt = min_delta(pf, ph, ct.epsilon);
    out.push_back({k, Rule::transitive, ct.epsilon, ct.delta, dt, dt <= ct.delta});

    const std::size_t m = 2 + rng.index(3);
    std::vector<FunctionSpec> comps;
    std::vector<double> w(m);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      comps.push_back(random_function(rng, mix, domain));
      w[i] = 0.05 + rng.uniform();
      s += w[i];
    }
    for (auto& x : w) x /= s;
    const double ea = rng.uniform(0.0, 1.5);
    std::vector<Closeness> certs;
    for (const auto& c : comps) certs.push_back(oracle_closeness(gap_profile(c, grid), pg, ea));
    const Closeness ca = average(certs, WeightVector(w));
    const GapProfile pmix = gap_profile(make_mixture(comps, w), grid);
    const double da = min_delta(pmix, pg, ea);
    out.push_back({k, Rule::average, ca.epsilon, ca.delta, da, da <= ca.delta});

    const double es = rng.uniform(0.0, 1.5);
    const double base = min_delta(pf, pg, es);
    const double a = rng.uniform(-100.0, 100.0), b = rng.uniform(-100.0, 100.0);
    const double shifted = min_delta(gap_profile(make_shifted(f, a), grid), gap_profile(make_shifted(g, b), grid), es);
    out.push_back({k, Rule::shift, es, base, shifted, shifted == base});
    const double swapped = min_delta(pg, pf, es);
    out.push_back({k, Rule::symmetry, es, base, swapped, swapped == base});
  }
  return out;
}

}  // namespace closefn
