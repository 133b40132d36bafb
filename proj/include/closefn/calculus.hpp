#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "closefn/closeness.hpp"
#include "closefn/error.hpp"

// Value-level algebra over certified closeness pairs. Closeness values do
// not carry the identity of the functions they relate; chaining
// compatible pairs is the caller's job, and `chain` records what was done.

namespace closefn {

// Simplex weights: each in [0, 1], summing to 1 within 1e-12.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    require(!w_.empty(), ErrorCode::InvalidWeights, "weight vector is empty");
    double s = 0.0;
    for (double v : w_) {
      require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::InvalidWeights,
              "weights must lie in [0, 1]");
      s += v;
    }
    require(std::abs(s - 1.0) <= 1e-12, ErrorCode::InvalidWeights, "weights must sum to 1");
  }

  std::size_t size() const { return w_.size(); }
  const std::vector<double>& values() const { return w_; }
  double operator[](std::size_t i) const { return w_[i]; }

 private:
  std::vector<double> w_;
};

// f and f are (0, 0)-close.
inline Closeness reflexive() { return Closeness::make(0.0, 0.0, Rule::reflexive); }

inline Closeness weaken(const Closeness& c, double eps2, double delta2) {
  require(eps2 >= c.epsilon && delta2 >= c.delta, ErrorCode::WeakeningViolation,
          "weakening must not decrease epsilon or delta");
  Closeness out = Closeness::make(eps2, delta2, Rule::weaken, c.detail);
  out.chain = "weaken(" + c.chain + ")";
  out.roles_swapped = c.roles_swapped;
  return out;
}

// f + a and g + b keep the certificate of f and g.
inline Closeness shift(const Closeness& c) {
  Closeness out = c;
  out.provenance = Rule::shift;
  out.chain = "shift(" + c.chain + ")";
  return out;
}

inline Closeness symmetric(const Closeness& c) {
  Closeness out = c;
  out.provenance = Rule::symmetry;
  out.roles_swapped = !c.roles_swapped;
  out.chain = "symmetry(" + c.chain + ")";
  return out;
}

// (f, g) and (g, h) give (f, h) with summed parameters.
inline Closeness transitive(const Closeness& c1, const Closeness& c2) {
  const double eps = c1.epsilon + c2.epsilon;
  require(eps <= kMaxEpsilon, ErrorCode::EpsilonOverflow, "composed epsilon exceeds cap of 50");
  Closeness out = Closeness::make(eps, c1.delta + c2.delta, Rule::transitive);
  out.chain = "transitive(" + c1.chain + "," + c2.chain + ")";
  return out;
}

// Certificates of f_i against a common g combine into one for sum w_i f_i
// against g: (eps, (e^eps + 1) delta). Heterogeneous inputs are first
// weakened to (max eps_i, max delta_i).
inline Closeness average(const std::vector<Closeness>& certs, const WeightVector& w) {
  require(!certs.empty() && certs.size() == w.size(), ErrorCode::InvalidWeights,
          "need one weight per certificate");
  double eps = 0.0, delta = 0.0;
  std::string chain;
  for (const auto& c : certs) {
    eps = std::max(eps, c.epsilon);
    delta = std::max(delta, c.delta);
    chain += (chain.empty() ? "" : ",") + c.chain;
  }
  Closeness out = Closeness::make(eps, (std::exp(eps) + 1.0) * delta, Rule::average, {{"base_delta", delta}});
  out.chain = "average(" + chain + ")";
  return out;
}

}  // namespace closefn
