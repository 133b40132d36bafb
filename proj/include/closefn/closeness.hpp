#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "closefn/error.hpp"

namespace closefn {

// e^eps must stay comfortably inside binary64.
inline constexpr double kMaxEpsilon = 50.0;

enum class Rule {
  oracle,
  sup,
  grad_sup,
  grad_sc,
  minimizers,
  range,
  reflexive,
  weaken,
  shift,
  symmetry,
  transitive,
  average,
};

constexpr std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::oracle: return "oracle";
    case Rule::sup: return "sup";
    case Rule::grad_sup: return "grad_sup";
    case Rule::grad_sc: return "grad_sc";
    case Rule::minimizers: return "minimizers";
    case Rule::range: return "range";
    case Rule::reflexive: return "reflexive";
    case Rule::weaken: return "weaken";
    case Rule::shift: return "shift";
    case Rule::symmetry: return "symmetry";
    case Rule::transitive: return "transitive";
    case Rule::average: return "average";
  }
  return "unknown";
}

// A certified (eps, delta) pair. `chain` is an audit string recording how
// the value was derived, e.g. "transitive(sup,grad_sc)".
struct Closeness {
  double epsilon = 0.0;
  double delta = 0.0;
  Rule provenance = Rule::reflexive;
  std::map<std::string, double> detail;
  std::string chain;
  bool roles_swapped = false;

  static Closeness make(double epsilon, double delta, Rule rule,
                        std::map<std::string, double> detail = {}) {
    require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidArgument,
            "closeness epsilon must be finite and nonnegative");
    require(epsilon <= kMaxEpsilon, ErrorCode::EpsilonOverflow,
            "closeness epsilon exceeds cap of 50");
    require(std::isfinite(delta) && delta >= 0.0, ErrorCode::InvalidArgument,
            "closeness delta must be finite and nonnegative");
    Closeness c;
    c.epsilon = epsilon;
    c.delta = delta;
    c.provenance = rule;
    c.detail = std::move(detail);
    c.chain = std::string(to_string(rule));
    return c;
  }
};

}  // namespace closefn
