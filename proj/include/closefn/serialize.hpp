#pragma once

#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "closefn/domain.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"

namespace closefn {

using Json = nlohmann::json;

namespace json_detail {

inline std::string where(const std::string& ctx) { return ctx.empty() ? "" : " (" + ctx + ")"; }

}  // namespace json_detail

// Numeric config fields may be JSON numbers or decimal strings.
inline double parse_real(const Json& j, const std::string& ctx = "") {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == s.size() && used > 0, ErrorCode::ConfigError,
            "not a decimal number: '" + s + "'" + json_detail::where(ctx));
    return v;
  }
  fail(ErrorCode::ConfigError, "expected a number" + json_detail::where(ctx));
}

inline std::vector<double> parse_real_vector(const Json& j, const std::string& ctx = "") {
  require(j.is_array(), ErrorCode::ConfigError, "expected an array" + json_detail::where(ctx));
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(parse_real(e, ctx));
  return v;
}

inline std::vector<std::vector<double>> parse_real_matrix(const Json& j, const std::string& ctx = "") {
  require(j.is_array(), ErrorCode::ConfigError, "expected an array of arrays" + json_detail::where(ctx));
  std::vector<std::vector<double>> m;
  for (const auto& row : j) m.push_back(parse_real_vector(row, ctx));
  return m;
}

inline const Json& field(const Json& j, const char* key, const std::string& ctx = "") {
  require(j.is_object() && j.contains(key), ErrorCode::ConfigError,
          std::string("missing field '") + key + "'" + json_detail::where(ctx));
  return j.at(key);
}

inline Json domain_to_json(const BoxDomain& d) {
  return Json{{"lower", std::vector<double>(d.lower().begin(), d.lower().end())},
              {"upper", std::vector<double>(d.upper().begin(), d.upper().end())}};
}

inline BoxDomain domain_from_json(const Json& j) {
  try {
    return BoxDomain(parse_real_vector(field(j, "lower", "domain")),
                     parse_real_vector(field(j, "upper", "domain")));
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, std::string("invalid domain: ") + e.what());
  }
}

// {"family": ..., "params": {...}, "domain": {"lower": [...], "upper": [...]}}
inline Json function_to_json(const FunctionSpec& f) {
  Json params = std::visit(
      [&](const auto& fam) -> Json {
        using T = std::decay_t<decltype(fam)>;
        const std::size_t d = f.dim();
        if constexpr (std::is_same_v<T, family::Quadratic>) {
          std::vector<std::vector<double>> A(d, std::vector<double>(d));
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) A[i][k] = fam.A[i * d + k];
          return Json{{"A", A}, {"b", fam.b}, {"c", fam.c}};
        } else if constexpr (std::is_same_v<T, family::ScaledAbs>) {
          return Json{{"s", fam.s}, {"a", fam.a}};
        } else if constexpr (std::is_same_v<T, family::MaxAffine>) {
          return Json{{"slopes", fam.slopes}, {"offsets", fam.offsets}};
        } else if constexpr (std::is_same_v<T, family::Huber>) {
          return Json{{"tau", fam.tau}, {"center", fam.center}};
        } else if constexpr (std::is_same_v<T, family::Logistic1d>) {
          return Json{{"x", fam.x}, {"y", fam.y}, {"mu", fam.mu}};
        } else if constexpr (std::is_same_v<T, family::AbsSum>) {
          return Json{{"points", fam.points}, {"weights", fam.weights}};
        } else if constexpr (std::is_same_v<T, family::Shifted>) {
          return Json{{"base", function_to_json(*fam.base)}, {"shift", fam.shift}};
        } else {
          Json comps = Json::array();
          for (const auto& c : fam.components) comps.push_back(function_to_json(*c));
          return Json{{"components", comps}, {"weights", fam.weights}};
        }
      },
      f.family());
  return Json{{"family", std::string(f.family_name())}, {"params", params}, {"domain", domain_to_json(f.domain())}};
}

inline FunctionSpec function_from_json(const Json& j) {
  const std::string fam = field(j, "family", "function").get<std::string>();
  const BoxDomain domain = domain_from_json(field(j, "domain", fam));
  const Json& p = field(j, "params", fam);
  try {
    if (fam == "quadratic") {
      const auto rows = parse_real_matrix(field(p, "A", fam), fam);
      std::vector<double> A;
      for (const auto& r : rows) {
        require(r.size() == rows.size(), ErrorCode::ConfigError, "quadratic: A must be square");
        A.insert(A.end(), r.begin(), r.end());
      }
      return make_quadratic(std::move(A), parse_real_vector(field(p, "b", fam), fam),
                            parse_real(field(p, "c", fam), fam), domain);
    }
    if (fam == "scaled_abs")
      return make_scaled_abs(parse_real(field(p, "s", fam), fam), parse_real(field(p, "a", fam), fam), domain);
    if (fam == "max_affine")
      return make_max_affine(parse_real_matrix(field(p, "slopes", fam), fam),
                             parse_real_vector(field(p, "offsets", fam), fam), domain);
    if (fam == "huber")
      return make_huber(parse_real(field(p, "tau", fam), fam), parse_real_vector(field(p, "center", fam), fam),
                        domain);
    if (fam == "logistic_1d")
      return make_logistic_1d(parse_real_vector(field(p, "x", fam), fam), parse_real_vector(field(p, "y", fam), fam),
                              parse_real(field(p, "mu", fam), fam), domain);
    if (fam == "abs_sum")
      return make_abs_sum(parse_real_matrix(field(p, "points", fam), fam),
                          parse_real_vector(field(p, "weights", fam), fam), domain);
    if (fam == "shifted") {
      FunctionSpec base = function_from_json(field(p, "base", fam));
      require(base.domain() == domain, ErrorCode::ConfigError, "shifted: base domain differs");
      return make_shifted(std::move(base), parse_real(field(p, "shift", fam), fam));
    }
    if (fam == "mixture") {
      std::vector<FunctionSpec> comps;
      for (const auto& c : field(p, "components", fam)) comps.push_back(function_from_json(c));
      require(!comps.empty() && comps.front().domain() == domain, ErrorCode::ConfigError,
              "mixture: component domain differs");
      return make_mixture(std::move(comps), parse_real_vector(field(p, "weights", fam), fam));
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::ConfigError, fam + ": " + e.what());
  }
  fail(ErrorCode::ConfigError, "unknown function family '" + fam + "'");
}

}  // namespace closefn
