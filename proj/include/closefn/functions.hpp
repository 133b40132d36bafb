#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "closefn/domain.hpp"
#include "closefn/error.hpp"

namespace closefn {

// Regularity metadata declared by a family. Values are exact for the
// family parameters, never estimated from samples.
struct RegularityInfo {
  std::optional<double> rho;       // strong convexity modulus over the domain
  std::optional<double> smooth_L;  // gradient Lipschitz constant
  std::optional<std::vector<double>> minimizer;
  bool is_smooth = false;
};

class FunctionSpec;
using FunctionPtr = std::shared_ptr<const FunctionSpec>;

namespace family {

// 1/2 x'Ax + b'x + c with A symmetric PSD, stored row-major.
struct Quadratic {
  std::vector<double> A;
  std::vector<double> b;
  double c = 0.0;
};

// s * |x - a|, one-dimensional.
struct ScaledAbs {
  double s = 1.0;
  double a = 0.0;
};

// max_k (slopes[k]' x + offsets[k]).
struct MaxAffine {
  std::vector<std::vector<double>> slopes;
  std::vector<double> offsets;
};

// Huber profile of the distance to `center`: r^2/(2 tau) for r <= tau,
// r - tau/2 beyond.
struct Huber {
  double tau = 1.0;
  std::vector<double> center;
};

// (1/m) sum_j log(1 + exp(-y_j x_j t)) + (mu/2) t^2, one-dimensional.
struct Logistic1d {
  std::vector<double> x;
  std::vector<double> y;
  double mu = 0.0;
};

// sum_i w_i ||x - z_i||_1. Piecewise linear; used for empirical and
// population absolute losses where a mixture of n terms would be O(n)
// per evaluation.
struct AbsSum {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

struct Shifted {
  FunctionPtr base;
  double shift = 0.0;
};

// sum_i weights[i] * components[i], weights on the simplex.
struct Mixture {
  std::vector<FunctionPtr> components;
  std::vector<double> weights;
};

}  // namespace family

namespace detail {

// Sorted coordinates of an AbsSum along one axis with prefix sums of the
// weights and of weight*coordinate, for O(log n) evaluation.
struct SortedAxis {
  std::vector<double> z;
  std::vector<double> cum_w;   // cum_w[k] = sum of first k weights
  std::vector<double> cum_wz;  // cum_wz[k] = sum of first k weight*z
};

inline double stable_log1pexp(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

inline double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace detail

class FunctionSpec {
 public:
  using Family = std::variant<family::Quadratic, family::ScaledAbs, family::MaxAffine,
                              family::Huber, family::Logistic1d, family::AbsSum,
                              family::Shifted, family::Mixture>;

  FunctionSpec(Family fam, BoxDomain domain) : family_(std::move(fam)), domain_(std::move(domain)) {
    validate();
    build_caches();
    regularity_ = derive_regularity();
  }

  std::string_view family_name() const {
    static constexpr std::string_view names[] = {"quadratic", "scaled_abs", "max_affine",
                                                 "huber",     "logistic_1d", "abs_sum",
                                                 "shifted",   "mixture"};
    return names[family_.index()];
  }

  const Family& family() const { return family_; }
  const BoxDomain& domain() const { return domain_; }
  std::size_t dim() const { return domain_.dim(); }
  const RegularityInfo& regularity() const { return regularity_; }
  bool is_smooth() const { return regularity_.is_smooth; }

  double evaluate(std::span<const double> x) const {
    require(domain_.contains(x), ErrorCode::OutOfDomain, "point outside function domain");
    return value(x);
  }

  // Unchecked evaluation; x must have length dim().
  double value(std::span<const double> x) const {
    return std::visit([&](const auto& f) { return eval(f, x); }, family_);
  }

  std::vector<double> gradient(std::span<const double> x) const {
    require(domain_.contains(x), ErrorCode::OutOfDomain, "point outside function domain");
    std::vector<double> g(dim(), 0.0);
    gradient_into(x, g);
    return g;
  }

  void gradient_into(std::span<const double> x, std::span<double> out) const {
    require(is_smooth(), ErrorCode::NonSmoothFunction,
            "family '" + std::string(family_name()) + "' has no gradient");
    std::fill(out.begin(), out.end(), 0.0);
    add_gradient(x, 1.0, out);
  }

  // Upper bound on the Lipschitz constant of the function over the domain.
  double lipschitz_bound() const {
    return std::visit([&](const auto& f) { return lipschitz(f); }, family_);
  }

  // Collapses quadratics, shifted quadratics and mixtures of them into a
  // single quadratic.
  std::optional<family::Quadratic> as_quadratic() const {
    return std::visit(
        [&](const auto& f) -> std::optional<family::Quadratic> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Quadratic>) {
            return f;
          } else if constexpr (std::is_same_v<T, family::Shifted>) {
            auto q = f.base->as_quadratic();
            if (q) q->c += f.shift;
            return q;
          } else if constexpr (std::is_same_v<T, family::Mixture>) {
            const std::size_t d = dim();
            family::Quadratic acc{std::vector<double>(d * d, 0.0), std::vector<double>(d, 0.0), 0.0};
            for (std::size_t i = 0; i < f.components.size(); ++i) {
              auto q = f.components[i]->as_quadratic();
              if (!q) return std::nullopt;
              const double w = f.weights[i];
              for (std::size_t k = 0; k < d * d; ++k) acc.A[k] += w * q->A[k];
              for (std::size_t k = 0; k < d; ++k) acc.b[k] += w * q->b[k];
              acc.c += w * q->c;
            }
            return acc;
          } else {
            return std::nullopt;
          }
        },
        family_);
  }

 private:
  // ---- evaluation ------------------------------------------------------

  double eval(const family::Quadratic& q, std::span<const double> x) const {
    const std::size_t d = x.size();
    double v = q.c;
    for (std::size_t i = 0; i < d; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < d; ++j) ax += q.A[i * d + j] * x[j];
      v += 0.5 * x[i] * ax + q.b[i] * x[i];
    }
    return v;
  }

  double eval(const family::ScaledAbs& f, std::span<const double> x) const {
    return f.s * std::abs(x[0] - f.a);
  }

  double eval(const family::MaxAffine& f, std::span<const double> x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.slopes.size(); ++k) {
      double v = f.offsets[k];
      for (std::size_t i = 0; i < x.size(); ++i) v += f.slopes[k][i] * x[i];
      best = std::max(best, v);
    }
    return best;
  }

  double eval(const family::Huber& f, std::span<const double> x) const {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - f.center[i]) * (x[i] - f.center[i]);
    const double r = std::sqrt(r2);
    return r <= f.tau ? r2 / (2.0 * f.tau) : r - 0.5 * f.tau;
  }

  double eval(const family::Logistic1d& f, std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < f.x.size(); ++j) s += detail::stable_log1pexp(-f.y[j] * f.x[j] * x[0]);
    return s / static_cast<double>(f.x.size()) + 0.5 * f.mu * x[0] * x[0];
  }

  double eval(const family::AbsSum&, std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& ax = abs_index_[i];
      const std::size_t n = ax.z.size();
      const std::size_t k = static_cast<std::size_t>(
          std::upper_bound(ax.z.begin(), ax.z.end(), x[i]) - ax.z.begin());
      const double left = x[i] * ax.cum_w[k] - ax.cum_wz[k];
      const double right = (ax.cum_wz[n] - ax.cum_wz[k]) - x[i] * (ax.cum_w[n] - ax.cum_w[k]);
      v += left + right;
    }
    return v;
  }

  double eval(const family::Shifted& f, std::span<const double> x) const {
    return f.base->value(x) + f.shift;
  }

  double eval(const family::Mixture& f, std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < f.components.size(); ++i) v += f.weights[i] * f.components[i]->value(x);
    return v;
  }

  // ---- gradients (smooth families only) ---------------------------------

  void add_gradient(std::span<const double> x, double scale, std::span<double> out) const {
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          const std::size_t d = x.size();
          if constexpr (std::is_same_v<T, family::Quadratic>) {
            for (std::size_t i = 0; i < d; ++i) {
              double g = f.b[i];
              for (std::size_t j = 0; j < d; ++j) g += f.A[i * d + j] * x[j];
              out[i] += scale * g;
            }
          } else if constexpr (std::is_same_v<T, family::Huber>) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) r2 += (x[i] - f.center[i]) * (x[i] - f.center[i]);
            const double r = std::sqrt(r2);
            const double denom = r <= f.tau ? f.tau : r;
            for (std::size_t i = 0; i < d; ++i) out[i] += scale * (x[i] - f.center[i]) / denom;
          } else if constexpr (std::is_same_v<T, family::Logistic1d>) {
            double g = 0.0;
            for (std::size_t j = 0; j < f.x.size(); ++j) {
              const double yx = f.y[j] * f.x[j];
              g -= yx * detail::sigmoid(-yx * x[0]);
            }
            out[0] += scale * (g / static_cast<double>(f.x.size()) + f.mu * x[0]);
          } else if constexpr (std::is_same_v<T, family::Shifted>) {
            f.base->add_gradient(x, scale, out);
          } else if constexpr (std::is_same_v<T, family::Mixture>) {
            for (std::size_t i = 0; i < f.components.size(); ++i)
              f.components[i]->add_gradient(x, scale * f.weights[i], out);
          } else {
            fail(ErrorCode::NonSmoothFunction, "family has no gradient");
          }
        },
        family_);
  }

  // ---- Lipschitz bounds over the domain -----------------------------------

  double lipschitz(const family::Quadratic& q) const {
    // ||Ax + b|| is convex, so its maximum over the box sits at a vertex.
    const std::size_t d = dim();
    double best = 0.0;
    std::vector<double> v(d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? domain_.upper(i) : domain_.lower(i);
      double n2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double g = q.b[i];
        for (std::size_t j = 0; j < d; ++j) g += q.A[i * d + j] * v[j];
        n2 += g * g;
      }
      best = std::max(best, std::sqrt(n2));
    }
    return best;
  }
  double lipschitz(const family::ScaledAbs& f) const { return f.s; }
  double lipschitz(const family::MaxAffine& f) const {
    double best = 0.0;
    for (const auto& a : f.slopes) {
      double n2 = 0.0;
      for (double v : a) n2 += v * v;
      best = std::max(best, std::sqrt(n2));
    }
    return best;
  }
  double lipschitz(const family::Huber&) const { return 1.0; }
  double lipschitz(const family::Logistic1d& f) const {
    double s = 0.0;
    for (double v : f.x) s += std::abs(v);
    const double reach = std::max(std::abs(domain_.lower(0)), std::abs(domain_.upper(0)));
    return s / static_cast<double>(f.x.size()) + f.mu * reach;
  }
  double lipschitz(const family::AbsSum& f) const {
    const double w = std::accumulate(f.weights.begin(), f.weights.end(), 0.0);
    return w * std::sqrt(static_cast<double>(dim()));
  }
  double lipschitz(const family::Shifted& f) const { return f.base->lipschitz_bound(); }
  double lipschitz(const family::Mixture& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.components.size(); ++i) s += f.weights[i] * f.components[i]->lipschitz_bound();
    return s;
  }

  // ---- construction -----------------------------------------------------

  void validate() const {
    const std::size_t d = dim();
    auto finite = [](double v) { return std::isfinite(v); };
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Quadratic>) {
            require(f.A.size() == d * d && f.b.size() == d, ErrorCode::InvalidArgument,
                    "quadratic: A must be d x d and b of length d");
            require(std::all_of(f.A.begin(), f.A.end(), finite) &&
                        std::all_of(f.b.begin(), f.b.end(), finite) && finite(f.c),
                    ErrorCode::InvalidArgument, "quadratic: non-finite parameter");
            double scale = 1.0;
            for (double v : f.A) scale = std::max(scale, std::abs(v));
            for (std::size_t i = 0; i < d; ++i)
              for (std::size_t j = 0; j < d; ++j)
                require(std::abs(f.A[i * d + j] - f.A[j * d + i]) <= 1e-12 * scale,
                        ErrorCode::InvalidArgument, "quadratic: A must be symmetric");
            const auto [lo, hi] = eigen_range(f.A, d);
            require(lo >= -1e-10 * std::max(1.0, hi), ErrorCode::InvalidArgument,
                    "quadratic: A must be positive semidefinite");
          } else if constexpr (std::is_same_v<T, family::ScaledAbs>) {
            require(d == 1, ErrorCode::InvalidArgument, "scaled_abs is one-dimensional");
            require(finite(f.s) && f.s > 0.0 && finite(f.a), ErrorCode::InvalidArgument,
                    "scaled_abs: s must be positive and a finite");
          } else if constexpr (std::is_same_v<T, family::MaxAffine>) {
            require(!f.slopes.empty() && f.slopes.size() == f.offsets.size(),
                    ErrorCode::InvalidArgument, "max_affine: need matching slopes/offsets");
            for (const auto& a : f.slopes)
              require(a.size() == d && std::all_of(a.begin(), a.end(), finite),
                      ErrorCode::InvalidArgument, "max_affine: slope length must equal d");
            require(std::all_of(f.offsets.begin(), f.offsets.end(), finite),
                    ErrorCode::InvalidArgument, "max_affine: non-finite offset");
          } else if constexpr (std::is_same_v<T, family::Huber>) {
            require(finite(f.tau) && f.tau > 0.0, ErrorCode::InvalidArgument, "huber: tau must be positive");
            require(f.center.size() == d && std::all_of(f.center.begin(), f.center.end(), finite),
                    ErrorCode::InvalidArgument, "huber: center length must equal d");
          } else if constexpr (std::is_same_v<T, family::Logistic1d>) {
            require(d == 1, ErrorCode::InvalidArgument, "logistic_1d is one-dimensional");
            require(!f.x.empty() && f.x.size() == f.y.size(), ErrorCode::InvalidArgument,
                    "logistic_1d: x and y must be nonempty and equal length");
            for (std::size_t j = 0; j < f.x.size(); ++j)
              require(finite(f.x[j]) && (f.y[j] == 1.0 || f.y[j] == -1.0), ErrorCode::InvalidArgument,
                      "logistic_1d: labels must be +1 or -1");
            require(finite(f.mu) && f.mu >= 0.0, ErrorCode::InvalidArgument, "logistic_1d: mu must be >= 0");
          } else if constexpr (std::is_same_v<T, family::AbsSum>) {
            require(!f.points.empty() && f.points.size() == f.weights.size(), ErrorCode::InvalidArgument,
                    "abs_sum: need matching points/weights");
            for (const auto& z : f.points)
              require(z.size() == d && std::all_of(z.begin(), z.end(), finite), ErrorCode::InvalidArgument,
                      "abs_sum: point length must equal d");
            for (double w : f.weights)
              require(finite(w) && w >= 0.0, ErrorCode::InvalidArgument, "abs_sum: weights must be >= 0");
          } else if constexpr (std::is_same_v<T, family::Shifted>) {
            require(f.base != nullptr && finite(f.shift), ErrorCode::InvalidArgument,
                    "shifted: need a base function and finite shift");
            require(f.base->domain() == domain_, ErrorCode::DomainMismatch, "shifted: base domain differs");
          } else if constexpr (std::is_same_v<T, family::Mixture>) {
            require(!f.components.empty() && f.components.size() == f.weights.size(),
                    ErrorCode::InvalidArgument, "mixture: need matching components/weights");
            double s = 0.0;
            for (std::size_t i = 0; i < f.components.size(); ++i) {
              require(f.components[i] != nullptr, ErrorCode::InvalidArgument, "mixture: null component");
              require(f.components[i]->domain() == domain_, ErrorCode::DomainMismatch,
                      "mixture: component domain differs");
              require(finite(f.weights[i]) && f.weights[i] >= 0.0 && f.weights[i] <= 1.0,
                      ErrorCode::InvalidWeights, "mixture: weights must lie in [0, 1]");
              s += f.weights[i];
            }
            require(std::abs(s - 1.0) <= 1e-12, ErrorCode::InvalidWeights, "mixture: weights must sum to 1");
          }
        },
        family_);
  }

  void build_caches() {
    if (const auto* f = std::get_if<family::AbsSum>(&family_)) {
      abs_index_.resize(dim());
      for (std::size_t i = 0; i < dim(); ++i) {
        std::vector<std::size_t> order(f->points.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f->points[a][i] < f->points[b][i]; });
        auto& ax = abs_index_[i];
        ax.z.resize(order.size());
        ax.cum_w.assign(order.size() + 1, 0.0);
        ax.cum_wz.assign(order.size() + 1, 0.0);
        for (std::size_t k = 0; k < order.size(); ++k) {
          const double z = f->points[order[k]][i], w = f->weights[order[k]];
          ax.z[k] = z;
          ax.cum_w[k + 1] = ax.cum_w[k] + w;
          ax.cum_wz[k + 1] = ax.cum_wz[k] + w * z;
        }
      }
    }
  }

  static std::pair<double, double> eigen_range(const std::vector<double>& A, std::size_t d) {
    Eigen::MatrixXd M(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) M(i, j) = 0.5 * (A[i * d + j] + A[j * d + i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }

  // Minimizer of a strictly convex quadratic over the box: enumerate the
  // 3^d active-set patterns (free / at lower / at upper) and return the
  // one satisfying the KKT conditions.
  std::vector<double> box_qp_minimizer(const family::Quadratic& q) const {
    const std::size_t d = dim();
    std::size_t patterns = 1;
    for (std::size_t i = 0; i < d; ++i) patterns *= 3;
    std::vector<double> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < patterns; ++p) {
      std::vector<int> status(d);
      std::size_t code = p;
      bool skip = false;
      for (std::size_t i = 0; i < d; ++i) {
        status[i] = static_cast<int>(code % 3);
        code /= 3;
        if (domain_.lower(i) == domain_.upper(i) && status[i] == 0) skip = true;
      }
      if (skip) continue;
      std::vector<double> x(d, 0.0);
      std::vector<std::size_t> freeIdx;
      for (std::size_t i = 0; i < d; ++i) {
        if (status[i] == 0) freeIdx.push_back(i);
        else x[i] = status[i] == 1 ? domain_.lower(i) : domain_.upper(i);
      }
      if (!freeIdx.empty()) {
        const std::size_t m = freeIdx.size();
        Eigen::MatrixXd H(m, m);
        Eigen::VectorXd rhs(m);
        for (std::size_t a = 0; a < m; ++a) {
          double r = -q.b[freeIdx[a]];
          for (std::size_t j = 0; j < d; ++j)
            if (status[j] != 0) r -= q.A[freeIdx[a] * d + j] * x[j];
          rhs(a) = r;
          for (std::size_t c = 0; c < m; ++c) H(a, c) = q.A[freeIdx[a] * d + freeIdx[c]];
        }
        const Eigen::VectorXd sol = H.ldlt().solve(rhs);
        for (std::size_t a = 0; a < m; ++a) x[freeIdx[a]] = sol(a);
      }
      if (!domain_.contains(x, 1e-12)) continue;
      x = domain_.project(x);
      bool kkt = true;
      for (std::size_t i = 0; i < d && kkt; ++i) {
        if (domain_.lower(i) == domain_.upper(i)) continue;
        double g = q.b[i];
        for (std::size_t j = 0; j < d; ++j) g += q.A[i * d + j] * x[j];
        if (status[i] == 1 && g < -1e-10) kkt = false;
        if (status[i] == 2 && g > 1e-10) kkt = false;
      }
      const double v = eval(q, x);
      if (kkt && v < best_val) {
        best_val = v;
        best = x;
      }
    }
    return best;
  }

  // Minimizer of a smooth, strongly convex function: bisection on the
  // derivative in 1-D, projected gradient descent otherwise.
  std::vector<double> smooth_minimizer(double rho, double L) const {
    const std::size_t d = dim();
    std::vector<double> g(d);
    if (d == 1) {
      double lo = domain_.lower(0), hi = domain_.upper(0);
      if (lo == hi) return {lo};
      auto deriv = [&](double t) {
        const double p[1] = {t};
        g[0] = 0.0;
        add_gradient(p, 1.0, g);
        return g[0];
      };
      if (deriv(lo) >= 0.0) return {lo};
      if (deriv(hi) <= 0.0) return {hi};
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (deriv(mid) > 0.0 ? hi : lo) = mid;
      }
      return {0.5 * (lo + hi)};
    }
    std::vector<double> x = domain_.center();
    const double step = 1.0 / L;
    const int max_iter = static_cast<int>(std::min(2e6, 50.0 * L / rho + 1000.0));
    for (int it = 0; it < max_iter; ++it) {
      std::fill(g.begin(), g.end(), 0.0);
      add_gradient(x, 1.0, g);
      std::vector<double> y(d);
      for (std::size_t i = 0; i < d; ++i) y[i] = x[i] - step * g[i];
      y = domain_.project(y);
      double move = 0.0;
      for (std::size_t i = 0; i < d; ++i) move = std::max(move, std::abs(y[i] - x[i]));
      x = std::move(y);
      if (move <= 1e-15) break;
    }
    return x;
  }

  RegularityInfo derive_regularity() const {
    RegularityInfo info;
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Quadratic>) {
            info.is_smooth = true;
            const auto [lo, hi] = eigen_range(f.A, dim());
            if (hi > 0.0) info.smooth_L = hi;
            if (lo > 1e-12 * std::max(1.0, hi)) info.rho = lo;
          } else if constexpr (std::is_same_v<T, family::ScaledAbs>) {
            info.minimizer = std::vector<double>{std::clamp(f.a, domain_.lower(0), domain_.upper(0))};
          } else if constexpr (std::is_same_v<T, family::Huber>) {
            info.is_smooth = true;
            info.smooth_L = 1.0 / f.tau;
            info.minimizer = domain_.project(f.center);
          } else if constexpr (std::is_same_v<T, family::Logistic1d>) {
            info.is_smooth = true;
            double s = 0.0;
            for (double v : f.x) s += v * v;
            info.smooth_L = f.mu + 0.25 * s / static_cast<double>(f.x.size());
            if (f.mu > 0.0) info.rho = f.mu;
          } else if constexpr (std::is_same_v<T, family::Shifted>) {
            info = f.base->regularity();
          } else if constexpr (std::is_same_v<T, family::Mixture>) {
            bool smooth = true, all_L = true;
            double rho = 0.0, L = 0.0;
            for (std::size_t i = 0; i < f.components.size(); ++i) {
              const auto& r = f.components[i]->regularity();
              smooth = smooth && r.is_smooth;
              if (r.rho) rho += f.weights[i] * *r.rho;
              if (r.smooth_L) L += f.weights[i] * *r.smooth_L;
              else if (!f.components[i]->as_quadratic()) all_L = false;
            }
            info.is_smooth = smooth;
            if (smooth && all_L && L > 0.0) info.smooth_L = L;
            if (rho > 0.0) info.rho = rho;
          }
          // max_affine, abs_sum: convex, non-smooth, no declared constants.
        },
        family_);
    if (!info.minimizer && info.rho) {
      if (auto q = as_quadratic()) {
        info.minimizer = box_qp_minimizer(*q);
      } else if (info.is_smooth && info.smooth_L) {
        info.minimizer = smooth_minimizer(*info.rho, *info.smooth_L);
      }
    }
    return info;
  }

  Family family_;
  BoxDomain domain_;
  RegularityInfo regularity_;
  std::vector<detail::SortedAxis> abs_index_;
};

// ---- constructors ---------------------------------------------------------

inline FunctionSpec make_quadratic(std::vector<double> A, std::vector<double> b, double c,
                                   const BoxDomain& domain) {
  return FunctionSpec(family::Quadratic{std::move(A), std::move(b), c}, domain);
}

// curvature * ||x - center||^2 / 2 + offset.
inline FunctionSpec make_isotropic_quadratic(double curvature, std::span<const double> center,
                                             const BoxDomain& domain, double offset = 0.0) {
  const std::size_t d = domain.dim();
  std::vector<double> A(d * d, 0.0), b(d);
  double c = offset;
  for (std::size_t i = 0; i < d; ++i) {
    A[i * d + i] = curvature;
    b[i] = -curvature * center[i];
    c += 0.5 * curvature * center[i] * center[i];
  }
  return make_quadratic(std::move(A), std::move(b), c, domain);
}

inline FunctionSpec make_scaled_abs(double s, double a, const BoxDomain& domain) {
  return FunctionSpec(family::ScaledAbs{s, a}, domain);
}

inline FunctionSpec make_max_affine(std::vector<std::vector<double>> slopes, std::vector<double> offsets,
                                    const BoxDomain& domain) {
  return FunctionSpec(family::MaxAffine{std::move(slopes), std::move(offsets)}, domain);
}

inline FunctionSpec make_huber(double tau, std::vector<double> center, const BoxDomain& domain) {
  return FunctionSpec(family::Huber{tau, std::move(center)}, domain);
}

inline FunctionSpec make_logistic_1d(std::vector<double> x, std::vector<double> y, double mu,
                                     const BoxDomain& domain) {
  return FunctionSpec(family::Logistic1d{std::move(x), std::move(y), mu}, domain);
}

inline FunctionSpec make_abs_sum(std::vector<std::vector<double>> points, std::vector<double> weights,
                                 const BoxDomain& domain) {
  return FunctionSpec(family::AbsSum{std::move(points), std::move(weights)}, domain);
}

inline FunctionSpec make_shifted(FunctionSpec base, double shift) {
  const BoxDomain domain = base.domain();
  return FunctionSpec(family::Shifted{std::make_shared<const FunctionSpec>(std::move(base)), shift}, domain);
}

inline FunctionSpec make_mixture(std::vector<FunctionSpec> components, std::vector<double> weights) {
  require(!components.empty(), ErrorCode::InvalidArgument, "mixture: need at least one component");
  const BoxDomain domain = components.front().domain();
  std::vector<FunctionPtr> ptrs;
  ptrs.reserve(components.size());
  for (auto& c : components) ptrs.push_back(std::make_shared<const FunctionSpec>(std::move(c)));
  return FunctionSpec(family::Mixture{std::move(ptrs), std::move(weights)}, domain);
}

// Central differences with h = eps^(1/3) * max(1, |x_i|); one-sided within
// h of the boundary.
inline std::vector<double> finite_difference_gradient(const FunctionSpec& f, std::span<const double> x) {
  const double base_h = std::cbrt(std::numeric_limits<double>::epsilon());
  const auto& dom = f.domain();
  std::vector<double> g(x.size(), 0.0), p(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (dom.lower(i) == dom.upper(i)) continue;
    const double h = base_h * std::max(1.0, std::abs(x[i]));
    const bool room_lo = x[i] - h >= dom.lower(i);
    const bool room_hi = x[i] + h <= dom.upper(i);
    const double orig = p[i];
    if (room_lo && room_hi) {
      p[i] = orig + h;
      const double fp = f.value(p);
      p[i] = orig - h;
      const double fm = f.value(p);
      g[i] = (fp - fm) / (2.0 * h);
    } else if (room_hi) {
      p[i] = orig + h;
      const double fp = f.value(p);
      p[i] = orig;
      g[i] = (fp - f.value(p)) / h;
    } else {
      p[i] = orig - h;
      const double fm = f.value(p);
      p[i] = orig;
      g[i] = (f.value(p) - fm) / h;
    }
    p[i] = orig;
  }
  return g;
}

}  // namespace closefn
