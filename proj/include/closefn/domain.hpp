#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "closefn/error.hpp"

namespace closefn {

inline constexpr std::size_t kMaxDimension = 3;

// Axis-aligned closed box [lower, upper] in R^d, 1 <= d <= 3.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    require(!lower_.empty() && lower_.size() <= kMaxDimension, ErrorCode::InvalidArgument,
            "box dimension must be in [1, 3], got " + std::to_string(lower_.size()));
    require(lower_.size() == upper_.size(), ErrorCode::InvalidArgument,
            "box lower/upper length mismatch");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]), ErrorCode::InvalidArgument,
              "box bounds must be finite");
      require(lower_[i] <= upper_[i], ErrorCode::InvalidArgument,
              "box lower bound exceeds upper bound on axis " + std::to_string(i));
    }
  }

  static BoxDomain interval(double lo, double hi) { return BoxDomain({lo}, {hi}); }

  static BoxDomain cube(std::size_t d, double lo, double hi) {
    return BoxDomain(std::vector<double>(d, lo), std::vector<double>(d, hi));
  }

  std::size_t dim() const { return lower_.size(); }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }

  double diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += (upper_[i] - lower_[i]) * (upper_[i] - lower_[i]);
    return std::sqrt(s);
  }

  std::vector<double> center() const {
    std::vector<double> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower_[i] + upper_[i]);
    return c;
  }

  bool contains(std::span<const double> p, double tol = 1e-12) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(p[i] >= lower_[i] - tol && p[i] <= upper_[i] + tol)) return false;
    return true;
  }

  // Euclidean projection onto the box.
  std::vector<double> project(std::span<const double> p) const {
    std::vector<double> q(p.begin(), p.end());
    for (std::size_t i = 0; i < dim(); ++i) q[i] = std::min(std::max(q[i], lower_[i]), upper_[i]);
    return q;
  }

  bool operator==(const BoxDomain&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Cartesian product of uniformly spaced coordinates, both endpoints
// included. Points are stored row-major in lexicographic index order
// (first axis slowest).
class Grid {
 public:
  Grid(BoxDomain domain, std::vector<std::size_t> counts)
      : domain_(std::move(domain)), counts_(std::move(counts)) {
    require(counts_.size() == domain_.dim(), ErrorCode::InvalidArgument,
            "grid counts must match domain dimension");
    axes_.resize(domain_.dim());
    std::size_t total = 1;
    for (std::size_t i = 0; i < domain_.dim(); ++i) {
      const double lo = domain_.lower(i), hi = domain_.upper(i);
      if (lo == hi) {
        require(counts_[i] == 1, ErrorCode::InvalidArgument,
                "degenerate axis " + std::to_string(i) + " requires count 1");
        axes_[i] = {lo};
      } else {
        require(counts_[i] >= 2, ErrorCode::InvalidArgument,
                "grid count must be >= 2 on axis " + std::to_string(i));
        axes_[i].resize(counts_[i]);
        const double m = static_cast<double>(counts_[i] - 1);
        for (std::size_t k = 0; k < counts_[i]; ++k)
          axes_[i][k] = lo + (hi - lo) * (static_cast<double>(k) / m);
        axes_[i].back() = hi;
      }
      total *= counts_[i];
    }
    const std::size_t d = domain_.dim();
    coords_.resize(total * d);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t p = 0; p < total; ++p) {
      for (std::size_t i = 0; i < d; ++i) coords_[p * d + i] = axes_[i][idx[i]];
      for (std::size_t i = d; i-- > 0;) {
        if (++idx[i] < counts_[i]) break;
        idx[i] = 0;
      }
    }
  }

  // 2049 points in 1-D, 257 per axis in 2-D, 65 per axis in 3-D.
  static Grid make_default(const BoxDomain& domain) {
    static constexpr std::size_t kDefault[] = {0, 2049, 257, 65};
    return make_uniform(domain, kDefault[domain.dim()]);
  }

  static Grid make_uniform(const BoxDomain& domain, std::size_t per_axis) {
    std::vector<std::size_t> counts(domain.dim());
    for (std::size_t i = 0; i < domain.dim(); ++i)
      counts[i] = domain.lower(i) == domain.upper(i) ? 1 : per_axis;
    return Grid(domain, std::move(counts));
  }

  const BoxDomain& domain() const { return domain_; }
  std::span<const std::size_t> counts() const { return counts_; }
  std::size_t dim() const { return domain_.dim(); }
  std::size_t size() const { return coords_.size() / domain_.dim(); }
  std::span<const double> axis(std::size_t i) const { return axes_[i]; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }

  double cell_width(std::size_t axis) const {
    return counts_[axis] <= 1 ? 0.0
                              : (domain_.upper(axis) - domain_.lower(axis)) /
                                    static_cast<double>(counts_[axis] - 1);
  }

  double cell_diagonal() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += cell_width(i) * cell_width(i);
    return std::sqrt(s);
  }

  // Halves the spacing; every point of this grid is a point of the result.
  Grid refined() const {
    std::vector<std::size_t> c(counts_.begin(), counts_.end());
    for (auto& k : c)
      if (k > 1) k = 2 * (k - 1) + 1;
    return Grid(domain_, std::move(c));
  }

 private:
  BoxDomain domain_;
  std::vector<std::size_t> counts_;
  std::vector<std::vector<double>> axes_;
  std::vector<double> coords_;
};

}  // namespace closefn
