#ifndef VML_NORMED_SPACE_HPP
#define VML_NORMED_SPACE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vml/errors.hpp"
#include "vml/measure_core.hpp"

namespace vml {

using Vector = std::vector<double>;

enum class NormKind { L1, L2, LInf };

inline std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    case NormKind::LInf: return "LINF";
  }
  return "?";
}

/// Largest dimension for which the 2^d dual extreme points of an L1-kind
/// norm are materialized.
inline constexpr std::size_t kMaxL1ExtremeDim = 20;

/// Weighted l1 / l2 / l-infinity norm on R^d: the kind applied to
/// (w_j v_j)_j. The pairing with dual vectors is always the plain
/// Euclidean one, so all weighting lives here.
class NormSpec {
 public:
  NormSpec(NormKind kind, std::vector<double> scale)
      : kind_(kind), scale_(std::move(scale)) {
    if (scale_.empty()) throw InvalidArgument("value space needs dim >= 1");
    for (double w : scale_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("norm scale entries must be positive");
      }
    }
  }

  static NormSpec unweighted(NormKind kind, std::size_t dim) {
    return NormSpec(kind, std::vector<double>(dim, 1.0));
  }

  /// Discretized L1(mu): the value space of the canonical examples.
  static NormSpec l1_of(const MeasureSpace& space) {
    return NormSpec(NormKind::L1, Vector(space.weights().begin(), space.weights().end()));
  }

  std::size_t dim() const noexcept { return scale_.size(); }
  NormKind kind() const noexcept { return kind_; }
  std::span<const double> scale() const noexcept { return scale_; }
  double scale(std::size_t j) const { return scale_[j]; }
  bool polyhedral() const noexcept { return kind_ != NormKind::L2; }

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  NormKind kind_;
  std::vector<double> scale_;
};

/// Element of X* in coordinates.
struct DualVector {
  std::vector<double> coords;

  DualVector() = default;
  explicit DualVector(std::vector<double> c) : coords(std::move(c)) {}
  DualVector(std::initializer_list<double> c) : coords(c) {}

  static DualVector coordinate(std::size_t dim, std::size_t j) {
    std::vector<double> c(dim, 0.0);
    c.at(j) = 1.0;
    return DualVector(std::move(c));
  }

  std::size_t size() const noexcept { return coords.size(); }
  double operator[](std::size_t j) const { return coords[j]; }

  friend bool operator==(const DualVector&, const DualVector&) = default;
};

inline double pair(std::span<const double> v, const DualVector& xs) {
  detail::require_dim(xs.size(), v.size(), "pair");
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * xs.coords[j];
  return s;
}

namespace detail {

inline double weighted_norm(NormKind kind, std::span<const double> w,
                            std::span<const double> v, bool inverse) {
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = std::abs(inverse ? v[j] / w[j] : v[j] * w[j]);
    switch (kind) {
      case NormKind::L1: acc += x; break;
      case NormKind::L2: acc += x * x; break;
      case NormKind::LInf: acc = acc < x ? x : acc; break;
    }
  }
  return kind == NormKind::L2 ? std::sqrt(acc) : acc;
}

inline NormKind dual_kind(NormKind k) {
  switch (k) {
    case NormKind::L1: return NormKind::LInf;
    case NormKind::LInf: return NormKind::L1;
    case NormKind::L2: return NormKind::L2;
  }
  return k;
}

}  // namespace detail

inline double norm(const NormSpec& x, std::span<const double> v) {
  detail::require_dim(v.size(), x.dim(), "norm");
  return detail::weighted_norm(x.kind(), x.scale(), v, false);
}

/// Norm of x* in X* under the plain pairing: the dual kind with inverse
/// weights.
inline double dual_norm(const NormSpec& x, const DualVector& xs) {
  detail::require_dim(xs.size(), x.dim(), "dual_norm");
  return detail::weighted_norm(detail::dual_kind(x.kind()), x.scale(), xs.coords, true);
}

/// The norm of X* written as a NormSpec on coordinates.
inline NormSpec dual_spec(const NormSpec& x) {
  std::vector<double> inv(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) inv[j] = 1.0 / x.scale(j);
  return NormSpec(detail::dual_kind(x.kind()), std::move(inv));
}

/// Extreme points of the dual unit ball.
///
/// LINF-kind X: the 2d points +-w_j e_j. L1-kind X: the 2^d sign vectors
/// (+-w_1, ..., +-w_d). With `half` set only one point of every +-pair is
/// returned (the one whose first nonzero coordinate is positive), which is
/// enough for any symmetric supremum.
inline std::vector<DualVector> dual_extreme_points(const NormSpec& x, bool half = false) {
  const std::size_t d = x.dim();
  std::vector<DualVector> out;
  switch (x.kind()) {
    case NormKind::L2:
      throw NotPolyhedral("dual ball of an L2-kind norm has no finite extreme-point set");
    case NormKind::LInf:
      for (std::size_t j = 0; j < d; ++j) {
        DualVector e = DualVector::coordinate(d, j);
        e.coords[j] = x.scale(j);
        out.push_back(e);
        if (!half) {
          e.coords[j] = -x.scale(j);
          out.push_back(std::move(e));
        }
      }
      return out;
    case NormKind::L1: {
      if (d > kMaxL1ExtremeDim) {
        throw CapacityExceeded("L1-kind dual extreme points limited to d <= " +
                               std::to_string(kMaxL1ExtremeDim));
      }
      const std::uint64_t count = std::uint64_t{1} << (half ? d - 1 : d);
      out.reserve(count);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<double> c(d);
        for (std::size_t j = 0; j < d; ++j) {
          // In half mode bit j drives coordinate j+1 and coordinate 0 stays +.
          const bool negative = half ? (j > 0 && ((mask >> (j - 1)) & 1u))
                                     : ((mask >> j) & 1u);
          c[j] = negative ? -x.scale(j) : x.scale(j);
        }
        out.emplace_back(std::move(c));
      }
      return out;
    }
  }
  return out;
}

}  // namespace vml

#endif  // VML_NORMED_SPACE_HPP
