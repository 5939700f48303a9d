#ifndef VML_MEASURE_CORE_HPP
#define VML_MEASURE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vml/errors.hpp"

namespace vml {

/// Finite measure space: atoms 0..n-1 with strictly positive masses.
/// Every subset of atoms is measurable.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights)
      : weights_(std::move(weights)) {
    if (weights_.empty()) {
      throw InvalidArgument("measure space needs at least one atom");
    }
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("weights must be positive");
      }
    }
    total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  /// n atoms of mass total/n each.
  static MeasureSpace uniform(std::size_t n, double total = 1.0) {
    if (n == 0) throw InvalidArgument("measure space needs at least one atom");
    return MeasureSpace(std::vector<double>(n, total / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total() const noexcept { return total_; }
  double min_weight() const {
    return *std::min_element(weights_.begin(), weights_.end());
  }

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Subset of atoms stored as a dense membership mask.
class MeasurableSet {
 public:
  MeasurableSet() = default;
  explicit MeasurableSet(std::vector<bool> membership)
      : membership_(std::move(membership)) {}

  static MeasurableSet empty(std::size_t n) {
    return MeasurableSet(std::vector<bool>(n, false));
  }
  static MeasurableSet full(std::size_t n) {
    return MeasurableSet(std::vector<bool>(n, true));
  }
  static MeasurableSet of(std::size_t n, std::initializer_list<std::size_t> atoms) {
    return of(n, std::span<const std::size_t>(atoms.begin(), atoms.size()));
  }
  static MeasurableSet of(std::size_t n, std::span<const std::size_t> atoms) {
    std::vector<bool> mask(n, false);
    for (std::size_t i : atoms) {
      if (i >= n) throw InvalidArgument("atom index out of range");
      mask[i] = true;
    }
    return MeasurableSet(std::move(mask));
  }

  std::size_t size() const noexcept { return membership_.size(); }
  bool contains(std::size_t i) const { return membership_[i]; }
  void set(std::size_t i, bool in) { membership_[i] = in; }

  std::size_t count() const {
    return static_cast<std::size_t>(
        std::count(membership_.begin(), membership_.end(), true));
  }

  MeasurableSet complement() const {
    std::vector<bool> mask(membership_);
    mask.flip();
    return MeasurableSet(std::move(mask));
  }

  bool subset_of(const MeasurableSet& other) const {
    detail::require_dim(other.size(), size(), "MeasurableSet::subset_of");
    for (std::size_t i = 0; i < size(); ++i) {
      if (membership_[i] && !other.membership_[i]) return false;
    }
    return true;
  }

  const std::vector<bool>& mask() const noexcept { return membership_; }

  friend bool operator==(const MeasurableSet&, const MeasurableSet&) = default;

 private:
  std::vector<bool> membership_;
};

inline double mass(const MeasureSpace& space, const MeasurableSet& a) {
  detail::require_dim(a.size(), space.size(), "mass");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.contains(i)) total += space.weight(i);
  }
  return total;
}

/// Real coefficient per atom. Stands for integrands f, Koethe-dual
/// elements g, Radon-Nikodym densities and the sign functions h_A alike.
class SimpleFunction {
 public:
  SimpleFunction() = default;
  explicit SimpleFunction(std::vector<double> coeffs)
      : coeffs_(std::move(coeffs)) {}
  SimpleFunction(std::initializer_list<double> coeffs) : coeffs_(coeffs) {}

  static SimpleFunction zero(std::size_t n) {
    return SimpleFunction(std::vector<double>(n, 0.0));
  }
  static SimpleFunction constant(std::size_t n, double c) {
    return SimpleFunction(std::vector<double>(n, c));
  }
  static SimpleFunction indicator(const MeasurableSet& a) {
    std::vector<double> c(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a.contains(i) ? 1.0 : 0.0;
    return SimpleFunction(std::move(c));
  }
  static SimpleFunction indicator(std::size_t n, std::size_t atom) {
    std::vector<double> c(n, 0.0);
    c.at(atom) = 1.0;
    return SimpleFunction(std::move(c));
  }

  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// Pointwise product.
  SimpleFunction times(const SimpleFunction& other) const {
    detail::require_dim(other.size(), size(), "SimpleFunction::times");
    std::vector<double> c(size());
    for (std::size_t i = 0; i < size(); ++i) c[i] = coeffs_[i] * other.coeffs_[i];
    return SimpleFunction(std::move(c));
  }

  SimpleFunction scaled(double s) const {
    std::vector<double> c(coeffs_);
    for (double& x : c) x *= s;
    return SimpleFunction(std::move(c));
  }

  /// Integral against the base measure: sum_i f_i mu_i.
  double integral(const MeasureSpace& space) const {
    detail::require_dim(size(), space.size(), "SimpleFunction::integral");
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += coeffs_[i] * space.weight(i);
    return s;
  }

  /// Norm in L1 of the base measure.
  double l1_norm(const MeasureSpace& space) const {
    detail::require_dim(size(), space.size(), "SimpleFunction::l1_norm");
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += std::abs(coeffs_[i]) * space.weight(i);
    return s;
  }

  double sup_norm() const {
    double s = 0.0;
    for (double x : coeffs_) s = std::max(s, std::abs(x));
    return s;
  }

  friend bool operator==(const SimpleFunction&, const SimpleFunction&) = default;

 private:
  std::vector<double> coeffs_;
};

/// h_A = chi_A - chi_{A^c}.
inline SimpleFunction sign_function(const MeasurableSet& a) {
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a.contains(i) ? 1.0 : -1.0;
  return SimpleFunction(std::move(c));
}

/// Finite partition of the atoms, stored as an atom -> block map.
class Partition {
 public:
  Partition(std::vector<std::size_t> block_of, std::size_t blocks)
      : block_of_(std::move(block_of)), blocks_(blocks) {
    std::vector<bool> seen(blocks_, false);
    for (std::size_t b : block_of_) {
      if (b >= blocks_) throw InvalidArgument("block index out of range");
      seen[b] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw InvalidArgument("every block of a partition must be nonempty");
    }
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> b(n);
    std::iota(b.begin(), b.end(), std::size_t{0});
    return Partition(std::move(b), n);
  }

  static Partition trivial(std::size_t n) {
    return Partition(std::vector<std::size_t>(n, 0), n == 0 ? 0 : 1);
  }

  /// Builds from explicit blocks; the blocks must cover 0..n-1 exactly once.
  static Partition from_blocks(std::size_t n,
                               const std::vector<std::vector<std::size_t>>& blocks) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> b(n, unset);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      for (std::size_t i : blocks[k]) {
        if (i >= n) throw InvalidArgument("atom index out of range");
        if (b[i] != unset) throw InvalidArgument("atom listed in two blocks");
        b[i] = k;
      }
    }
    if (std::find(b.begin(), b.end(), unset) != b.end()) {
      throw InvalidArgument("blocks do not cover every atom");
    }
    return Partition(std::move(b), blocks.size());
  }

  std::size_t size() const noexcept { return block_of_.size(); }
  std::size_t num_blocks() const noexcept { return blocks_; }
  std::size_t block_of(std::size_t atom) const { return block_of_[atom]; }
  std::span<const std::size_t> block_map() const noexcept { return block_of_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t i = 0; i < block_of_.size(); ++i) out[block_of_[i]].push_back(i);
    return out;
  }

  MeasurableSet block_set(std::size_t block) const {
    std::vector<bool> mask(size(), false);
    for (std::size_t i = 0; i < size(); ++i) mask[i] = block_of_[i] == block;
    return MeasurableSet(std::move(mask));
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> block_of_;
  std::size_t blocks_ = 0;
};

/// mu(B) for every block B.
inline std::vector<double> block_masses(const MeasureSpace& space, const Partition& p) {
  detail::require_dim(p.size(), space.size(), "block_masses");
  std::vector<double> m(p.num_blocks(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) m[p.block_of(i)] += space.weight(i);
  return m;
}

/// True iff q refines p, i.e. every block of q lies inside a block of p.
inline bool refine(const Partition& p, const Partition& q) {
  detail::require_dim(q.size(), p.size(), "refine");
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(q.num_blocks(), unset);
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::size_t& slot = parent[q.block_of(i)];
    if (slot == unset) {
      slot = p.block_of(i);
    } else if (slot != p.block_of(i)) {
      return false;
    }
  }
  return true;
}

/// P_0, ..., P_levels where P_k splits the atoms into 2^k contiguous blocks
/// of equal cardinality.
inline std::vector<Partition> dyadic_chain(std::size_t levels, const MeasureSpace& space) {
  const std::size_t n = space.size();
  if (levels >= 63 || n % (std::size_t{1} << levels) != 0) {
    throw InvalidArgument("dyadic chain with " + std::to_string(levels) +
                          " levels needs n divisible by 2^levels (n = " +
                          std::to_string(n) + ")");
  }
  std::vector<Partition> chain;
  chain.reserve(levels + 1);
  for (std::size_t k = 0; k <= levels; ++k) {
    const std::size_t blocks = std::size_t{1} << k;
    const std::size_t width = n / blocks;
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = i / width;
    chain.emplace_back(std::move(b), blocks);
  }
  return chain;
}

}  // namespace vml

#endif  // VML_MEASURE_CORE_HPP
