#ifndef VML_VECTOR_MEASURE_HPP
#define VML_VECTOR_MEASURE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vml/errors.hpp"
#include "vml/measure_core.hpp"
#include "vml/normed_space.hpp"
#include "vml/rng.hpp"

namespace vml {

/// Absolute tolerance under which a scalar mass or an atom is treated as zero.
inline constexpr double kZeroTol = 1e-12;

/// X-valued measure on a finite space, fixed by its atoms m_i = m({i}).
/// Atoms are stored row-major: atom i occupies [i*d, (i+1)*d).
class VectorMeasure {
 public:
  VectorMeasure(MeasureSpace space, NormSpec x, std::vector<double> atoms)
      : space_(std::move(space)), x_(std::move(x)), atoms_(std::move(atoms)) {
    detail::require_dim(atoms_.size(), space_.size() * x_.dim(), "VectorMeasure atoms");
  }

  static VectorMeasure zero(MeasureSpace space, NormSpec x) {
    const std::size_t len = space.size() * x.dim();
    return VectorMeasure(std::move(space), std::move(x), std::vector<double>(len, 0.0));
  }

  /// m(A) = chi_A in discretized L1(mu); its integration map is the identity.
  static VectorMeasure indicator(const MeasureSpace& space) {
    const std::size_t n = space.size();
    std::vector<double> atoms(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) atoms[i * n + i] = 1.0;
    return VectorMeasure(space, NormSpec::l1_of(space), std::move(atoms));
  }

  /// m(A) = mu(A) g.
  static VectorMeasure rank_one(const MeasureSpace& space, const NormSpec& x,
                                std::span<const double> g) {
    detail::require_dim(g.size(), x.dim(), "VectorMeasure::rank_one");
    std::vector<double> atoms(space.size() * x.dim());
    for (std::size_t i = 0; i < space.size(); ++i) {
      for (std::size_t j = 0; j < x.dim(); ++j) atoms[i * x.dim() + j] = space.weight(i) * g[j];
    }
    return VectorMeasure(space, x, std::move(atoms));
  }

  const MeasureSpace& space() const noexcept { return space_; }
  const NormSpec& value_space() const noexcept { return x_; }
  std::size_t num_atoms() const noexcept { return space_.size(); }
  std::size_t dim() const noexcept { return x_.dim(); }

  std::span<const double> atom(std::size_t i) const {
    return std::span<const double>(atoms_).subspan(i * x_.dim(), x_.dim());
  }
  std::span<double> atom(std::size_t i) {
    return std::span<double>(atoms_).subspan(i * x_.dim(), x_.dim());
  }
  std::span<const double> atoms() const noexcept { return atoms_; }

  bool atom_is_zero(std::size_t i) const {
    for (double v : atom(i)) {
      if (std::abs(v) > kZeroTol) return false;
    }
    return true;
  }

  friend bool operator==(const VectorMeasure&, const VectorMeasure&) = default;

 private:
  MeasureSpace space_;
  NormSpec x_;
  std::vector<double> atoms_;
};

inline void require_compatible(const VectorMeasure& a, const VectorMeasure& b,
                               const char* what) {
  if (!(a.space() == b.space()) || !(a.value_space() == b.value_space())) {
    throw DimensionMismatch(std::string(what) +
                            ": measures live on different spaces");
  }
}

/// m(A) = sum of the atoms in A.
inline Vector set_value(const VectorMeasure& m, const MeasurableSet& a) {
  detail::require_dim(a.size(), m.num_atoms(), "set_value");
  Vector out(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    if (!a.contains(i)) continue;
    const auto mi = m.atom(i);
    for (std::size_t j = 0; j < m.dim(); ++j) out[j] += mi[j];
  }
  return out;
}

/// Atom masses <m_i, x*> of the scalar measure <m, x*>.
inline SimpleFunction scalarize(const VectorMeasure& m, const DualVector& xs) {
  detail::require_dim(xs.size(), m.dim(), "scalarize");
  std::vector<double> c(m.num_atoms());
  for (std::size_t i = 0; i < m.num_atoms(); ++i) c[i] = pair(m.atom(i), xs);
  return SimpleFunction(std::move(c));
}

/// |<m, x*>|(A).
inline double variation(const VectorMeasure& m, const DualVector& xs,
                        const MeasurableSet& a) {
  detail::require_dim(a.size(), m.num_atoms(), "variation");
  const SimpleFunction s = scalarize(m, xs);
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (a.contains(i)) v += std::abs(s[i]);
  }
  return v;
}

/// Density of <m, x*> with respect to mu.
inline SimpleFunction rn_derivative(const VectorMeasure& m, const DualVector& xs) {
  SimpleFunction s = scalarize(m, xs);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= m.space().weight(i);
  return s;
}

/// True iff m is absolutely continuous with respect to |<m, x*>|: no atom
/// with zero scalar mass carries a nonzero vector.
inline bool is_rybakov(const VectorMeasure& m, const DualVector& xs) {
  const SimpleFunction s = scalarize(m, xs);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) <= kZeroTol && !m.atom_is_zero(i)) return false;
  }
  return true;
}

/// Tries the all-ones functional, then up to 100 Gaussian ones.
inline DualVector find_rybakov(const VectorMeasure& m, std::uint64_t seed = 0) {
  DualVector xs(std::vector<double>(m.dim(), 1.0));
  if (is_rybakov(m, xs)) return xs;
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (double& c : xs.coords) c = rng.gaussian();
    if (is_rybakov(m, xs)) return xs;
  }
  throw NoRybakovFound("no Rybakov functional found after 101 attempts");
}

/// Atomwise m + lambda m'.
inline VectorMeasure combine(const VectorMeasure& m, double lambda, const VectorMeasure& other) {
  require_compatible(m, other, "combine");
  std::vector<double> atoms(m.atoms().begin(), m.atoms().end());
  const auto rhs = other.atoms();
  for (std::size_t k = 0; k < atoms.size(); ++k) atoms[k] += lambda * rhs[k];
  return VectorMeasure(m.space(), m.value_space(), std::move(atoms));
}

/// Two distinct functionals with the same Radon-Nikodym derivative, if the
/// atoms of m fail to span R^d; the difference is a direction orthogonal to
/// every atom. Returns nullopt when x* -> phi_{x*} is injective.
inline std::optional<std::pair<DualVector, DualVector>> derivative_collision(
    const VectorMeasure& m, const DualVector& base) {
  detail::require_dim(base.size(), m.dim(), "derivative_collision");
  const std::size_t n = m.num_atoms();
  const std::size_t d = m.dim();
  // Row-reduce the n x d atom matrix and read a null vector off the first
  // free column.
  std::vector<double> a(m.atoms().begin(), m.atoms().end());
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  std::vector<bool> is_pivot(d, false);
  for (std::size_t c = 0; c < d && row < n; ++c) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < n; ++r) {
      if (std::abs(a[r * d + c]) > std::abs(a[best * d + c])) best = r;
    }
    if (std::abs(a[best * d + c]) <= 1e-10) continue;
    for (std::size_t k = 0; k < d; ++k) std::swap(a[row * d + k], a[best * d + k]);
    const double p = a[row * d + c];
    for (std::size_t k = 0; k < d; ++k) a[row * d + k] /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      const double f = a[r * d + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < d; ++k) a[r * d + k] -= f * a[row * d + k];
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++row;
  }
  std::size_t free_col = d;
  for (std::size_t c = 0; c < d; ++c) {
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  }
  if (free_col == d) return std::nullopt;
  std::vector<double> z(d, 0.0);
  z[free_col] = 1.0;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) z[pivot_col[r]] = -a[r * d + free_col];
  DualVector other = base;
  for (std::size_t j = 0; j < d; ++j) other.coords[j] += z[j];
  return std::make_pair(base, std::move(other));
}

}  // namespace vml

#endif  // VML_VECTOR_MEASURE_HPP
