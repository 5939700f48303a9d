// Brute-force reference computations for the unit and acceptance tests.
// Written directly from the definitions, sharing no code with the library
// beyond its data types.
#ifndef VML_TESTS_ORACLES_HPP
#define VML_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vml/vml.hpp"

namespace oracle {

/// Weighted norm straight from its definition.
inline double norm(const vml::NormSpec& x, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double t = std::abs(x.scale(j) * v[j]);
    if (x.kind() == vml::NormKind::L1) acc += t;
    if (x.kind() == vml::NormKind::L2) acc += t * t;
    if (x.kind() == vml::NormKind::LInf) acc = std::max(acc, t);
  }
  return x.kind() == vml::NormKind::L2 ? std::sqrt(acc) : acc;
}

/// sup over all 2^n subsets A of ||sum_i f_i h_A(i) m_i||.
inline double l1m_norm(const vml::VectorMeasure& m, const vml::SimpleFunction& f) {
  const std::size_t n = m.num_atoms();
  const std::size_t d = m.dim();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> v(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = ((mask >> i) & 1u) ? 1.0 : -1.0;
      for (std::size_t j = 0; j < d; ++j) v[j] += f[i] * h * m.atom(i)[j];
    }
    best = std::max(best, norm(m.value_space(), v));
  }
  return best;
}

/// ||sum_i f_i h_A(i) m_i|| for one set A.
inline double signed_integral_norm(const vml::VectorMeasure& m, const vml::SimpleFunction& f,
                                   const vml::MeasurableSet& a) {
  std::vector<double> v(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    const double h = a.contains(i) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < m.dim(); ++j) v[j] += f[i] * h * m.atom(i)[j];
  }
  return norm(m.value_space(), v);
}

/// ||T|| for a column-major n-column matrix on L1(mu): brute maximum of
/// ||T f|| over the vertices +-chi_i / mu_i of the unit ball.
inline double opnorm(const vml::MeasureSpace& space, const vml::NormSpec& y,
                     const std::vector<double>& col_major) {
  const std::size_t d = y.dim();
  double best = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::vector<double> v(col_major.begin() + static_cast<std::ptrdiff_t>(i * d),
                          col_major.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    best = std::max(best, norm(y, v) / space.weight(i));
  }
  return best;
}

/// Maximum of c.x over the vertices of {x in R^2 : a_k . x <= b_k}, found by
/// intersecting every pair of constraint lines. Returns -inf if no vertex is
/// feasible. Only meaningful for bounded feasible sets.
inline double lp2_vertex_max(const std::vector<std::array<double, 3>>& rows,
                             std::array<double, 2> c) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (std::size_t q = p + 1; q < rows.size(); ++q) {
      const auto& a = rows[p];
      const auto& b = rows[q];
      const double det = a[0] * b[1] - a[1] * b[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (a[2] * b[1] - a[1] * b[2]) / det;
      const double y = (a[0] * b[2] - a[2] * b[0]) / det;
      bool ok = true;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (ok) best = std::max(best, c[0] * x + c[1] * y);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

inline vml::MeasureSpace random_space(vml::Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(0.1, 2.0);
  return vml::MeasureSpace(std::move(w));
}

inline vml::NormSpec random_norm(vml::Rng& rng, vml::NormKind kind, std::size_t d) {
  std::vector<double> s(d);
  for (double& x : s) x = rng.uniform(0.5, 2.0);
  return vml::NormSpec(kind, std::move(s));
}

inline vml::VectorMeasure random_measure(vml::Rng& rng, const vml::MeasureSpace& space,
                                         const vml::NormSpec& x, double zero_atom_rate = 0.0) {
  std::vector<double> atoms(space.size() * x.dim());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const bool zero = rng.uniform() < zero_atom_rate;
    for (std::size_t j = 0; j < x.dim(); ++j) atoms[i * x.dim() + j] = zero ? 0.0 : rng.gaussian();
  }
  return vml::VectorMeasure(space, x, std::move(atoms));
}

/// Coefficients are Gaussian, with roughly `zero_rate` of them set to 0.
inline vml::SimpleFunction random_function(vml::Rng& rng, std::size_t n, double zero_rate = 0.2) {
  std::vector<double> c(n);
  for (double& x : c) x = rng.uniform() < zero_rate ? 0.0 : rng.gaussian();
  return vml::SimpleFunction(std::move(c));
}

inline vml::DualVector random_dual(vml::Rng& rng, std::size_t d) {
  std::vector<double> c(d);
  for (double& x : c) x = rng.gaussian();
  return vml::DualVector(std::move(c));
}

inline vml::MeasurableSet random_set(vml::Rng& rng, std::size_t n) {
  vml::MeasurableSet a = vml::MeasurableSet::empty(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, rng.coin());
  return a;
}

inline vml::NormKind kind_of(std::size_t k) {
  static constexpr vml::NormKind kinds[] = {vml::NormKind::L1, vml::NormKind::L2,
                                            vml::NormKind::LInf};
  return kinds[k % 3];
}

}  // namespace oracle

#endif  // VML_TESTS_ORACLES_HPP
