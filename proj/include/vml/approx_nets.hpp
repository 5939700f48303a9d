#ifndef VML_APPROX_NETS_HPP
#define VML_APPROX_NETS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vml/errors.hpp"
#include "vml/l1m_norm.hpp"
#include "vml/measure_core.hpp"
#include "vml/normed_space.hpp"
#include "vml/vector_measure.hpp"

namespace vml {

/// One term g (x) x of a finite-rank operator: f -> (int f g dmu) x.
struct RankOneTerm {
  SimpleFunction functional;
  Vector vector;
};

/// Finite-rank operator L1(mu) -> X given as a sum of rank-one terms.
class FiniteRankOperator {
 public:
  FiniteRankOperator(MeasureSpace space, NormSpec codomain, std::vector<RankOneTerm> terms)
      : space_(std::move(space)), codomain_(std::move(codomain)), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      detail::require_dim(t.functional.size(), space_.size(), "FiniteRankOperator functional");
      detail::require_dim(t.vector.size(), codomain_.dim(), "FiniteRankOperator vector");
    }
  }

  const MeasureSpace& space() const noexcept { return space_; }
  const NormSpec& codomain() const noexcept { return codomain_; }
  const std::vector<RankOneTerm>& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }

  Vector apply(const SimpleFunction& f) const {
    detail::require_dim(f.size(), space_.size(), "FiniteRankOperator::apply");
    Vector out(codomain_.dim(), 0.0);
    for (const auto& t : terms_) {
      const double c = f.times(t.functional).integral(space_);
      if (c == 0.0) continue;
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * t.vector[j];
    }
    return out;
  }

  /// Matrix of the operator, d x n row-major (column i is the image of chi_i).
  std::vector<double> matrix() const {
    const std::size_t n = space_.size();
    const std::size_t d = codomain_.dim();
    std::vector<double> a(d * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector col = apply(SimpleFunction::indicator(n, i));
      for (std::size_t j = 0; j < d; ++j) a[j * n + i] = col[j];
    }
    return a;
  }

 private:
  MeasureSpace space_;
  NormSpec codomain_;
  std::vector<RankOneTerm> terms_;
};

/// E_p f = sum_B (int_B f dmu / mu(B)) chi_B, with values in discretized L1(mu).
inline FiniteRankOperator conditional_expectation(const MeasureSpace& space, const Partition& p) {
  detail::require_dim(p.size(), space.size(), "conditional_expectation");
  const auto masses = block_masses(space, p);
  std::vector<RankOneTerm> terms;
  terms.reserve(p.num_blocks());
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    const MeasurableSet block = p.block_set(b);
    SimpleFunction g = SimpleFunction::indicator(block).scaled(1.0 / masses[b]);
    const auto chi = SimpleFunction::indicator(block);
    Vector v(chi.coeffs().begin(), chi.coeffs().end());
    terms.push_back({std::move(g), std::move(v)});
  }
  return FiniteRankOperator(space, NormSpec::l1_of(space), std::move(terms));
}

/// The n x n averaging matrix of E_p, row-major.
inline std::vector<double> averaging_matrix(const MeasureSpace& space, const Partition& p) {
  detail::require_dim(p.size(), space.size(), "averaging_matrix");
  const std::size_t n = space.size();
  const auto masses = block_masses(space, p);
  std::vector<double> e(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (p.block_of(k) == p.block_of(i)) e[k * n + i] = space.weight(i) / masses[p.block_of(i)];
    }
  }
  return e;
}

/// m_p(A) = sum_B mu(A n B)/mu(B) m(B); atomwise mu_i/mu(B(i)) m(B(i)).
inline VectorMeasure martingale_measure(const VectorMeasure& m, const Partition& p) {
  detail::require_dim(p.size(), m.num_atoms(), "martingale_measure");
  const std::size_t d = m.dim();
  const auto masses = block_masses(m.space(), p);
  std::vector<double> block_values(p.num_blocks() * d, 0.0);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    const auto mi = m.atom(i);
    for (std::size_t j = 0; j < d; ++j) block_values[p.block_of(i) * d + j] += mi[j];
  }
  std::vector<double> atoms(m.num_atoms() * d);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    const std::size_t b = p.block_of(i);
    const double ratio = m.space().weight(i) / masses[b];
    for (std::size_t j = 0; j < d; ++j) atoms[i * d + j] = ratio * block_values[b * d + j];
  }
  return VectorMeasure(m.space(), m.value_space(), std::move(atoms));
}

/// I_{m_p}(f) = sum_B (int_B f dmu / mu(B)) m(B), computed blockwise.
inline Vector integrate_martingale(const VectorMeasure& m, const Partition& p,
                                   const SimpleFunction& f) {
  detail::require_dim(p.size(), m.num_atoms(), "integrate_martingale");
  detail::require_dim(f.size(), m.num_atoms(), "integrate_martingale");
  const std::size_t d = m.dim();
  const auto masses = block_masses(m.space(), p);
  std::vector<double> block_integral(p.num_blocks(), 0.0);
  std::vector<double> block_values(p.num_blocks() * d, 0.0);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    const std::size_t b = p.block_of(i);
    block_integral[b] += f[i] * m.space().weight(i);
    const auto mi = m.atom(i);
    for (std::size_t j = 0; j < d; ++j) block_values[b * d + j] += mi[j];
  }
  Vector out(d, 0.0);
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    const double c = block_integral[b] / masses[b];
    for (std::size_t j = 0; j < d; ++j) out[j] += c * block_values[b * d + j];
  }
  return out;
}

/// P_k o m: coordinates k..d-1 of every atom set to zero.
inline VectorMeasure basis_truncated_measure(const VectorMeasure& m, std::size_t k) {
  if (k < 1 || k > m.dim()) {
    throw InvalidArgument("basis truncation index must lie in 1..d");
  }
  std::vector<double> atoms(m.atoms().begin(), m.atoms().end());
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    for (std::size_t j = k; j < d; ++j) atoms[i * d + j] = 0.0;
  }
  return VectorMeasure(m.space(), m.value_space(), std::move(atoms));
}

/// R(f) = sum_k (int f phi^m_{x_k*} dmu) x_k.
inline FiniteRankOperator rn_operator(const VectorMeasure& m,
                                      std::span<const DualVector> functionals,
                                      std::span<const Vector> vectors) {
  if (functionals.size() != vectors.size()) {
    throw DimensionMismatch("rn_operator: functional and vector counts differ");
  }
  std::vector<RankOneTerm> terms;
  terms.reserve(functionals.size());
  for (std::size_t k = 0; k < functionals.size(); ++k) {
    detail::require_dim(vectors[k].size(), m.dim(), "rn_operator vector");
    terms.push_back({rn_derivative(m, functionals[k]), vectors[k]});
  }
  return FiniteRankOperator(m.space(), m.value_space(), std::move(terms));
}

/// m_R(A) = R(chi_A).
inline VectorMeasure associated_measure(const FiniteRankOperator& r, const MeasureSpace& space) {
  if (!(r.space() == space)) {
    throw DimensionMismatch("associated_measure: operator lives on another measure space");
  }
  const std::size_t n = space.size();
  const std::size_t d = r.codomain().dim();
  std::vector<double> atoms(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector col = r.apply(SimpleFunction::indicator(n, i));
    std::copy(col.begin(), col.end(), atoms.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return VectorMeasure(space, r.codomain(), std::move(atoms));
}

/// max over tests f of |int f (phi^{m'}_{x*} - phi^m_{x*}) dmu|; 0 for no tests.
inline double weakstar_gap(const VectorMeasure& m, const VectorMeasure& other,
                           const DualVector& xs, std::span<const SimpleFunction> tests) {
  require_compatible(m, other, "weakstar_gap");
  const SimpleFunction a = rn_derivative(m, xs);
  const SimpleFunction b = rn_derivative(other, xs);
  double gap = 0.0;
  for (const auto& f : tests) {
    detail::require_dim(f.size(), m.num_atoms(), "weakstar_gap test");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * (b[i] - a[i]) * m.space().weight(i);
    gap = std::max(gap, std::abs(s));
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Nets and diagnostics
// ---------------------------------------------------------------------------

struct NetLevel {
  std::size_t index = 0;
  double norm_gap = 0.0;       // | ||f||_{L1(m_eta)} - ||f||_{L1(m)} |
  double deviation = 0.0;      // sup_A ||int f h_A d(m - m_eta)||
  double pointwise_gap = 0.0;  // ||I_m f - I_{m_eta} f||_X
  double weakstar_gap = 0.0;   // max over probes of weakstar_gap
  double norm = 0.0;           // ||f||_{L1(m_eta)}
};

struct NetReport {
  double target_norm = 0.0;  // ||f||_{L1(m)}
  std::vector<NetLevel> levels;
};

/// Convergence diagnostics of a finite net m_0, m_1, ... against m.
inline NetReport run_net(const VectorMeasure& m, std::span<const VectorMeasure> net,
                         const SimpleFunction& f, std::span<const DualVector> probes,
                         std::span<const SimpleFunction> tests, const NormOptions& opts = {}) {
  NetReport report;
  report.target_norm = l1_norm(m, f, opts).value;
  const Vector target = integrate(m, f);
  report.levels.reserve(net.size());
  for (std::size_t k = 0; k < net.size(); ++k) {
    const VectorMeasure& level = net[k];
    require_compatible(m, level, "run_net");
    NetLevel row;
    row.index = k;
    row.norm = l1_norm(level, f, opts).value;
    row.norm_gap = std::abs(row.norm - report.target_norm);
    row.deviation = deviation(m, level, f, opts);
    Vector diff = integrate(level, f);
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = target[j] - diff[j];
    row.pointwise_gap = norm(m.value_space(), diff);
    for (const auto& xs : probes) {
      row.weakstar_gap = std::max(row.weakstar_gap, weakstar_gap(m, level, xs, tests));
    }
    report.levels.push_back(row);
  }
  return report;
}

/// Martingale measures along a partition chain.
inline std::vector<VectorMeasure> martingale_net(const VectorMeasure& m,
                                                 std::span<const Partition> chain) {
  std::vector<VectorMeasure> net;
  net.reserve(chain.size());
  for (const auto& p : chain) net.push_back(martingale_measure(m, p));
  return net;
}

/// P_1 o m, ..., P_d o m.
inline std::vector<VectorMeasure> basis_net(const VectorMeasure& m) {
  std::vector<VectorMeasure> net;
  net.reserve(m.dim());
  for (std::size_t k = 1; k <= m.dim(); ++k) net.push_back(basis_truncated_measure(m, k));
  return net;
}

/// Measures of the coordinate-family Radon-Nikodym operators
/// R_k = sum_{j<k} phi^m_{e_j*} e_j, k = 1..d.
inline std::vector<VectorMeasure> coordinate_rn_net(const VectorMeasure& m) {
  const std::size_t d = m.dim();
  std::vector<VectorMeasure> net;
  std::vector<DualVector> functionals;
  std::vector<Vector> vectors;
  for (std::size_t k = 1; k <= d; ++k) {
    functionals.push_back(DualVector::coordinate(d, k - 1));
    Vector e(d, 0.0);
    e[k - 1] = 1.0;
    vectors.push_back(std::move(e));
    net.push_back(associated_measure(rn_operator(m, functionals, vectors), m.space()));
  }
  return net;
}

/// Radon-Nikodym operator E_p o I_m for an m with values in discretized
/// L1(mu): functionals x_B* = mu|_B / mu(B), vectors chi_B.
inline FiniteRankOperator conditional_expectation_rn_operator(const VectorMeasure& m,
                                                              const Partition& p) {
  if (!(m.value_space() == NormSpec::l1_of(m.space()))) {
    throw InvalidArgument(
        "conditional-expectation family needs values in discretized L1 of the base measure");
  }
  const std::size_t n = m.num_atoms();
  const auto masses = block_masses(m.space(), p);
  std::vector<DualVector> functionals;
  std::vector<Vector> vectors;
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    std::vector<double> xs(n, 0.0);
    Vector v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.block_of(i) != b) continue;
      xs[i] = m.space().weight(i) / masses[b];
      v[i] = 1.0;
    }
    functionals.emplace_back(std::move(xs));
    vectors.push_back(std::move(v));
  }
  return rn_operator(m, functionals, vectors);
}

inline std::vector<VectorMeasure> conditional_expectation_rn_net(
    const VectorMeasure& m, std::span<const Partition> chain) {
  std::vector<VectorMeasure> net;
  for (const auto& p : chain) {
    net.push_back(associated_measure(conditional_expectation_rn_operator(m, p), m.space()));
  }
  return net;
}

/// Default weak* test family: indicators of the blocks of `finest` plus f.
inline std::vector<SimpleFunction> default_tests(const Partition& finest, const SimpleFunction& f) {
  std::vector<SimpleFunction> tests;
  for (std::size_t b = 0; b < finest.num_blocks(); ++b) {
    tests.push_back(SimpleFunction::indicator(finest.block_set(b)));
  }
  tests.push_back(f);
  return tests;
}

/// Coordinate functionals e_0*, ..., e_{d-1}*.
inline std::vector<DualVector> coordinate_probes(std::size_t d) {
  std::vector<DualVector> probes;
  for (std::size_t j = 0; j < d; ++j) probes.push_back(DualVector::coordinate(d, j));
  return probes;
}

}  // namespace vml

#endif  // VML_APPROX_NETS_HPP
