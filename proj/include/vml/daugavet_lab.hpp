#ifndef VML_DAUGAVET_LAB_HPP
#define VML_DAUGAVET_LAB_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "vml/approx_nets.hpp"
#include "vml/errors.hpp"
#include "vml/l1m_norm.hpp"
#include "vml/measure_core.hpp"
#include "vml/normed_space.hpp"
#include "vml/rng.hpp"
#include "vml/vector_measure.hpp"

namespace vml {

/// Operator from discretized L1(mu) into a normed R^d, stored column-major
/// (column i is the image of chi_i).
class OperatorMatrix {
 public:
  OperatorMatrix(MeasureSpace domain, NormSpec codomain, std::vector<double> column_major)
      : domain_(std::move(domain)), codomain_(std::move(codomain)),
        entries_(std::move(column_major)) {
    detail::require_dim(entries_.size(), domain_.size() * codomain_.dim(), "OperatorMatrix");
  }

  static OperatorMatrix zero(MeasureSpace domain, NormSpec codomain) {
    const std::size_t len = domain.size() * codomain.dim();
    return OperatorMatrix(std::move(domain), std::move(codomain), std::vector<double>(len, 0.0));
  }

  /// Id on discretized L1(mu).
  static OperatorMatrix identity(const MeasureSpace& space) {
    const std::size_t n = space.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return OperatorMatrix(space, NormSpec::l1_of(space), std::move(e));
  }

  /// f -> (int f h dmu) y.
  static OperatorMatrix rank_one(const MeasureSpace& domain, const NormSpec& codomain,
                                 const SimpleFunction& h, std::span<const double> y) {
    detail::require_dim(h.size(), domain.size(), "OperatorMatrix::rank_one functional");
    detail::require_dim(y.size(), codomain.dim(), "OperatorMatrix::rank_one vector");
    const std::size_t d = codomain.dim();
    std::vector<double> e(domain.size() * d);
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const double c = h[i] * domain.weight(i);
      for (std::size_t j = 0; j < d; ++j) e[i * d + j] = c * y[j];
    }
    return OperatorMatrix(domain, codomain, std::move(e));
  }

  /// f -> sign (int f dmu) chi_Omega on discretized L1(mu).
  static OperatorMatrix integral_rank_one(const MeasureSpace& space, double sign = 1.0) {
    const Vector ones(space.size(), sign);
    return rank_one(space, NormSpec::l1_of(space), SimpleFunction::constant(space.size(), 1.0),
                    ones);
  }

  /// Matrix of I_m: column i is the atom m_i.
  static OperatorMatrix from_measure(const VectorMeasure& m) {
    return OperatorMatrix(m.space(), m.value_space(),
                          std::vector<double>(m.atoms().begin(), m.atoms().end()));
  }

  static OperatorMatrix from_operator(const FiniteRankOperator& r) {
    return from_measure(associated_measure(r, r.space()));
  }

  std::size_t rows() const noexcept { return codomain_.dim(); }
  std::size_t cols() const noexcept { return domain_.size(); }
  const MeasureSpace& domain() const noexcept { return domain_; }
  const NormSpec& codomain() const noexcept { return codomain_; }

  double at(std::size_t r, std::size_t c) const { return entries_[c * rows() + r]; }
  double& at(std::size_t r, std::size_t c) { return entries_[c * rows() + r]; }
  std::span<const double> column(std::size_t c) const {
    return std::span<const double>(entries_).subspan(c * rows(), rows());
  }
  std::span<const double> entries() const noexcept { return entries_; }

  Vector apply(const SimpleFunction& f) const {
    detail::require_dim(f.size(), cols(), "OperatorMatrix::apply");
    Vector out(rows(), 0.0);
    for (std::size_t c = 0; c < cols(); ++c) {
      if (f[c] == 0.0) continue;
      const auto col = column(c);
      for (std::size_t r = 0; r < rows(); ++r) out[r] += f[c] * col[r];
    }
    return out;
  }

  OperatorMatrix scaled(double s) const {
    std::vector<double> e(entries_);
    for (double& v : e) v *= s;
    return OperatorMatrix(domain_, codomain_, std::move(e));
  }

  /// this + s * other.
  OperatorMatrix plus(const OperatorMatrix& other, double s = 1.0) const {
    require_same_shape(other, "OperatorMatrix::plus");
    std::vector<double> e(entries_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += s * other.entries_[k];
    return OperatorMatrix(domain_, codomain_, std::move(e));
  }

  void require_same_shape(const OperatorMatrix& other, const char* what) const {
    if (!(domain_ == other.domain_) || !(codomain_ == other.codomain_)) {
      throw DimensionMismatch(std::string(what) + ": operator shapes differ");
    }
  }

 private:
  MeasureSpace domain_;
  NormSpec codomain_;
  std::vector<double> entries_;
};

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) { return a.plus(b); }
inline OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a.plus(b, -1.0);
}

/// a o b, where the codomain of b is discretized L1 of a's domain.
inline OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (b.rows() != a.cols()) throw DimensionMismatch("compose: inner dimensions differ");
  std::vector<double> e(a.rows() * b.cols(), 0.0);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    const auto bc = b.column(c);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (bc[k] == 0.0) continue;
      const auto ak = a.column(k);
      for (std::size_t r = 0; r < a.rows(); ++r) e[c * a.rows() + r] += bc[k] * ak[r];
    }
  }
  return OperatorMatrix(b.domain(), a.codomain(), std::move(e));
}

struct OpNorm {
  double value = 0.0;
  std::size_t witness_column = 0;
};

namespace detail {

/// max_i ||col_i||_Y / mu_i over lazily produced columns; ties keep the
/// smallest index.
template <class ColumnFn>
OpNorm column_norm_max(const MeasureSpace& domain, const NormSpec& codomain, ColumnFn&& fill) {
  OpNorm best{-1.0, 0};
  Vector col(codomain.dim());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    fill(i, col);
    const double v = norm(codomain, col) / domain.weight(i);
    if (v > best.value) best = {v, i};
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

inline void require_l1_endomorphism(const OperatorMatrix& t, const char* what) {
  if (!(t.codomain() == NormSpec::l1_of(t.domain()))) {
    throw DimensionMismatch(std::string(what) +
                            ": operator must map discretized L1(mu) into itself");
  }
}

}  // namespace detail

/// ||S|| for S: L1(mu) -> Y. The extreme points of the unit ball of L1(mu)
/// are +-chi_i/mu_i, so the norm is the largest scaled column norm.
inline OpNorm opnorm_from_l1(const OperatorMatrix& s) {
  return detail::column_norm_max(s.domain(), s.codomain(), [&](std::size_t i, Vector& col) {
    const auto c = s.column(i);
    std::copy(c.begin(), c.end(), col.begin());
  });
}

struct DefectReport {
  double norm_g = 0.0;
  double norm_t = 0.0;
  double norm_sum = 0.0;
  double defect = 0.0;  // norm_g + norm_t - norm_sum
};

/// 1 + ||T|| - ||Id + T|| on discretized L1(mu). ||Id|| is computed, not
/// assumed, and Id is never materialized.
inline DefectReport daugavet_defect(const OperatorMatrix& t) {
  detail::require_l1_endomorphism(t, "daugavet_defect");
  const MeasureSpace& space = t.domain();
  DefectReport r;
  r.norm_g = detail::column_norm_max(space, t.codomain(), [](std::size_t i, Vector& col) {
               std::fill(col.begin(), col.end(), 0.0);
               col[i] = 1.0;
             }).value;
  r.norm_t = opnorm_from_l1(t).value;
  r.norm_sum = detail::column_norm_max(space, t.codomain(), [&](std::size_t i, Vector& col) {
                 const auto c = t.column(i);
                 std::copy(c.begin(), c.end(), col.begin());
                 col[i] += 1.0;
               }).value;
  r.defect = r.norm_g + r.norm_t - r.norm_sum;
  return r;
}

/// ||G|| + ||T|| - ||G + T||; zero iff the center equation holds for T.
inline DefectReport center_defect(const OperatorMatrix& g, const OperatorMatrix& t) {
  g.require_same_shape(t, "center_defect");
  DefectReport r;
  r.norm_g = opnorm_from_l1(g).value;
  r.norm_t = opnorm_from_l1(t).value;
  r.norm_sum = detail::column_norm_max(g.domain(), g.codomain(), [&](std::size_t i, Vector& col) {
                 const auto a = g.column(i);
                 const auto b = t.column(i);
                 for (std::size_t k = 0; k < col.size(); ++k) col[k] = a[k] + b[k];
               }).value;
  r.defect = r.norm_g + r.norm_t - r.norm_sum;
  return r;
}

struct Lemma4Result {
  double lhs = 0.0;         // ||I_m + lambda I_{m'}|| on L1(mu)
  double rhs = 0.0;         // sup over x* of ||phi^m_{x*} + lambda phi^{m'}_{x*}||_{L_inf(mu)}
  double column_max = 0.0;  // max_i ||m_i + lambda m'_i||_X / mu_i
  double gap = 0.0;         // |lhs - rhs|
};

/// Both sides of ||I_m + lambda I_{m'}|| = sup_{x*} ||phi^m_{x*} + lambda phi^{m'}_{x*}||_{Z*}
/// with Z = L1(mu); the supremum runs over the dual extreme points.
inline Lemma4Result lemma4_identity_check(const VectorMeasure& m, const VectorMeasure& other,
                                          double lambda) {
  require_compatible(m, other, "lemma4_identity_check");
  const NormSpec& x = m.value_space();
  if (!x.polyhedral()) {
    throw NotPolyhedral("lemma4_identity_check needs an L1- or LINF-kind value space");
  }
  Lemma4Result r;
  const OperatorMatrix sum =
      OperatorMatrix::from_measure(m).plus(OperatorMatrix::from_measure(other), lambda);
  r.lhs = opnorm_from_l1(sum).value;

  for (const auto& xs : dual_extreme_points(x, /*half=*/true)) {
    const SimpleFunction a = rn_derivative(m, xs);
    const SimpleFunction b = rn_derivative(other, xs);
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.rhs = std::max(r.rhs, std::abs(a[i] + lambda * b[i]));
    }
  }
  Vector col(m.dim());
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    const auto mi = m.atom(i);
    const auto oi = other.atom(i);
    for (std::size_t j = 0; j < col.size(); ++j) col[j] = mi[j] + lambda * oi[j];
    r.column_max = std::max(r.column_max, norm(x, col) / m.space().weight(i));
  }
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

struct TheoremAOptions {
  std::size_t samples = 64;  // seeded random unit-norm rank-one operators
  std::uint64_t seed = 0;
};

struct TheoremAResult {
  double gap_norm = 0.0;  // ||G - sum(parts)||
  /// min over parts and samples of ||G + T|| - ||T||; +infinity when there
  /// is nothing to minimize over.
  double c_estimate = std::numeric_limits<double>::infinity();
};

/// Measures ||G - sum T_k|| against the empirical constant
/// C = min_T (||G + T|| - ||T||) over the parts and a sampled rank-one family.
inline TheoremAResult theorem_a_gap(const OperatorMatrix& g, std::span<const OperatorMatrix> parts,
                                    const TheoremAOptions& opts = {}) {
  TheoremAResult r;
  std::vector<double> total(g.entries().begin(), g.entries().end());
  for (const auto& p : parts) {
    g.require_same_shape(p, "theorem_a_gap");
    const auto e = p.entries();
    for (std::size_t k = 0; k < total.size(); ++k) total[k] -= e[k];
    const double c = center_defect(g, p).norm_sum - opnorm_from_l1(p).value;
    r.c_estimate = std::min(r.c_estimate, c);
  }
  r.gap_norm = opnorm_from_l1(OperatorMatrix(g.domain(), g.codomain(), std::move(total))).value;

  const MeasureSpace& space = g.domain();
  const NormSpec& y = g.codomain();
  Rng rng(opts.seed);
  Vector h(space.size());
  Vector v(y.dim());
  for (std::size_t s = 0; s < opts.samples; ++s) {
    double hmax = 0.0;
    for (double& c : h) {
      c = rng.gaussian();
      hmax = std::max(hmax, std::abs(c));
    }
    for (double& c : v) c = rng.gaussian();
    const double vnorm = norm(y, v);
    if (hmax == 0.0 || vnorm == 0.0) continue;
    for (double& c : h) c /= hmax;
    for (double& c : v) c /= vnorm;
    // T f = (int f h dmu) v has ||T|| = max|h| ||v|| = 1 and column i equal
    // to h_i mu_i v.
    const double norm_sum =
        detail::column_norm_max(space, y, [&](std::size_t i, Vector& col) {
          const auto gc = g.column(i);
          const double c = h[i] * space.weight(i);
          for (std::size_t k = 0; k < col.size(); ++k) col[k] = gc[k] + c * v[k];
        }).value;
    r.c_estimate = std::min(r.c_estimate, norm_sum - 1.0);
  }
  return r;
}

/// (m0, m1) with m0(A) = chi_A and m1(A) = mu(A) g in discretized L1(mu).
inline std::pair<VectorMeasure, VectorMeasure> canonical_pair(const MeasureSpace& space,
                                                              const SimpleFunction& g,
                                                              double tol = 1e-10) {
  detail::require_dim(g.size(), space.size(), "canonical_pair");
  const double gn = g.l1_norm(space);
  if (std::abs(gn - 1.0) > tol) {
    throw NotNormalized("canonical_pair needs ||g||_{L1(mu)} = 1, got " + std::to_string(gn));
  }
  return {VectorMeasure::indicator(space),
          VectorMeasure::rank_one(space, NormSpec::l1_of(space), g.coeffs())};
}

// ---------------------------------------------------------------------------
// Packaged experiments
// ---------------------------------------------------------------------------

/// Block pieces of I_{m_p}: part B has column i equal to
/// [i in B] mu_i / mu(B) m(B). They sum to the matrix of I_{m_p}.
inline std::vector<OperatorMatrix> martingale_parts(const VectorMeasure& m, const Partition& p) {
  const std::size_t d = m.dim();
  const std::size_t n = m.num_atoms();
  const auto masses = block_masses(m.space(), p);
  std::vector<OperatorMatrix> parts;
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    const Vector mb = set_value(m, p.block_set(b));
    std::vector<double> e(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.block_of(i) != b) continue;
      const double c = m.space().weight(i) / masses[b];
      for (std::size_t j = 0; j < d; ++j) e[i * d + j] = c * mb[j];
    }
    parts.emplace_back(m.space(), m.value_space(), std::move(e));
  }
  return parts;
}

struct SweepPoint {
  std::size_t n = 0;
  DefectReport report;
};

/// Daugavet defect of T f = sign (int f dmu) chi_Omega on n uniform atoms of
/// total mass 1. The defect is 2/n for sign = -1 and 0 for sign = +1.
inline SweepPoint rank_one_daugavet_point(std::size_t n, double sign) {
  const MeasureSpace space = MeasureSpace::uniform(n);
  return {n, daugavet_defect(OperatorMatrix::integral_rank_one(space, sign))};
}

/// G = Id - S/2 with S the cyclic shift (an isomorphism of L1(mu)), T = R o G
/// with R = (int . dmu) chi_Omega positive rank-one.
inline SweepPoint center_shift_point(std::size_t n) {
  const MeasureSpace space = MeasureSpace::uniform(n);
  OperatorMatrix g = OperatorMatrix::identity(space);
  for (std::size_t i = 0; i < n; ++i) g.at((i + 1) % n, i) -= 0.5;
  const OperatorMatrix t = compose(OperatorMatrix::integral_rank_one(space, 1.0), g);
  return {n, center_defect(g, t)};
}

struct RankOneRepresentationResult {
  DefectReport defect;  // Id + I_{m1}
  Lemma4Result identity;  // same norm through Radon-Nikodym derivatives
};

/// The representing measure m1(A) = mu(A) g has a rank-one integration map;
/// measures ||Id + I_{m1}|| both as an operator norm and through the
/// derivatives of m0 and m1.
inline RankOneRepresentationResult rank_one_representation(const MeasureSpace& space,
                                                           const SimpleFunction& g) {
  const auto [m0, m1] = canonical_pair(space, g);
  RankOneRepresentationResult r;
  r.defect = daugavet_defect(OperatorMatrix::from_measure(m1));
  r.identity = lemma4_identity_check(m0, m1, 1.0);
  return r;
}

/// Id on discretized L1(mu) against the block pieces of E_p along a dyadic
/// chain: one measured distance-to-parts gap per level.
inline std::vector<TheoremAResult> identity_martingale_gaps(const MeasureSpace& space,
                                                            std::size_t levels,
                                                            const TheoremAOptions& opts = {}) {
  const VectorMeasure m0 = VectorMeasure::indicator(space);
  const OperatorMatrix id = OperatorMatrix::from_measure(m0);
  std::vector<TheoremAResult> out;
  for (const auto& p : dyadic_chain(levels, space)) {
    const auto parts = martingale_parts(m0, p);
    out.push_back(theorem_a_gap(id, parts, opts));
  }
  return out;
}

/// Id against `count` random rank-one Radon-Nikodym derivative operators
/// phi^{m}_{x*} (x) x of measures representing L1(mu) (m0 and m1 alternately).
inline TheoremAResult identity_rn_span_gap(const MeasureSpace& space, std::size_t count,
                                           const TheoremAOptions& opts = {}) {
  const auto [m0, m1] =
      canonical_pair(space, SimpleFunction::constant(space.size(), 1.0 / space.total()));
  const std::size_t n = space.size();
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<OperatorMatrix> parts;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> xs(n);
    Vector x(n);
    for (double& c : xs) c = rng.gaussian();
    for (double& c : x) c = rng.gaussian();
    const DualVector dv(std::move(xs));
    const VectorMeasure& base = (k % 2 == 0) ? m0 : m1;
    const std::vector<DualVector> fs{dv};
    const std::vector<Vector> vs{x};
    OperatorMatrix part = OperatorMatrix::from_operator(rn_operator(base, fs, vs));
    const double pn = opnorm_from_l1(part).value;
    if (pn > 0.0) parts.push_back(part.scaled(1.0 / (pn * static_cast<double>(count))));
  }
  return theorem_a_gap(OperatorMatrix::from_measure(m0), parts, opts);
}

}  // namespace vml

#endif  // VML_DAUGAVET_LAB_HPP
