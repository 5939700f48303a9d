#ifndef VML_L1M_NORM_HPP
#define VML_L1M_NORM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "vml/errors.hpp"
#include "vml/measure_core.hpp"
#include "vml/normed_space.hpp"
#include "vml/opt_engine.hpp"
#include "vml/rng.hpp"
#include "vml/vector_measure.hpp"

namespace vml {

enum class NormMethod { Exact, ClosedForm, Heuristic };

inline std::string_view to_string(NormMethod m) {
  switch (m) {
    case NormMethod::Exact: return "EXACT";
    case NormMethod::ClosedForm: return "CLOSED_FORM";
    case NormMethod::Heuristic: return "HEURISTIC";
  }
  return "?";
}

/// Value of ||f||_{L1(m)} together with a set A attaining
/// sup_A ||int f h_A dm||.
struct NormResult {
  double value = 0.0;
  MeasurableSet witness;
  NormMethod method = NormMethod::Exact;
};

inline constexpr std::size_t kDefaultExactCutoff = 16;

struct NormOptions {
  std::size_t exact_cutoff = kDefaultExactCutoff;
};

/// int f dm = sum_i f_i m_i.
inline Vector integrate(const VectorMeasure& m, const SimpleFunction& f) {
  detail::require_dim(f.size(), m.num_atoms(), "integrate");
  Vector out(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    if (f[i] == 0.0) continue;
    const auto mi = m.atom(i);
    for (std::size_t j = 0; j < m.dim(); ++j) out[j] += f[i] * mi[j];
  }
  return out;
}

/// int f h_A dm.
inline Vector integrate_signed(const VectorMeasure& m, const SimpleFunction& f,
                               const MeasurableSet& a) {
  return integrate(m, f.times(sign_function(a)));
}

namespace detail {

/// The nonzero terms f_i m_i, which are all that matter to the norm.
struct SupportTerms {
  std::vector<std::size_t> atoms;
  std::vector<double> terms;  // row-major, one row of length d per atom
  std::size_t d = 0;

  std::size_t size() const noexcept { return atoms.size(); }
  std::span<const double> term(std::size_t k) const {
    return std::span<const double>(terms).subspan(k * d, d);
  }
};

inline SupportTerms support_terms(const VectorMeasure& m, const SimpleFunction& f) {
  detail::require_dim(f.size(), m.num_atoms(), "L1(m) norm");
  SupportTerms s;
  s.d = m.dim();
  for (std::size_t i = 0; i < m.num_atoms(); ++i) {
    if (f[i] == 0.0) continue;
    const auto mi = m.atom(i);
    bool nonzero = false;
    for (double v : mi) nonzero = nonzero || v != 0.0;
    if (!nonzero) continue;
    s.atoms.push_back(i);
    for (double v : mi) s.terms.push_back(f[i] * v);
  }
  return s;
}

/// Lexicographic order on sign patterns with -1 < +1.
inline bool lex_less(const SignVector& a, const SignVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// A = {eps_i = +1} on the support, and every atom off the support.
inline MeasurableSet witness_from_signs(std::size_t n, const SupportTerms& s,
                                        const SignVector& eps) {
  MeasurableSet a = MeasurableSet::full(n);
  for (std::size_t k = 0; k < s.size(); ++k) a.set(s.atoms[k], eps[k] > 0);
  return a;
}

inline void check_cutoff(std::size_t support, std::size_t cutoff, const char* what) {
  if (support > cutoff) {
    throw CapacityExceeded(std::string(what) + ": support size " + std::to_string(support) +
                           " exceeds the exact cutoff " + std::to_string(cutoff));
  }
}

}  // namespace detail

/// ||f||_{L1(m)} = max over eps in {+-1}^k (eps_0 = +1) of
/// ||sum eps_i f_i m_i||_X, k the number of atoms with f_i m_i != 0.
///
/// Patterns are visited in Gray-code order with a running sum. Among
/// maximizers (to 1e-12 relative) the lexicographically smallest pattern,
/// ordered with -1 < +1, supplies the witness set.
inline NormResult norm_exact(const VectorMeasure& m, const SimpleFunction& f,
                             std::size_t exact_cutoff = kDefaultExactCutoff) {
  const auto s = detail::support_terms(m, f);
  detail::check_cutoff(s.size(), exact_cutoff, "norm_exact");
  const NormSpec& x = m.value_space();
  const std::size_t d = m.dim();
  const std::size_t k = s.size();

  Vector sum(d, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    const auto term = s.term(t);
    for (std::size_t j = 0; j < d; ++j) sum[j] += term[j];
  }
  double best = -1.0;
  SignVector best_eps;
  enumerate_signs(k, [&](const SignVector& eps, std::ptrdiff_t flipped) {
    if (flipped >= 0) {
      const auto i = static_cast<std::size_t>(flipped);
      const auto term = s.term(i);
      const double c = 2.0 * eps[i];  // eps already flipped
      for (std::size_t j = 0; j < d; ++j) sum[j] += c * term[j];
    }
    const double v = norm(x, sum);
    const double tol = 1e-12 * std::max(1.0, best);
    if (v > best + tol) {
      best = v;
      best_eps = eps;
    } else if (v >= best - tol && detail::lex_less(eps, best_eps)) {
      best = std::max(best, v);
      best_eps = eps;
    }
  });
  return {std::max(best, 0.0), detail::witness_from_signs(m.num_atoms(), s, best_eps),
          NormMethod::Exact};
}

/// ||f||_{L1(m)} = max over dual extreme points x* of
/// sum_i |f_i| |<m_i, x*>|. O(nd) for LINF-kind X; 2^(d-1) functionals
/// for L1-kind X.
inline NormResult norm_closed_form(const VectorMeasure& m, const SimpleFunction& f) {
  detail::require_dim(f.size(), m.num_atoms(), "norm_closed_form");
  const NormSpec& x = m.value_space();
  const std::size_t n = m.num_atoms();
  const std::size_t d = m.dim();
  if (!x.polyhedral()) {
    throw NotPolyhedral("closed-form L1(m) norm needs an L1- or LINF-kind value space");
  }
  NormResult r;
  r.method = NormMethod::ClosedForm;
  r.value = -1.0;
  if (x.kind() == NormKind::LInf) {
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(f[i] * m.atom(i)[j]);
      acc *= x.scale(j);
      if (acc > r.value) {
        r.value = acc;
        best_j = j;
      }
    }
    r.witness = MeasurableSet::full(n);
    for (std::size_t i = 0; i < n; ++i) r.witness.set(i, f[i] * m.atom(i)[best_j] >= 0.0);
    return r;
  }
  const auto points = dual_extreme_points(x, /*half=*/true);
  std::size_t best_p = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] != 0.0) acc += std::abs(f[i]) * std::abs(pair(m.atom(i), points[p]));
    }
    if (acc > r.value) {
      r.value = acc;
      best_p = p;
    }
  }
  r.witness = MeasurableSet::full(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.witness.set(i, f[i] * pair(m.atom(i), points[best_p]) >= 0.0);
  }
  return r;
}

namespace detail {

/// ||sum eps_i t_i||_X with single-flip updates.
class SignedSumObjective {
 public:
  SignedSumObjective(const SupportTerms& s, const NormSpec& x)
      : s_(s), x_(x), sum_(x.dim()), scratch_(x.dim()) {}

  void reset(const SignVector& eps) {
    eps_ = eps;
    std::fill(sum_.begin(), sum_.end(), 0.0);
    for (std::size_t k = 0; k < s_.size(); ++k) {
      const auto t = s_.term(k);
      for (std::size_t j = 0; j < sum_.size(); ++j) sum_[j] += eps_[k] * t[j];
    }
    value_ = norm(x_, sum_);
  }
  double value() const { return value_; }
  double value_if_flipped(std::size_t k) const {
    const auto t = s_.term(k);
    const double c = -2.0 * eps_[k];
    for (std::size_t j = 0; j < sum_.size(); ++j) scratch_[j] = sum_[j] + c * t[j];
    return norm(x_, scratch_);
  }
  void flip(std::size_t k) {
    const auto t = s_.term(k);
    const double c = -2.0 * eps_[k];
    for (std::size_t j = 0; j < sum_.size(); ++j) sum_[j] += c * t[j];
    eps_[k] = static_cast<std::int8_t>(-eps_[k]);
    value_ = norm(x_, sum_);
  }

 private:
  const SupportTerms& s_;
  const NormSpec& x_;
  SignVector eps_;
  Vector sum_;
  mutable Vector scratch_;
  double value_ = 0.0;
};

}  // namespace detail

/// Lower bound on ||f||_{L1(m)} by steepest-ascent sign flipping from
/// `restarts` starts. Deterministic for a given seed.
inline NormResult norm_heuristic(const VectorMeasure& m, const SimpleFunction& f,
                                 std::size_t restarts = 8, std::uint64_t seed = 0) {
  if (restarts == 0) throw InvalidArgument("norm_heuristic needs restarts >= 1");
  const auto s = detail::support_terms(m, f);
  if (s.size() == 0) {
    return {0.0, MeasurableSet::full(m.num_atoms()), NormMethod::Heuristic};
  }
  detail::SignedSumObjective objective(s, m.value_space());
  ClimbResult best = hill_climb(s.size(), objective, restarts, seed);
  if (best.pattern[0] < 0) {
    for (auto& e : best.pattern) e = static_cast<std::int8_t>(-e);
  }
  return {best.value, detail::witness_from_signs(m.num_atoms(), s, best.pattern),
          NormMethod::Heuristic};
}

/// Exact when the support fits under the cutoff, closed form otherwise.
/// Never falls back to the heuristic, so the result is always the norm.
inline NormResult l1_norm(const VectorMeasure& m, const SimpleFunction& f,
                          const NormOptions& opts = {}) {
  const auto s = detail::support_terms(m, f);
  if (s.size() <= opts.exact_cutoff) return norm_exact(m, f, opts.exact_cutoff);
  const NormSpec& x = m.value_space();
  if (x.kind() == NormKind::LInf ||
      (x.kind() == NormKind::L1 && x.dim() <= kMaxL1ExtremeDim)) {
    return norm_closed_form(m, f);
  }
  throw CapacityExceeded("L1(m) norm: support size " + std::to_string(s.size()) +
                         " exceeds the exact cutoff " + std::to_string(opts.exact_cutoff) +
                         " and no closed form applies");
}

/// Semivariation ||m||(A) = ||chi_A||_{L1(m)}.
inline double semivariation(const VectorMeasure& m, const MeasurableSet& a,
                            const NormOptions& opts = {}) {
  return l1_norm(m, SimpleFunction::indicator(a), opts).value;
}

/// sup_A ||int f h_A dm - int f h_A dm'||, i.e. the norm of f in L1(m - m').
inline double deviation(const VectorMeasure& m, const VectorMeasure& other,
                        const SimpleFunction& f, const NormOptions& opts = {}) {
  return l1_norm(combine(m, -1.0, other), f, opts).value;
}

/// Checks | ||f||_{L1(m)} - ||f||_{L1(m')} | <= deviation(m, m', f) + tol.
inline bool norm_gap_bound_check(const VectorMeasure& m, const VectorMeasure& other,
                                 const SimpleFunction& f, const NormOptions& opts = {},
                                 double tol = 1e-10) {
  const double a = l1_norm(m, f, opts).value;
  const double b = l1_norm(other, f, opts).value;
  return std::abs(a - b) <= deviation(m, other, f, opts) + tol;
}

// ---------------------------------------------------------------------------
// Koethe dual
// ---------------------------------------------------------------------------

/// L1-kind dimension limit for the Koethe LP (2^(d-1) norm rows).
inline constexpr std::size_t kMaxKoetheL1Dim = 14;

struct KoetheOptions {
  std::size_t lp_cutoff = 12;
  std::size_t exact_cutoff = kDefaultExactCutoff;
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
};

struct KoetheResult {
  double value = 0.0;
  NormMethod method = NormMethod::Exact;
};

namespace detail {

/// Above this many distinct norm rows the Koethe LP is solved through its
/// dual, whose tableau has one row per support atom instead.
inline constexpr std::size_t kKoethePrimalRows = 512;

/// Rows |<m_i, x*>| over the half extreme-point set, deduplicated and with
/// dominated rows removed (a row below another one componentwise is implied).
inline std::vector<std::vector<double>> koethe_rows(const VectorMeasure& m,
                                                    const std::vector<std::size_t>& support) {
  const auto functionals = dual_extreme_points(m.value_space(), /*half=*/true);
  std::vector<std::vector<double>> rows;
  rows.reserve(functionals.size());
  for (const auto& xs : functionals) {
    std::vector<double> r(support.size());
    for (std::size_t t = 0; t < support.size(); ++t) r[t] = std::abs(pair(m.atom(support[t]), xs));
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<bool> dominated(rows.size(), false);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows.size() && !dominated[a]; ++b) {
      if (a == b || dominated[b]) continue;
      bool below = true;
      for (std::size_t t = 0; t < rows[a].size() && below; ++t) below = rows[a][t] <= rows[b][t];
      dominated[a] = below;
    }
  }
  std::vector<std::vector<double>> kept;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (!dominated[a]) kept.push_back(std::move(rows[a]));
  }
  return kept;
}

/// maximize sum_i f_i g_i mu_i over u >= |f| and one norm row per
/// functional.
inline KoetheResult koethe_primal(const VectorMeasure& m, const SimpleFunction& g,
                                  const std::vector<std::size_t>& support,
                                  const std::vector<std::vector<double>>& rows) {
  const std::size_t k = support.size();
  // Variables: f_0..f_{k-1} (free), u_0..u_{k-1} >= 0 with u >= |f|.
  LinearProgram lp(2 * k);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t i = support[t];
    lp.objective[t] = g[i] * m.space().weight(i);
    lp.set_free(t);
    std::vector<double> up(2 * k, 0.0);
    up[t] = 1.0;
    up[k + t] = -1.0;
    lp.add(up, Relation::LessEq, 0.0);
    std::vector<double> down(2 * k, 0.0);
    down[t] = -1.0;
    down[k + t] = -1.0;
    lp.add(down, Relation::LessEq, 0.0);
  }
  for (const auto& r : rows) {
    std::vector<double> row(2 * k, 0.0);
    std::copy(r.begin(), r.end(), row.begin() + static_cast<std::ptrdiff_t>(k));
    lp.add(std::move(row), Relation::LessEq, 1.0);
  }
  const LPSolution sol = solve_lp(lp);
  switch (sol.status) {
    case LPStatus::Optimal: return {std::max(sol.value, 0.0), NormMethod::Exact};
    case LPStatus::Unbounded:
      // g charges an atom that is null for m.
      return {std::numeric_limits<double>::infinity(), NormMethod::Exact};
    case LPStatus::Infeasible: break;
  }
  throw LPInfeasible("Koethe LP reported infeasible although f = 0 is feasible");
}

/// The same value by duality: with f_i = sign(g_i) u_i at the optimum, the
/// primal is max sum |g_i| mu_i u_i over {u >= 0 : R u <= 1}, whose dual is
/// min sum y over {y >= 0 : R^T y >= |g mu|}.
inline KoetheResult koethe_dual_lp(const VectorMeasure& m, const SimpleFunction& g,
                                   const std::vector<std::size_t>& support,
                                   const std::vector<std::vector<double>>& rows) {
  const std::size_t k = support.size();
  LinearProgram lp(rows.size());
  std::fill(lp.objective.begin(), lp.objective.end(), -1.0);
  for (std::size_t t = 0; t < k; ++t) {
    std::vector<double> c(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) c[r] = rows[r][t];
    const std::size_t i = support[t];
    lp.add(std::move(c), Relation::GreaterEq, std::abs(g[i]) * m.space().weight(i));
  }
  const LPSolution sol = solve_lp(lp);
  switch (sol.status) {
    case LPStatus::Optimal: return {std::max(-sol.value, 0.0), NormMethod::Exact};
    case LPStatus::Infeasible:
      return {std::numeric_limits<double>::infinity(), NormMethod::Exact};
    case LPStatus::Unbounded: break;
  }
  throw LPInfeasible("dual Koethe LP is unbounded below although y >= 0 has cost >= 0");
}

inline KoetheResult koethe_lp(const VectorMeasure& m, const SimpleFunction& g,
                              const std::vector<std::size_t>& support,
                              std::size_t primal_rows = kKoethePrimalRows) {
  const NormSpec& x = m.value_space();
  if (x.kind() == NormKind::L1 && x.dim() > kMaxKoetheL1Dim) {
    throw CapacityExceeded("Koethe LP limited to L1-kind value spaces with d <= " +
                           std::to_string(kMaxKoetheL1Dim));
  }
  const auto rows = koethe_rows(m, support);
  if (rows.size() <= primal_rows) return koethe_primal(m, g, support, rows);
  return koethe_dual_lp(m, g, support, rows);
}

/// Projected gradient ascent on |<f, g mu>| / ||f||_{L1(m)} for Euclidean
/// value spaces; a lower bound.
inline KoetheResult koethe_ascent(const VectorMeasure& m, const SimpleFunction& g,
                                  const std::vector<std::size_t>& support,
                                  const KoetheOptions& opts) {
  const std::size_t n = m.num_atoms();
  const std::size_t d = m.dim();
  const NormSpec& x = m.value_space();
  std::vector<double> c(n, 0.0);
  for (std::size_t i : support) c[i] = g[i] * m.space().weight(i);

  auto ratio_and_grad = [&](const SimpleFunction& f, std::vector<double>* grad) {
    const NormResult nr = norm_exact(m, f, opts.exact_cutoff);
    double cf = 0.0;
    for (std::size_t i : support) cf += c[i] * f[i];
    if (nr.value <= 0.0) return 0.0;
    if (grad != nullptr) {
      const Vector s = integrate_signed(m, f, nr.witness);
      Vector ws(d);
      for (std::size_t j = 0; j < d; ++j) ws[j] = x.scale(j) * x.scale(j) * s[j];
      grad->assign(n, 0.0);
      for (std::size_t i : support) {
        const double h = nr.witness.contains(i) ? 1.0 : -1.0;
        double dn = 0.0;
        for (std::size_t j = 0; j < d; ++j) dn += m.atom(i)[j] * ws[j];
        dn *= h / nr.value;
        (*grad)[i] = c[i] / nr.value - cf * dn / (nr.value * nr.value);
      }
    }
    return cf / nr.value;
  };

  double best = 0.0;
  for (std::size_t i : support) {
    const double r = std::abs(ratio_and_grad(SimpleFunction::indicator(n, i), nullptr));
    if (std::isfinite(r)) best = std::max(best, r);
  }
  Rng rng(opts.seed);
  std::vector<double> grad;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    SimpleFunction f = SimpleFunction::zero(n);
    for (std::size_t i : support) f[i] = r == 0 ? (g[i] > 0 ? 1.0 : -1.0) : rng.gaussian();
    for (int iter = 0; iter < 60; ++iter) {
      double val = ratio_and_grad(f, &grad);
      if (val < 0.0) {
        f = f.scaled(-1.0);
        val = ratio_and_grad(f, &grad);
      }
      best = std::max(best, val);
      double gnorm = 0.0;
      for (double v : grad) gnorm += v * v;
      gnorm = std::sqrt(gnorm);
      if (gnorm < 1e-14) break;
      double fnorm = 0.0;
      for (std::size_t i : support) fnorm += f[i] * f[i];
      fnorm = std::sqrt(fnorm);
      const double step = 0.5 * fnorm / std::sqrt(iter + 1.0) / gnorm;
      for (std::size_t i : support) f[i] += step * grad[i];
    }
  }
  return {best, NormMethod::Heuristic};
}

}  // namespace detail

/// ||g||_{(L1(m))'} = sup{ |sum_i f_i g_i mu_i| : ||f||_{L1(m)} <= 1 }.
///
/// Polyhedral X: solved exactly as a linear program in (f, u) with
/// u >= |f| and one norm row per dual extreme point. Euclidean X: gradient
/// ascent, flagged HEURISTIC. Atoms where g vanishes are dropped first;
/// `lp_cutoff` bounds the remaining support.
inline KoetheResult koethe_dual_norm(const VectorMeasure& m, const SimpleFunction& g,
                                     const KoetheOptions& opts = {}) {
  detail::require_dim(g.size(), m.num_atoms(), "koethe_dual_norm");
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] != 0.0) support.push_back(i);
  }
  const NormMethod method =
      m.value_space().polyhedral() ? NormMethod::Exact : NormMethod::Heuristic;
  if (support.empty()) return {0.0, method};
  detail::check_cutoff(support.size(), opts.lp_cutoff, "koethe_dual_norm");
  if (method == NormMethod::Exact) return detail::koethe_lp(m, g, support);
  return detail::koethe_ascent(m, g, support, opts);
}

}  // namespace vml

#endif  // VML_L1M_NORM_HPP
