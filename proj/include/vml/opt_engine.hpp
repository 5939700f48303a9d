#ifndef VML_OPT_ENGINE_HPP
#define VML_OPT_ENGINE_HPP

#include <bit>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vml/errors.hpp"
#include "vml/rng.hpp"

namespace vml {

// ---------------------------------------------------------------------------
// Linear programming
// ---------------------------------------------------------------------------

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double bound = 0.0;
};

/// maximize objective . x subject to the constraints and per-variable
/// bounds. Bounds default to x >= 0; use -infinity / +infinity for free
/// directions.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(std::size_t vars = 0)
      : objective(vars, 0.0),
        lower(vars, 0.0),
        upper(vars, std::numeric_limits<double>::infinity()) {}

  std::size_t num_vars() const noexcept { return objective.size(); }

  void add(std::vector<double> coeffs, Relation rel, double bound) {
    constraints.push_back({std::move(coeffs), rel, bound});
  }
  void set_free(std::size_t j) {
    lower[j] = -std::numeric_limits<double>::infinity();
    upper[j] = std::numeric_limits<double>::infinity();
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> point;
  double value = 0.0;
};

namespace detail {

/// Dense tableau for max c.x, A x = b, x >= 0 with b >= 0 after setup.
class SimplexTableau {
 public:
  static constexpr double kPivotTol = 1e-9;

  SimplexTableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0),
        blocked_(cols, false) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  void block(std::size_t c) { blocked_[c] = true; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  /// Maximizes cost . x from the current basis with Bland's rule.
  /// Returns false when the objective is unbounded.
  bool optimize(const std::vector<double>& cost) {
    std::vector<double> reduced(cols_);
    for (std::size_t iter = 0;; ++iter) {
      for (std::size_t c = 0; c < cols_; ++c) {
        double z = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) z += cost[basis_[r]] * at(r, c);
        reduced[c] = cost[c] - z;
      }
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!blocked_[c] && reduced[c] > kPivotTol) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= kPivotTol) continue;
        const double ratio = rhs(r) / coef;
        if (leave == rows_ || ratio < best - kPivotTol ||
            (ratio <= best + kPivotTol && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) v += cost[basis_[r]] * rhs(r);
    return v;
  }

  std::vector<double> solution() const {
    std::vector<double> x(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) x[basis_[r]] = rhs(r);
    return x;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<bool> blocked_;
};

}  // namespace detail

/// Two-phase dense simplex with Bland's anti-cycling rule.
///
/// Variables are first shifted/split into nonnegative standard form; finite
/// upper bounds become extra rows. Deterministic for a given input.
inline LPSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  detail::require_dim(lp.lower.size(), n, "solve_lp lower bounds");
  detail::require_dim(lp.upper.size(), n, "solve_lp upper bounds");
  for (const auto& con : lp.constraints) {
    detail::require_dim(con.coeffs.size(), n, "solve_lp constraint");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();

  // x_j = offset_j + sign_j * y_{pos_j} (- y_{neg_j} for free variables).
  struct Map {
    double offset = 0.0;
    double sign = 1.0;
    std::size_t pos = 0;
    std::size_t neg = static_cast<std::size_t>(-1);
  };
  std::vector<Map> map(n);
  std::size_t ny = 0;
  std::vector<LinearConstraint> rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo > hi) return {LPStatus::Infeasible, {}, 0.0};
    Map& m = map[j];
    if (lo > -inf) {
      m.offset = lo;
      m.pos = ny++;
    } else if (hi < inf) {
      m.offset = hi;
      m.sign = -1.0;
      m.pos = ny++;
    } else {
      m.pos = ny++;
      m.neg = ny++;
    }
  }
  auto expand = [&](const std::vector<double>& coeffs, double& shift) {
    std::vector<double> out(ny, 0.0);
    shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Map& m = map[j];
      shift += coeffs[j] * m.offset;
      out[m.pos] += coeffs[j] * m.sign;
      if (m.neg != static_cast<std::size_t>(-1)) out[m.neg] -= coeffs[j];
    }
    return out;
  };
  for (const auto& con : lp.constraints) {
    double shift = 0.0;
    auto c = expand(con.coeffs, shift);
    rows.push_back({std::move(c), con.relation, con.bound - shift});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] > -inf && lp.upper[j] < inf) {
      std::vector<double> c(ny, 0.0);
      c[map[j].pos] = 1.0;
      rows.push_back({std::move(c), Relation::LessEq, lp.upper[j] - lp.lower[j]});
    }
  }
  double obj_shift = 0.0;
  std::vector<double> cost_y = expand(lp.objective, obj_shift);

  // Normalize to b >= 0, then count slack/surplus/artificial columns.
  for (auto& r : rows) {
    if (r.bound < 0.0) {
      for (double& c : r.coeffs) c = -c;
      r.bound = -r.bound;
      if (r.relation == Relation::LessEq) {
        r.relation = Relation::GreaterEq;
      } else if (r.relation == Relation::GreaterEq) {
        r.relation = Relation::LessEq;
      }
    }
  }
  const std::size_t m = rows.size();
  std::size_t slack_cols = 0;
  std::size_t art_cols = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::Equal) ++slack_cols;
    if (r.relation != Relation::LessEq) ++art_cols;
  }
  const std::size_t cols = ny + slack_cols + art_cols;
  detail::SimplexTableau t(m, cols);
  std::vector<double> phase1(cols, 0.0);
  std::size_t next_slack = ny;
  std::size_t next_art = ny + slack_cols;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < ny; ++c) t.at(r, c) = rows[r].coeffs[c];
    t.rhs(r) = rows[r].bound;
    switch (rows[r].relation) {
      case Relation::LessEq:
        t.at(r, next_slack) = 1.0;
        t.basis(r) = next_slack++;
        break;
      case Relation::GreaterEq:
        t.at(r, next_slack++) = -1.0;
        t.at(r, next_art) = 1.0;
        phase1[next_art] = -1.0;
        t.basis(r) = next_art++;
        break;
      case Relation::Equal:
        t.at(r, next_art) = 1.0;
        phase1[next_art] = -1.0;
        t.basis(r) = next_art++;
        break;
    }
  }

  if (art_cols > 0) {
    t.optimize(phase1);
    if (t.objective(phase1) < -1e-7) return {LPStatus::Infeasible, {}, 0.0};
    // Drive artificials out of the basis where possible; rows where that is
    // impossible are redundant and keep an artificial pinned at zero.
    const std::size_t first_art = ny + slack_cols;
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis(r) < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > detail::SimplexTableau::kPivotTol) {
          t.pivot(r, c);
          break;
        }
      }
    }
    for (std::size_t c = first_art; c < cols; ++c) t.block(c);
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t c = 0; c < ny; ++c) cost[c] = cost_y[c];
  if (!t.optimize(cost)) return {LPStatus::Unbounded, {}, 0.0};

  const auto y = t.solution();
  LPSolution sol;
  sol.status = LPStatus::Optimal;
  sol.point.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Map& mp = map[j];
    double v = mp.offset + mp.sign * y[mp.pos];
    if (mp.neg != static_cast<std::size_t>(-1)) v -= y[mp.neg];
    sol.point[j] = v;
  }
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.point[j];
  return sol;
}

// ---------------------------------------------------------------------------
// Sign patterns
// ---------------------------------------------------------------------------

using SignVector = std::vector<std::int8_t>;

inline constexpr std::size_t kMaxSignPatternLength = 24;

/// Visits all 2^(k-1) sign vectors of length k with eps[0] = +1 in
/// reflected Gray-code order. The visitor receives the current pattern and
/// the index flipped to reach it (or -1 for the first pattern), so running
/// sums can be updated with a single term per step. k = 0 visits the empty
/// pattern once.
template <class Visitor>
  requires std::invocable<Visitor&, const SignVector&, std::ptrdiff_t>
void enumerate_signs(std::size_t k, Visitor&& visit) {
  if (k > kMaxSignPatternLength) {
    throw CapacityExceeded("sign enumeration limited to k <= " +
                           std::to_string(kMaxSignPatternLength) + " (got " +
                           std::to_string(k) + ")");
  }
  SignVector eps(k, 1);
  visit(std::as_const(eps), std::ptrdiff_t{-1});
  if (k <= 1) return;
  const std::uint64_t steps = std::uint64_t{1} << (k - 1);
  for (std::uint64_t t = 1; t < steps; ++t) {
    const auto j = static_cast<std::size_t>(1 + std::countr_zero(t));
    eps[j] = static_cast<std::int8_t>(-eps[j]);
    visit(std::as_const(eps), static_cast<std::ptrdiff_t>(j));
  }
}

/// Objective over sign patterns that supports O(1)-ish single-flip updates.
template <class S>
concept FlipObjective = requires(S& s, const S& cs, const SignVector& eps, std::size_t i) {
  s.reset(eps);
  { cs.value() } -> std::convertible_to<double>;
  { cs.value_if_flipped(i) } -> std::convertible_to<double>;
  s.flip(i);
};

/// Adapts a plain callable `double(const SignVector&)` by recomputing.
template <class F>
class RecomputingObjective {
 public:
  explicit RecomputingObjective(F f) : f_(std::move(f)) {}
  void reset(const SignVector& eps) {
    eps_ = eps;
    value_ = f_(eps_);
  }
  double value() const { return value_; }
  double value_if_flipped(std::size_t i) const {
    SignVector e(eps_);
    e[i] = static_cast<std::int8_t>(-e[i]);
    return f_(e);
  }
  void flip(std::size_t i) {
    eps_[i] = static_cast<std::int8_t>(-eps_[i]);
    value_ = f_(eps_);
  }

 private:
  F f_;
  SignVector eps_;
  double value_ = 0.0;
};

struct ClimbResult {
  SignVector pattern;
  double value = -std::numeric_limits<double>::infinity();
};

/// Steepest-ascent single-flip local search from `restarts` random starts.
/// The first start is the all-plus pattern; later ones are drawn from a
/// generator seeded with `seed`.
template <FlipObjective Objective>
ClimbResult hill_climb(std::size_t k, Objective& objective, std::size_t restarts,
                       std::uint64_t seed) {
  if (restarts == 0) throw InvalidArgument("hill_climb needs restarts >= 1");
  Rng rng(seed);
  ClimbResult best;
  SignVector eps(k, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    if (r > 0) {
      for (auto& e : eps) e = rng.coin() ? 1 : -1;
    }
    objective.reset(eps);
    double current = objective.value();
    for (;;) {
      std::size_t best_flip = k;
      double best_value = current;
      for (std::size_t i = 0; i < k; ++i) {
        const double v = objective.value_if_flipped(i);
        if (v > best_value) {
          best_value = v;
          best_flip = i;
        }
      }
      const double tol = 1e-12 * std::max(1.0, std::abs(current));
      if (best_flip == k || best_value <= current + tol) break;
      objective.flip(best_flip);
      eps[best_flip] = static_cast<std::int8_t>(-eps[best_flip]);
      current = objective.value();
    }
    if (current > best.value) {
      best.value = current;
      best.pattern = eps;
    }
  }
  return best;
}

template <class F>
  requires std::invocable<F&, const SignVector&>
ClimbResult hill_climb(std::size_t k, F objective, std::size_t restarts,
                       std::uint64_t seed) {
  RecomputingObjective<F> adapter(std::move(objective));
  return hill_climb(k, adapter, restarts, seed);
}

}  // namespace vml

#endif  // VML_OPT_ENGINE_HPP
