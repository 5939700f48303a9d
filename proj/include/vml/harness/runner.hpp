#ifndef VML_HARNESS_RUNNER_HPP
#define VML_HARNESS_RUNNER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vml/harness/report.hpp"
#include "vml/harness/scenario.hpp"
#include "vml/vml.hpp"

namespace vml::harness {

/// Pool size from VML_THREADS, else the number of logical cores.
inline std::size_t default_threads() {
  if (const char* env = std::getenv("VML_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs task(0..count-1) on at most `threads` workers. Results land in
/// their own slot, so the output order never depends on scheduling.
/// A task that throws leaves its slot empty and records the exception.
template <class T>
struct Slot {
  std::optional<T> value;
  std::exception_ptr error;
};

template <class T>
std::vector<Slot<T>> parallel_map(std::size_t count, std::size_t threads,
                                  const std::function<T(std::size_t)>& task) {
  std::vector<Slot<T>> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i].value.emplace(task(i));
      } catch (...) {
        out[i].error = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(threads, 1), count);
  if (n <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  return out;
}

struct RunOptions {
  std::optional<std::size_t> exact_cutoff;  // overrides every experiment
  std::size_t threads = default_threads();
};

inline const std::vector<std::string>& net_columns() {
  static const std::vector<std::string> cols{"level", "norm_gap", "deviation", "pointwise_gap",
                                             "weakstar_gap"};
  return cols;
}

namespace detail {

struct Context {
  const Scenario& scenario;
  const RunOptions& options;
  MeasureSpace space;
  NormSpec x;
  VectorMeasure m;
};

using Row = std::vector<json>;

inline ErrorInfo describe(std::exception_ptr p) {
  try {
    std::rethrow_exception(p);
  } catch (const std::exception& e) {
    return {error_type(e), e.what()};
  } catch (...) {
    return {"Error", "unknown exception"};
  }
}

/// Fills `result` from the per-point slots: finished rows in index order,
/// and the first failure as the error.
inline void collect(ExperimentResult& result, std::vector<Slot<Row>> slots) {
  for (auto& s : slots) {
    if (s.value) {
      result.rows.push_back(std::move(*s.value));
    } else if (!result.error) {
      result.error = describe(s.error);
    }
  }
}

inline NormOptions norm_options(const Context& c, const ExperimentSpec& e) {
  NormOptions o;
  if (e.exact_cutoff) o.exact_cutoff = *e.exact_cutoff;
  if (c.options.exact_cutoff) o.exact_cutoff = *c.options.exact_cutoff;
  return o;
}

inline std::uint64_t seed_of(const Context& c, const ExperimentSpec& e) {
  return e.seed.value_or(c.scenario.seed);
}

inline std::string mask_string(const MeasurableSet& a) {
  std::string s(a.size(), '0');
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.contains(i)) s[i] = '1';
  }
  return s;
}

inline void run_norm(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  r.columns = {"function", "method", "value", "witness"};
  std::vector<std::size_t> fs;
  if (e.function) {
    fs.push_back(*e.function);
  } else {
    for (std::size_t k = 0; k < c.scenario.functions.size(); ++k) fs.push_back(k);
  }
  std::vector<std::string> methods;
  if (e.method == "all") {
    methods = {"exact", "closed_form", "heuristic"};
  } else {
    methods = {e.method};
  }
  const NormOptions opts = norm_options(c, e);
  const std::size_t count = fs.size() * methods.size();
  collect(r, parallel_map<Row>(count, c.options.threads, [&](std::size_t idx) {
            const std::size_t fi = fs[idx / methods.size()];
            const std::string& method = methods[idx % methods.size()];
            const SimpleFunction f = scenario_function(c.scenario, fi);
            NormResult nr;
            if (method == "auto") {
              nr = l1_norm(c.m, f, opts);
            } else if (method == "exact") {
              nr = norm_exact(c.m, f, opts.exact_cutoff);
            } else if (method == "closed_form") {
              nr = norm_closed_form(c.m, f);
            } else {
              nr = norm_heuristic(c.m, f, e.restarts, seed_of(c, e));
            }
            return Row{cell(fi), cell(std::string(to_string(nr.method))), cell(nr.value),
                       cell(mask_string(nr.witness))};
          }));
}

inline void run_net_experiment(const Context& c, const ExperimentSpec& e, ExperimentResult& r,
                               const std::vector<VectorMeasure>& net,
                               const std::vector<SimpleFunction>& tests) {
  r.columns = net_columns();
  const SimpleFunction f = scenario_function(c.scenario, e.function.value_or(0));
  const auto probes = coordinate_probes(c.m.dim());
  const NormOptions opts = norm_options(c, e);
  collect(r, parallel_map<Row>(net.size(), c.options.threads, [&](std::size_t k) {
            const NetReport nr = run_net(c.m, std::span(&net[k], 1), f, probes, tests, opts);
            const NetLevel& lv = nr.levels.front();
            return Row{cell(k), cell(lv.norm_gap), cell(lv.deviation), cell(lv.pointwise_gap),
                       cell(lv.weakstar_gap)};
          }));
}

inline void run_martingale(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  const auto chain = dyadic_chain(e.levels, c.space);
  const SimpleFunction f = scenario_function(c.scenario, e.function.value_or(0));
  run_net_experiment(c, e, r, martingale_net(c.m, chain), default_tests(chain.back(), f));
}

inline void run_basis(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  const SimpleFunction f = scenario_function(c.scenario, e.function.value_or(0));
  run_net_experiment(c, e, r, basis_net(c.m), default_tests(Partition::singletons(c.space.size()), f));
}

inline void run_rn(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  const SimpleFunction f = scenario_function(c.scenario, e.function.value_or(0));
  if (e.family == "conditional_expectation") {
    const auto chain = dyadic_chain(e.levels, c.space);
    run_net_experiment(c, e, r, conditional_expectation_rn_net(c.m, chain),
                       default_tests(chain.back(), f));
  } else {
    run_net_experiment(c, e, r, coordinate_rn_net(c.m),
                       default_tests(Partition::singletons(c.space.size()), f));
  }
}

inline Row defect_row(std::size_t n, const std::string& op, const DefectReport& d) {
  return Row{cell(n), cell(op), cell(d.norm_g), cell(d.norm_t), cell(d.norm_sum), cell(d.defect)};
}

inline void run_daugavet(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  r.columns = {"n", "operator", "norm_g", "norm_t", "norm_sum", "defect"};
  if (e.op == "measure") {
    r.rows.push_back(defect_row(c.space.size(), "measure",
                                daugavet_defect(OperatorMatrix::from_measure(c.m))));
    return;
  }
  struct Point {
    std::size_t n;
    double sign;  // 0 marks the shift-center construction
  };
  std::vector<Point> points;
  for (std::size_t n : e.sizes) {
    if (e.op == "center_shift") {
      points.push_back({n, 0.0});
    } else {
      if (e.sign != "positive") points.push_back({n, -1.0});
      if (e.sign != "negative") points.push_back({n, 1.0});
    }
  }
  collect(r, parallel_map<Row>(points.size(), c.options.threads, [&](std::size_t k) {
            const Point& p = points[k];
            if (p.sign == 0.0) {
              return defect_row(p.n, "center_shift", center_shift_point(p.n).report);
            }
            const SweepPoint sp = rank_one_daugavet_point(p.n, p.sign);
            return defect_row(p.n, p.sign < 0 ? "negative_rank_one" : "positive_rank_one",
                              sp.report);
          }));
}

inline void run_lemma4(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  r.columns = {"lambda", "lhs", "rhs", "column_max", "gap"};
  const VectorMeasure other =
      e.other ? build_measure(*e.other, c.space, c.x, c.scenario.seed)
              : canonical_pair(c.space, lemma4_g(e, c.space), c.scenario.tolerance).second;
  collect(r, parallel_map<Row>(e.lambdas.size(), c.options.threads, [&](std::size_t k) {
            const Lemma4Result l = lemma4_identity_check(c.m, other, e.lambdas[k]);
            return Row{cell(e.lambdas[k]), cell(l.lhs), cell(l.rhs), cell(l.column_max),
                       cell(l.gap)};
          }));
}

inline void run_theorem_a(const Context& c, const ExperimentSpec& e, ExperimentResult& r) {
  r.columns = {"index", "gap_norm", "c_estimate"};
  TheoremAOptions opts;
  opts.samples = e.samples;
  opts.seed = seed_of(c, e);
  auto row = [](std::size_t k, const TheoremAResult& t) {
    return Row{cell(k), cell(t.gap_norm), cell(t.c_estimate)};
  };
  if (e.family == "martingale") {
    const auto gaps = identity_martingale_gaps(c.space, e.levels, opts);
    for (std::size_t k = 0; k < gaps.size(); ++k) r.rows.push_back(row(k, gaps[k]));
  } else if (e.family == "rn_span") {
    collect(r, parallel_map<Row>(e.counts.size(), c.options.threads, [&](std::size_t k) {
              return row(e.counts[k], identity_rn_span_gap(c.space, e.counts[k], opts));
            }));
  } else {
    // G = I_m against the single part -(int . dmu) y, y the image of the constant 1.
    const OperatorMatrix g = OperatorMatrix::from_measure(c.m);
    const Vector y = g.apply(SimpleFunction::constant(c.space.size(), 1.0));
    const std::vector<OperatorMatrix> parts{OperatorMatrix::rank_one(
        c.space, c.x, SimpleFunction::constant(c.space.size(), -1.0), y)};
    r.rows.push_back(row(0, theorem_a_gap(g, parts, opts)));
  }
}

}  // namespace detail

/// Runs one experiment. Module errors are recorded in the result; rows
/// finished before the failure are kept.
inline ExperimentResult run_experiment(const Scenario& s, const ExperimentSpec& e,
                                       const RunOptions& options = {}) {
  ExperimentResult r;
  r.kind = e.kind;
  r.label = e.label;
  try {
    const MeasureSpace space = build_space(s);
    const NormSpec x = build_value_space(s, space);
    const detail::Context c{s, options, space, x, build_measure(s.measure, space, x, s.seed)};
    if (e.kind == "norm") {
      detail::run_norm(c, e, r);
    } else if (e.kind == "martingale") {
      detail::run_martingale(c, e, r);
    } else if (e.kind == "basis") {
      detail::run_basis(c, e, r);
    } else if (e.kind == "rn_net") {
      detail::run_rn(c, e, r);
    } else if (e.kind == "daugavet") {
      detail::run_daugavet(c, e, r);
    } else if (e.kind == "lemma4") {
      detail::run_lemma4(c, e, r);
    } else if (e.kind == "theorem_a") {
      detail::run_theorem_a(c, e, r);
    } else {
      throw ValidationError("unknown experiment kind '" + e.kind + "'");
    }
  } catch (const std::exception& ex) {
    if (!r.error) r.error = ErrorInfo{error_type(ex), ex.what()};
  }
  return r;
}

/// Runs every experiment of the scenario in order.
inline Report run(const Scenario& s, const RunOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = s.source;
  report.metadata.seed = s.seed;
  for (const auto& e : s.experiments) report.experiments.push_back(run_experiment(s, e, options));
  report.metadata.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// True if any experiment failed on a capacity limit.
inline bool has_capacity_error(const Report& r) {
  return std::any_of(r.experiments.begin(), r.experiments.end(), [](const auto& e) {
    return e.error && e.error->type == "CapacityExceeded";
  });
}

inline bool has_error(const Report& r) {
  return std::any_of(r.experiments.begin(), r.experiments.end(),
                     [](const auto& e) { return e.error.has_value(); });
}

}  // namespace vml::harness

#endif  // VML_HARNESS_RUNNER_HPP
