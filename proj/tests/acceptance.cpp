// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vml/harness/presets.hpp"
#include "vml/harness/runner.hpp"
#include "vml/vml.hpp"

using namespace vml;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void check(bool cond, const std::string& why) {
    if (!cond && ok) note = why;
    ok = ok && cond;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// 1. ||f|| agrees for m0(A) = chi_A, m1(A) = mu(A) chi_Omega and L1(mu).
Outcome isometric_representation() {
  Outcome o;
  Rng rng(1001);
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto s = MeasureSpace::uniform(n);
    const auto m0 = VectorMeasure::indicator(s);
    const auto m1 = VectorMeasure::rank_one(s, NormSpec::l1_of(s), Vector(n, 1.0));
    for (int t = 0; t < 100; ++t) {
      const auto f = oracle::random_function(rng, n);
      const double a = l1_norm(m0, f).value;
      const double b = l1_norm(m1, f).value;
      const double c = f.l1_norm(s);
      o.check(std::abs(a - c) <= 1e-10 && std::abs(b - c) <= 1e-10,
              fmt("n=%g: norms differ from L1(mu) by %.3g", static_cast<double>(n),
                  std::max(std::abs(a - c), std::abs(b - c))));
    }
  }
  return o;
}

// 2. Exact enumeration against the closed form and against sampled sets.
Outcome norm_consistency() {
  Outcome o;
  Rng rng(1002);
  std::size_t closed = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t d = 1 + rng.below(6);
    const auto x = oracle::random_norm(rng, oracle::kind_of(static_cast<std::size_t>(t)), d);
    const auto m = oracle::random_measure(rng, oracle::random_space(rng, n), x, 0.1);
    const auto f = oracle::random_function(rng, n);
    const double exact = norm_exact(m, f).value;
    if (x.polyhedral()) {
      ++closed;
      const double cf = norm_closed_form(m, f).value;
      o.check(std::abs(exact - cf) <= 1e-10, fmt("closed form off by %.3g", std::abs(exact - cf)));
    }
    for (int k = 0; k < 20; ++k) {
      const double v = oracle::signed_integral_norm(m, f, oracle::random_set(rng, n));
      o.check(v <= exact + 1e-12, fmt("sampled set exceeds the norm by %.3g", v - exact));
    }
  }
  o.note = o.ok ? std::to_string(closed) + " closed-form comparisons" : o.note;
  return o;
}

// 3. | ||f||_m - ||f||_m' | <= deviation(m, m', f).
Outcome deviation_bound() {
  Outcome o;
  Rng rng(1003);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const std::size_t d = 1 + rng.below(5);
    const auto x = oracle::random_norm(rng, oracle::kind_of(static_cast<std::size_t>(t)), d);
    const auto s = oracle::random_space(rng, n);
    const auto m = oracle::random_measure(rng, s, x);
    // Half the partners are small perturbations, half are independent.
    const auto noise = oracle::random_measure(rng, s, x);
    const auto other = t % 2 ? combine(m, 1e-3, noise) : noise;
    const auto f = oracle::random_function(rng, n);
    const double gap = std::abs(l1_norm(m, f).value - l1_norm(other, f).value);
    const double dev = deviation(m, other, f);
    o.check(gap <= dev + 1e-10, fmt("gap %.17g exceeds deviation %.17g", gap, dev));
  }
  return o;
}

// 4. Martingale net on the canonical space.
Outcome martingale_convergence() {
  Outcome o;
  Rng rng(1004);
  for (std::size_t levels = 1; levels <= 6; ++levels) {
    const std::size_t n = std::size_t{1} << levels;
    const auto s = MeasureSpace::uniform(n);
    const auto m = VectorMeasure::indicator(s);
    const auto chain = dyadic_chain(levels, s);
    const auto net = martingale_net(m, chain);
    std::vector<SimpleFunction> fs{SimpleFunction::indicator(n, 0)};
    for (int k = 0; k < 3; ++k) {
      // Supports of at most 12 atoms keep every level on the exact path.
      SimpleFunction f = SimpleFunction::zero(n);
      for (std::size_t j = 0; j < std::min<std::size_t>(n, 12); ++j) f[rng.below(n)] = rng.gaussian();
      fs.push_back(f);
    }
    for (const auto& f : fs) {
      const auto r = run_net(m, net, f, coordinate_probes(n), default_tests(chain.back(), f));
      for (const auto& lv : r.levels) {
        o.check(lv.norm_gap <= lv.deviation + 1e-12,
                fmt("n=%g: norm_gap above deviation at level %g", static_cast<double>(n),
                    static_cast<double>(lv.index)));
      }
      o.check(r.levels.back().pointwise_gap == 0.0 && r.levels.back().norm_gap == 0.0,
              fmt("n=%g: finest level not exact", static_cast<double>(n)));
    }
    if (n == 4) {
      const auto r = run_net(m, net, fs[0], {}, {});
      o.check(std::abs(r.levels[1].pointwise_gap - 0.25) <= 1e-15,
              fmt("level-1 pointwise gap %.17g, expected 0.25", r.levels[1].pointwise_gap));
    }
  }
  return o;
}

// 5. Coordinate projections never increase the norm and recover it at k = d.
Outcome basis_convergence() {
  Outcome o;
  Rng rng(1005);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const std::size_t d = 1 + rng.below(8);
    const auto x = oracle::random_norm(rng, oracle::kind_of(static_cast<std::size_t>(t)), d);
    const auto m = oracle::random_measure(rng, oracle::random_space(rng, n), x);
    const auto f = oracle::random_function(rng, n);
    const double target = l1_norm(m, f).value;
    const auto net = basis_net(m);
    for (std::size_t k = 0; k < net.size(); ++k) {
      const double v = l1_norm(net[k], f).value;
      o.check(v <= target + 1e-10, fmt("projection %g exceeds target by %.3g",
                                       static_cast<double>(k + 1), v - target));
      if (k + 1 == d) o.check(std::abs(v - target) <= 1e-10, "no equality at k = d");
    }
  }
  return o;
}

// 6. ||phi^m_{x*}||' <= ||x*||.
Outcome derivative_bound() {
  Outcome o;
  Rng rng(1006);
  double worst = -1e300;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t d = 1 + rng.below(6);
    const auto kind = t % 2 ? NormKind::L1 : NormKind::LInf;
    const auto x = oracle::random_norm(rng, kind, d);
    const auto m = oracle::random_measure(rng, oracle::random_space(rng, n), x, 0.1);
    const auto xs = oracle::random_dual(rng, d);
    const auto r = koethe_dual_norm(m, rn_derivative(m, xs));
    const double bound = dual_norm(x, xs);
    worst = std::max(worst, r.value - bound);
    o.check(r.method == NormMethod::Exact, "LP path not taken");
    o.check(r.value <= bound + 1e-9, fmt("Koethe norm %.17g above dual norm %.17g", r.value, bound));
  }
  if (o.ok) o.note = fmt("max excess %.3g", worst);
  return o;
}

// 7. ||I_m|| = 1 for the canonical measure.
Outcome integration_map_norm() {
  Outcome o;
  for (std::size_t n : {4u, 64u}) {
    const auto v = opnorm_from_l1(OperatorMatrix::from_measure(VectorMeasure::indicator(MeasureSpace::uniform(n)))).value;
    o.check(std::abs(v - 1.0) <= 1e-12, fmt("n=%g: norm %.17g", static_cast<double>(n), v));
  }
  return o;
}

// 8. Defect of -(int . dmu) chi_Omega is 2/n; of the positive one, 0.
Outcome daugavet_decay() {
  Outcome o;
  for (std::size_t n : {4u, 64u, 1024u, 4096u}) {
    const double neg = rank_one_daugavet_point(n, -1.0).report.defect;
    const double pos = rank_one_daugavet_point(n, 1.0).report.defect;
    const double want = 2.0 / static_cast<double>(n);
    o.check(std::abs(neg - want) <= 1e-12, fmt("n=%g: defect %.17g", static_cast<double>(n), neg));
    o.check(std::abs(pos) <= 1e-12, fmt("n=%g: positive defect %.17g", static_cast<double>(n), pos));
  }
  return o;
}

// 9. Operator norm of I_m + lambda I_m' through the derivatives.
Outcome lemma4_identity() {
  Outcome o;
  Rng rng(1009);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const std::size_t d = 1 + rng.below(6);
    const auto kind = t % 2 ? NormKind::L1 : NormKind::LInf;
    const auto x = oracle::random_norm(rng, kind, d);
    const auto s = oracle::random_space(rng, n);
    const auto r = lemma4_identity_check(oracle::random_measure(rng, s, x),
                                         oracle::random_measure(rng, s, x), rng.uniform(-2.0, 2.0));
    o.check(r.gap <= 1e-10, fmt("gap %.3g (lhs %.17g)", r.gap, r.lhs));
  }
  const auto s = MeasureSpace::uniform(8);
  const auto [m0, m1] = canonical_pair(s, SimpleFunction::constant(8, 1.0));
  const auto c = lemma4_identity_check(m0, m1, 1.0);
  o.check(std::abs(c.lhs - 2.0) <= 1e-10 && std::abs(c.rhs - 2.0) <= 1e-10 && c.gap <= 1e-10,
          fmt("canonical pair lhs %.17g rhs %.17g", c.lhs, c.rhs));
  return o;
}

// 10. The heuristic never exceeds the exact value.
Outcome heuristic_soundness() {
  Outcome o;
  Rng rng(1010);
  std::size_t matches = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t d = 1 + rng.below(5);
    const auto x = oracle::random_norm(rng, oracle::kind_of(static_cast<std::size_t>(t)), d);
    const auto m = oracle::random_measure(rng, oracle::random_space(rng, n), x);
    const auto f = oracle::random_function(rng, n);
    const double exact = norm_exact(m, f).value;
    const double h = norm_heuristic(m, f, 8, static_cast<std::uint64_t>(t)).value;
    o.check(h <= exact + 1e-12, fmt("heuristic %.17g above exact %.17g", h, exact));
    if (std::abs(h - exact) <= 1e-12 * std::max(1.0, exact)) ++matches;
  }
  o.note = "match rate " + std::to_string(matches) + "/500" + (o.ok ? "" : "; " + o.note);
  return o;
}

// 11. Builtin scenarios give byte-identical JSON for the same seed.
Outcome determinism() {
  Outcome o;
  for (const auto& name : harness::preset_names()) {
    const auto s = harness::load_preset(name);
    auto a = harness::run(s);
    auto b = harness::run(s);
    a.metadata.wall_time_s = 0.0;
    b.metadata.wall_time_s = 0.0;
    o.check(harness::render_json(a) == harness::render_json(b), name + " differs between runs");
    o.check(!harness::has_error(a), name + " reported an error");
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "isometric representation m0 / m1 / L1(mu)", 1.0, isometric_representation},
      {2, "exact norm vs closed form and sampled sets", 10.0, norm_consistency},
      {3, "norm gap bounded by deviation", 10.0, deviation_bound},
      {4, "martingale convergence on dyadic chains", 5.0, martingale_convergence},
      {5, "basis projection convergence", 0.0, basis_convergence},
      {6, "Koethe norm of derivatives bounded by dual norm", 0.0, derivative_bound},
      {7, "integration map has norm one", 0.0, integration_map_norm},
      {8, "Daugavet defect of rank-one integral operators", 5.0, daugavet_decay},
      {9, "operator norm through Radon-Nikodym derivatives", 0.0, lemma4_identity},
      {10, "heuristic is a lower bound", 0.0, heuristic_soundness},
      {11, "deterministic builtin scenarios", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.ok = false;
      o.note = fmt("runtime %.2f s over the %.0f s budget", secs, c.budget_s);
    }
    if (!o.ok) ++failed;
    std::printf("%s [%2d] %-50s %8.3f s%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.note.empty() ? "" : "  ", o.note.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
