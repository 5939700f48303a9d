#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vml/harness/presets.hpp"
#include "vml/harness/report.hpp"
#include "vml/harness/runner.hpp"
#include "vml/harness/scenario.hpp"

namespace {

using namespace vml::harness;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCapacity = 2;

struct Globals {
  std::string scenario_path;
  std::string preset;
  std::string out = "-";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> exact_cutoff;
  std::optional<double> tolerance;
};

struct Overrides {
  std::optional<std::size_t> levels;
  std::optional<std::size_t> function;
  std::optional<std::string> method;
  std::optional<std::size_t> restarts;
  std::vector<double> lambdas;
  std::vector<std::size_t> sizes;
  std::optional<std::string> sign;
  std::optional<std::string> op;
  std::optional<std::string> family;
  std::vector<std::size_t> counts;
  std::optional<std::size_t> samples;

  bool any() const {
    return levels || function || method || restarts || !lambdas.empty() || !sizes.empty() ||
           sign || op || family || !counts.empty() || samples;
  }

  void apply(ExperimentSpec& e) const {
    if (levels) e.levels = *levels;
    if (function) e.function = *function;
    if (method) e.method = *method;
    if (restarts) e.restarts = *restarts;
    if (!lambdas.empty()) e.lambdas = lambdas;
    if (!sizes.empty()) e.sizes = sizes;
    if (sign) e.sign = *sign;
    if (op) e.op = *op;
    if (family) e.family = *family;
    if (!counts.empty()) e.counts = counts;
    if (samples) e.samples = *samples;
  }
};

Scenario load(const Globals& g, const std::string& fallback_preset) {
  if (!g.scenario_path.empty() && !g.preset.empty()) {
    throw vml::ValidationError("--scenario and --preset are mutually exclusive");
  }
  json doc = g.scenario_path.empty() ? preset_json(g.preset.empty() ? fallback_preset : g.preset)
                                     : json();
  Scenario s = g.scenario_path.empty() ? parse_scenario(doc) : load_scenario(g.scenario_path);
  if (g.seed) {
    s.seed = *g.seed;
    s.source["seed"] = *g.seed;
  }
  if (g.tolerance) {
    s.tolerance = *g.tolerance;
    s.source["tolerance"] = *g.tolerance;
  }
  return s;
}

/// Keeps the experiments of `kind` (all of them for an empty kind). With
/// overrides, or when the scenario has none of that kind, a default one
/// is added or adjusted.
void select(Scenario& s, const std::string& kind, const std::string& family,
            const Overrides& o) {
  if (kind.empty()) return;
  std::vector<ExperimentSpec> kept;
  for (const auto& e : s.experiments) {
    if (e.kind == kind && (family.empty() || e.family == family)) kept.push_back(e);
  }
  if (kept.empty()) {
    ExperimentSpec e;
    e.kind = kind;
    e.label = kind;
    e.family = family;
    if (kind == "rn_net" && family.empty()) e.family = "coordinate";
    if (kind == "theorem_a" && family.empty()) e.family = "integral";
    if (kind == "daugavet" && e.sizes.empty()) e.sizes = {s.space.n};
    if (kind == "martingale" && !o.levels) e.levels = 1;
    kept.push_back(std::move(e));
  }
  for (auto& e : kept) o.apply(e);
  s.experiments = std::move(kept);
}

int execute(const Globals& g, const std::string& kind, const std::string& family,
            const Overrides& o, const std::string& fallback_preset) {
  Scenario s = load(g, fallback_preset);
  select(s, kind, family, o);
  validate(s);
  RunOptions opts;
  opts.exact_cutoff = g.exact_cutoff;
  const Report report = run(s, opts);
  emit(report, g.format, g.out);
  for (const auto& e : report.experiments) {
    if (e.error) std::cerr << "vml: " << e.label << ": " << e.error->type << ": " << e.error->message << "\n";
  }
  if (has_capacity_error(report)) return kExitCapacity;
  if (has_error(report)) return kExitValidation;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms of vector measures, approximation nets and Daugavet defects"};
  app.set_version_flag("--version", std::string(VML_VERSION_STRING));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--scenario", g.scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--preset", g.preset, "Builtin scenario name (see `vml presets`)");
  app.add_option("--out", g.out, "Output path, - for stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Overrides the scenario seed");
  app.add_option("--exact-cutoff", g.exact_cutoff, "Support size limit for exact enumeration");
  app.add_option("--tolerance", g.tolerance, "Overrides the scenario tolerance");

  Overrides o;
  std::string kind;
  std::string family;
  std::string fallback = "canonical-l1";

  auto* norm = app.add_subcommand("norm", "L1(m) norms of the scenario functions")->fallthrough();
  norm->add_option("--method", o.method, "auto, exact, closed_form, heuristic or all")
      ->check(CLI::IsMember({"auto", "exact", "closed_form", "heuristic", "all"}));
  norm->add_option("--function", o.function, "Function index");
  norm->add_option("--restarts", o.restarts, "Heuristic restarts");
  norm->callback([&] { kind = "norm"; });

  auto* converge = app.add_subcommand("converge", "Convergence tables of approximation nets");
  converge->fallthrough()->require_subcommand(1);
  auto* mart = converge->add_subcommand("martingale", "Martingale measures on a dyadic chain")
                   ->fallthrough();
  mart->add_option("--levels", o.levels, "Depth of the dyadic chain");
  mart->add_option("--function", o.function, "Function index");
  mart->callback([&] { kind = "martingale"; });
  auto* basis = converge->add_subcommand("basis", "Coordinate projections P_k o m")->fallthrough();
  basis->add_option("--function", o.function, "Function index");
  basis->callback([&] { kind = "basis"; });
  auto* rn = converge->add_subcommand("rn", "Finite-rank Radon-Nikodym operators")->fallthrough();
  rn->add_option("--family", o.family, "coordinate or conditional_expectation")
      ->check(CLI::IsMember({"coordinate", "conditional_expectation"}));
  rn->add_option("--levels", o.levels, "Depth of the dyadic chain");
  rn->add_option("--function", o.function, "Function index");
  rn->callback([&] { kind = "rn_net"; });

  auto* daug = app.add_subcommand("daugavet", "Daugavet defects over a size sweep")->fallthrough();
  daug->add_option("--sizes", o.sizes, "Atom counts")->delimiter(',');
  daug->add_option("--sign", o.sign, "negative, positive or both")
      ->check(CLI::IsMember({"negative", "positive", "both"}));
  daug->add_option("--operator", o.op, "rank_one, center_shift or measure")
      ->check(CLI::IsMember({"rank_one", "center_shift", "measure"}));
  daug->callback([&] {
    kind = "daugavet";
    fallback = "daugavet-sweep";
  });

  auto* lemma4 = app.add_subcommand("lemma4", "Operator norm against Radon-Nikodym derivatives")
                     ->fallthrough();
  lemma4->add_option("--lambda", o.lambdas, "Coefficients")->delimiter(',');
  lemma4->callback([&] { kind = "lemma4"; });

  auto* theorem = app.add_subcommand("theorem-a", "Distance of an operator to sums of parts")
                      ->fallthrough();
  theorem->add_option("--family", o.family, "integral, martingale or rn_span")
      ->check(CLI::IsMember({"integral", "martingale", "rn_span"}));
  theorem->add_option("--levels", o.levels, "Depth of the dyadic chain");
  theorem->add_option("--counts", o.counts, "Numbers of parts")->delimiter(',');
  theorem->add_option("--samples", o.samples, "Random rank-one probes");
  theorem->callback([&] {
    kind = "theorem_a";
    if (o.family) family = *o.family;
  });

  auto* report = app.add_subcommand("report", "Run every experiment of the scenario")->fallthrough();
  bool report_selected = false;
  report->callback([&] { report_selected = true; });

  auto* presets = app.add_subcommand("presets", "List the builtin scenarios");
  auto* dump = app.add_subcommand("dump-preset", "Print a builtin scenario as JSON");
  std::string dump_name;
  dump->add_option("name", dump_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (presets->parsed()) {
      for (const auto& name : preset_names()) {
        std::printf("%-16s %s\n", name.c_str(), std::string(preset_summary(name)).c_str());
      }
      return kExitOk;
    }
    if (dump->parsed()) {
      std::cout << preset_json(dump_name).dump(2) << "\n";
      return kExitOk;
    }
    if (report_selected) kind.clear();
    if (kind.empty() && !report_selected) return kExitValidation;
    return execute(g, kind, family, o, fallback);
  } catch (const vml::CapacityExceeded& e) {
    std::cerr << "vml: capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const vml::Error& e) {
    std::cerr << "vml: " << e.what() << "\n";
    return kExitValidation;
  }
}
