#ifndef VML_HARNESS_PRESETS_HPP
#define VML_HARNESS_PRESETS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "vml/errors.hpp"
#include "vml/harness/scenario.hpp"

namespace vml::harness {

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"canonical-l1", "rank-one", "random-measure",
                                              "schauder", "daugavet-sweep"};
  return names;
}

inline std::string_view preset_summary(std::string_view name) {
  if (name == "canonical-l1") return "m(A) = chi_A on 4 uniform atoms; norms, martingale net, lemma4";
  if (name == "rank-one") return "m(A) = mu(A) g on 8 atoms; norms, defect of I_m, lemma4";
  if (name == "random-measure") return "Gaussian atoms in LINF^4 over 10 atoms; all norm methods, nets";
  if (name == "schauder") return "Gaussian atoms in l1^6 over 8 atoms; basis-projection net";
  if (name == "daugavet-sweep") return "rank-one and shift-center defects over n; distance-to-parts gaps";
  return "";
}

/// The preset as a scenario document, ready to be edited and fed back in.
inline json preset_json(std::string_view name) {
  if (name == "canonical-l1") {
    return {
        {"schema_version", 1},
        {"name", "canonical-l1"},
        {"seed", 0},
        {"space", {{"n", 4}, {"weights", "uniform"}}},
        {"value_space", {{"kind", "L1"}, {"scale", "l1-of-mu"}}},
        {"measure", {{"kind", "indicator"}}},
        {"functions", {{1, 0, 0, 0}, {1, -2, 0, 3}}},
        {"experiments",
         {{{"kind", "norm"}, {"method", "all"}},
          {{"kind", "martingale"}, {"levels", 2}, {"function", 0}},
          {{"kind", "rn_net"}, {"family", "conditional_expectation"}, {"levels", 2}},
          {{"kind", "lemma4"}, {"lambda", {1.0, 0.5, -1.0}}},
          {{"kind", "daugavet"}, {"operator", "measure"}},
          {{"kind", "theorem_a"}, {"family", "integral"}, {"samples", 64}}}},
    };
  }
  if (name == "rank-one") {
    return {
        {"schema_version", 1},
        {"name", "rank-one"},
        {"seed", 0},
        {"space", {{"n", 8}, {"weights", "uniform"}}},
        {"value_space", {{"kind", "L1"}, {"scale", "l1-of-mu"}}},
        {"measure", {{"kind", "rank_one"}, {"g", {1, 1, 1, 1, 1, 1, 1, 1}}}},
        {"functions", {{1, -1, 2, 0, 0, 3, -2, 1}, {1, 1, 1, 1, 1, 1, 1, 1}}},
        {"experiments",
         {{{"kind", "norm"}},
          {{"kind", "daugavet"}, {"operator", "measure"}},
          {{"kind", "lemma4"}, {"lambda", {1.0, -1.0}}},
          {{"kind", "martingale"}, {"levels", 3}}}},
    };
  }
  if (name == "random-measure") {
    return {
        {"schema_version", 1},
        {"name", "random-measure"},
        {"seed", 7},
        {"space", {{"n", 10}, {"weights", {0.05, 0.1, 0.15, 0.1, 0.05, 0.1, 0.1, 0.15, 0.1, 0.1}}}},
        {"value_space", {{"kind", "LINF"}, {"d", 4}, {"scale", "unit"}}},
        {"measure", {{"kind", "random"}, {"seed", 7}}},
        {"functions", {{1, -1, 0.5, 2, 0, -3, 1, 1, -0.5, 2}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}}},
        {"experiments",
         {{{"kind", "norm"}, {"method", "all"}, {"restarts", 16}},
          {{"kind", "basis"}},
          {{"kind", "rn_net"}, {"family", "coordinate"}},
          {{"kind", "lemma4"}, {"lambda", {1.0, -1.0}}, {"other", {{"kind", "random"}, {"seed", 11}}}},
          {{"kind", "theorem_a"}, {"family", "integral"}, {"samples", 32}}}},
    };
  }
  if (name == "schauder") {
    return {
        {"schema_version", 1},
        {"name", "schauder"},
        {"seed", 3},
        {"space", {{"n", 8}, {"weights", "uniform"}}},
        {"value_space", {{"kind", "L1"}, {"d", 6}, {"scale", "unit"}}},
        {"measure", {{"kind", "random"}, {"seed", 3}}},
        {"functions", {{1, 1, 1, 1, 1, 1, 1, 1}, {2, -1, 0, 1, -2, 0, 1, 1}}},
        {"experiments",
         {{{"kind", "basis"}, {"function", 0}},
          {{"kind", "basis"}, {"function", 1}, {"label", "basis-signed"}},
          {{"kind", "rn_net"}, {"family", "coordinate"}},
          {{"kind", "norm"}, {"method", "all"}}}},
    };
  }
  if (name == "daugavet-sweep") {
    return {
        {"schema_version", 1},
        {"name", "daugavet-sweep"},
        {"seed", 0},
        {"space", {{"n", 8}, {"weights", "uniform"}}},
        {"value_space", {{"kind", "L1"}, {"scale", "l1-of-mu"}}},
        {"measure", {{"kind", "indicator"}}},
        {"experiments",
         {{{"kind", "daugavet"}, {"sizes", {4, 64, 1024}}, {"sign", "both"}},
          {{"kind", "daugavet"}, {"operator", "center_shift"}, {"sizes", {4, 16, 64}},
           {"label", "center_shift"}},
          {{"kind", "lemma4"}, {"lambda", 1.0}},
          {{"kind", "theorem_a"}, {"family", "martingale"}, {"levels", 3}, {"samples", 32}},
          {{"kind", "theorem_a"}, {"family", "rn_span"}, {"counts", {1, 2, 4}}, {"samples", 32},
           {"label", "theorem_a_rn_span"}}}},
    };
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

inline Scenario load_preset(std::string_view name) { return load_scenario(preset_json(name)); }

}  // namespace vml::harness

#endif  // VML_HARNESS_PRESETS_HPP
