#ifndef VML_HARNESS_SCENARIO_HPP
#define VML_HARNESS_SCENARIO_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vml/vml.hpp"

namespace vml::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct SpaceSpec {
  std::size_t n = 0;
  std::vector<double> weights;  // empty: uniform
  double total = 1.0;
};

enum class ScaleMode { L1OfMu, Unit, Explicit };

struct ValueSpaceSpec {
  NormKind kind = NormKind::L1;
  std::size_t dim = 0;
  ScaleMode mode = ScaleMode::L1OfMu;
  std::vector<double> scale;
};

struct MeasureSpec {
  std::string kind = "indicator";  // indicator | rank_one | random | matrix | composed
  std::vector<double> g;
  std::optional<std::uint64_t> seed;
  std::vector<std::vector<double>> rows;
  std::size_t k = 0;
  std::shared_ptr<const MeasureSpec> base;
};

struct ExperimentSpec {
  std::string kind;
  std::string label;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> exact_cutoff;
  std::optional<std::size_t> function;

  // norm
  std::string method = "auto";
  std::size_t restarts = 8;
  // martingale, rn_net, theorem_a
  std::size_t levels = 0;
  std::string family;
  // daugavet
  std::vector<std::size_t> sizes;
  std::string sign = "negative";
  std::string op = "rank_one";
  // lemma4
  std::vector<double> lambdas{1.0};
  std::optional<MeasureSpec> other;
  std::vector<double> g;
  // theorem_a
  std::vector<std::size_t> counts;
  std::size_t samples = 64;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  SpaceSpec space;
  ValueSpaceSpec value_space;
  MeasureSpec measure;
  std::vector<std::vector<double>> functions;
  std::vector<ExperimentSpec> experiments;
  json source;  // the document as read, echoed into reports
};

namespace detail {

/// A JSON node together with its path, for error messages.
class Field {
 public:
  Field(const json& node, std::string path) : node_(&node), path_(std::move(path)) {}

  const json& node() const { return *node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("field '" + path_ + "': " + what);
  }

  void require_object(std::initializer_list<std::string_view> allowed) const {
    if (!node_->is_object()) fail("expected an object");
    for (const auto& [key, value] : node_->items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ParseError("field '" + child_path(key) + "': unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return node_->contains(key); }

  Field at(const std::string& key) const {
    if (!node_->contains(key)) throw ParseError("field '" + child_path(key) + "': missing");
    return Field((*node_)[key], child_path(key));
  }

  Field index(std::size_t i) const {
    return Field((*node_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t length() const {
    if (!node_->is_array()) fail("expected an array");
    return node_->size();
  }

  double number() const {
    if (!node_->is_number()) fail("expected a number");
    return node_->get<double>();
  }

  std::uint64_t u64() const {
    if (node_->is_number_unsigned()) return node_->get<std::uint64_t>();
    if (node_->is_number_integer() && node_->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(node_->get<std::int64_t>());
    }
    fail("expected a nonnegative integer");
  }

  std::size_t size() const { return static_cast<std::size_t>(u64()); }

  std::string str() const {
    if (!node_->is_string()) fail("expected a string");
    return node_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(length());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = index(i).number();
    return out;
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out(length());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = index(i).size();
    return out;
  }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* node_;
  std::string path_;
};

inline MeasureSpec parse_measure(const Field& f) {
  f.require_object({"kind", "g", "seed", "rows", "k", "base"});
  MeasureSpec m;
  m.kind = f.at("kind").str();
  if (m.kind == "indicator") {
    if (f.has("g") || f.has("rows") || f.has("k") || f.has("base") || f.has("seed")) {
      f.fail("indicator measure takes no parameters");
    }
  } else if (m.kind == "rank_one") {
    m.g = f.at("g").numbers();
  } else if (m.kind == "random") {
    if (f.has("seed")) m.seed = f.at("seed").u64();
  } else if (m.kind == "matrix") {
    const Field rows = f.at("rows");
    for (std::size_t i = 0; i < rows.length(); ++i) m.rows.push_back(rows.index(i).numbers());
  } else if (m.kind == "composed") {
    m.k = f.at("k").size();
    m.base = std::make_shared<MeasureSpec>(parse_measure(f.at("base")));
  } else {
    f.at("kind").fail("unknown measure kind '" + m.kind + "'");
  }
  return m;
}

inline NormKind parse_kind(const Field& f) {
  const std::string s = f.str();
  if (s == "L1") return NormKind::L1;
  if (s == "L2") return NormKind::L2;
  if (s == "LINF") return NormKind::LInf;
  f.fail("expected one of L1, L2, LINF");
}

inline void require_choice(const Field& f, const std::string& value,
                           std::initializer_list<std::string_view> choices) {
  if (std::find(choices.begin(), choices.end(), value) == choices.end()) {
    std::string list;
    for (auto c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
    f.fail("expected one of " + list);
  }
}

inline ExperimentSpec parse_experiment(const Field& f) {
  if (!f.node().is_object()) f.fail("expected an object");
  ExperimentSpec e;
  e.kind = f.at("kind").str();
  if (e.kind == "norm") {
    f.require_object({"kind", "label", "seed", "exact_cutoff", "function", "method", "restarts"});
  } else if (e.kind == "martingale") {
    f.require_object({"kind", "label", "seed", "exact_cutoff", "function", "levels"});
  } else if (e.kind == "basis") {
    f.require_object({"kind", "label", "seed", "exact_cutoff", "function"});
  } else if (e.kind == "rn_net") {
    f.require_object({"kind", "label", "seed", "exact_cutoff", "function", "family", "levels"});
  } else if (e.kind == "daugavet") {
    f.require_object({"kind", "label", "seed", "sizes", "sign", "operator"});
  } else if (e.kind == "lemma4") {
    f.require_object({"kind", "label", "seed", "lambda", "other", "g"});
  } else if (e.kind == "theorem_a") {
    f.require_object({"kind", "label", "seed", "family", "levels", "counts", "samples"});
  } else {
    f.at("kind").fail("unknown experiment kind '" + e.kind + "'");
  }
  e.label = f.has("label") ? f.at("label").str() : e.kind;
  if (f.has("seed")) e.seed = f.at("seed").u64();
  if (f.has("exact_cutoff")) e.exact_cutoff = f.at("exact_cutoff").size();
  if (f.has("function")) e.function = f.at("function").size();
  if (f.has("method")) {
    e.method = f.at("method").str();
    require_choice(f.at("method"), e.method, {"auto", "exact", "closed_form", "heuristic", "all"});
  }
  if (f.has("restarts")) e.restarts = f.at("restarts").size();
  if (f.has("levels")) e.levels = f.at("levels").size();
  if (e.kind == "rn_net") {
    e.family = f.has("family") ? f.at("family").str() : "coordinate";
    require_choice(f.has("family") ? f.at("family") : f, e.family, {"coordinate", "conditional_expectation"});
  } else if (e.kind == "theorem_a") {
    e.family = f.has("family") ? f.at("family").str() : "integral";
    require_choice(f.has("family") ? f.at("family") : f, e.family, {"integral", "martingale", "rn_span"});
  }
  if (f.has("sizes")) e.sizes = f.at("sizes").sizes();
  if (f.has("sign")) {
    e.sign = f.at("sign").str();
    require_choice(f.at("sign"), e.sign, {"negative", "positive", "both"});
  }
  if (f.has("operator")) {
    e.op = f.at("operator").str();
    require_choice(f.at("operator"), e.op, {"rank_one", "center_shift", "measure"});
  }
  if (f.has("lambda")) {
    const Field l = f.at("lambda");
    e.lambdas = l.node().is_array() ? l.numbers() : std::vector<double>{l.number()};
  }
  if (f.has("other")) e.other = parse_measure(f.at("other"));
  if (f.has("g")) e.g = f.at("g").numbers();
  if (f.has("counts")) e.counts = f.at("counts").sizes();
  if (f.has("samples")) e.samples = f.at("samples").size();
  return e;
}

inline std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace detail

/// Reads the documented schema; structural problems raise ParseError.
/// Semantic checks live in validate().
inline Scenario parse_scenario(const json& doc) {
  using detail::Field;
  const Field root(doc, "");
  root.require_object({"schema_version", "name", "seed", "tolerance", "space", "value_space",
                       "measure", "functions", "experiments"});
  Scenario s;
  s.source = doc;
  const auto version = root.at("schema_version").u64();
  if (version != kSchemaVersion) {
    root.at("schema_version").fail("unsupported version " + std::to_string(version));
  }
  if (root.has("name")) s.name = root.at("name").str();
  if (root.has("seed")) s.seed = root.at("seed").u64();
  if (root.has("tolerance")) s.tolerance = root.at("tolerance").number();

  const Field space = root.at("space");
  space.require_object({"n", "weights", "total"});
  s.space.n = space.at("n").size();
  if (space.has("total")) s.space.total = space.at("total").number();
  if (space.has("weights")) {
    const Field w = space.at("weights");
    if (w.node().is_string()) {
      if (w.str() != "uniform") w.fail("expected \"uniform\" or an array");
    } else {
      s.space.weights = w.numbers();
    }
  }

  s.value_space.dim = s.space.n;
  if (root.has("value_space")) {
    const Field vs = root.at("value_space");
    vs.require_object({"kind", "d", "scale"});
    if (vs.has("kind")) s.value_space.kind = parse_kind(vs.at("kind"));
    if (vs.has("scale")) {
      const Field sc = vs.at("scale");
      if (sc.node().is_string()) {
        const std::string mode = sc.str();
        detail::require_choice(sc, mode, {"l1-of-mu", "unit"});
        s.value_space.mode = mode == "unit" ? ScaleMode::Unit : ScaleMode::L1OfMu;
      } else {
        s.value_space.mode = ScaleMode::Explicit;
        s.value_space.scale = sc.numbers();
      }
    }
    if (vs.has("d")) {
      s.value_space.dim = vs.at("d").size();
    } else if (s.value_space.mode == ScaleMode::Explicit) {
      s.value_space.dim = s.value_space.scale.size();
    }
  }

  if (root.has("measure")) s.measure = detail::parse_measure(root.at("measure"));
  if (root.has("functions")) {
    const Field fs = root.at("functions");
    for (std::size_t i = 0; i < fs.length(); ++i) s.functions.push_back(fs.index(i).numbers());
  }
  if (root.has("experiments")) {
    const Field es = root.at("experiments");
    for (std::size_t i = 0; i < es.length(); ++i) {
      s.experiments.push_back(detail::parse_experiment(es.index(i)));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Building library objects
// ---------------------------------------------------------------------------

inline MeasureSpace build_space(const Scenario& s) {
  if (s.space.weights.empty()) {
    if (s.space.n == 0) throw ValidationError("space.n must be at least 1");
    if (!(s.space.total > 0.0)) throw ValidationError("weights must be positive");
    return MeasureSpace::uniform(s.space.n, s.space.total);
  }
  if (s.space.weights.size() != s.space.n) {
    throw ValidationError("space.weights has " + std::to_string(s.space.weights.size()) +
                          " entries but n = " + std::to_string(s.space.n));
  }
  try {
    return MeasureSpace(s.space.weights);
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
}

inline NormSpec build_value_space(const Scenario& s, const MeasureSpace& space) {
  const ValueSpaceSpec& v = s.value_space;
  try {
    switch (v.mode) {
      case ScaleMode::L1OfMu: {
        if (v.dim != space.size()) {
          throw ValidationError("value_space scale l1-of-mu needs d = n");
        }
        return NormSpec(v.kind, Vector(space.weights().begin(), space.weights().end()));
      }
      case ScaleMode::Unit:
        if (v.dim == 0) throw ValidationError("value_space.d must be at least 1");
        return NormSpec::unweighted(v.kind, v.dim);
      case ScaleMode::Explicit:
        if (v.scale.size() != v.dim) {
          throw ValidationError("value_space.scale length differs from d");
        }
        return NormSpec(v.kind, v.scale);
    }
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
  throw ValidationError("bad value space");
}

inline VectorMeasure build_measure(const MeasureSpec& spec, const MeasureSpace& space,
                                   const NormSpec& x, std::uint64_t default_seed) {
  const std::size_t n = space.size();
  const std::size_t d = x.dim();
  if (spec.kind == "indicator") {
    if (d != n) throw ValidationError("indicator measure needs d = n");
    std::vector<double> atoms(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) atoms[i * d + i] = 1.0;
    return VectorMeasure(space, x, std::move(atoms));
  }
  if (spec.kind == "rank_one") {
    if (spec.g.size() != d) throw ValidationError("rank_one measure: g must have length d");
    return VectorMeasure::rank_one(space, x, spec.g);
  }
  if (spec.kind == "random") {
    Rng rng(spec.seed.value_or(default_seed));
    std::vector<double> atoms(n * d);
    for (double& a : atoms) a = rng.gaussian();
    return VectorMeasure(space, x, std::move(atoms));
  }
  if (spec.kind == "matrix") {
    if (spec.rows.size() != n) throw ValidationError("matrix measure needs one row per atom");
    std::vector<double> atoms;
    atoms.reserve(n * d);
    for (const auto& r : spec.rows) {
      if (r.size() != d) throw ValidationError("matrix measure rows must have length d");
      atoms.insert(atoms.end(), r.begin(), r.end());
    }
    return VectorMeasure(space, x, std::move(atoms));
  }
  if (spec.kind == "composed") {
    if (!spec.base) throw ValidationError("composed measure needs a base");
    if (spec.k < 1 || spec.k > d) {
      throw ValidationError("composed measure: k must lie in 1..d");
    }
    return basis_truncated_measure(build_measure(*spec.base, space, x, default_seed), spec.k);
  }
  throw ValidationError("unknown measure kind '" + spec.kind + "'");
}

inline VectorMeasure build_measure(const Scenario& s) {
  const MeasureSpace space = build_space(s);
  return build_measure(s.measure, space, build_value_space(s, space), s.seed);
}

inline SimpleFunction scenario_function(const Scenario& s, std::size_t index) {
  return SimpleFunction(s.functions.at(index));
}

/// Default g of the canonical pair: the constant 1/mu(Omega).
inline SimpleFunction lemma4_g(const ExperimentSpec& e, const MeasureSpace& space) {
  if (!e.g.empty()) return SimpleFunction(e.g);
  return SimpleFunction::constant(space.size(), 1.0 / space.total());
}

namespace detail {

inline void require_dyadic(const MeasureSpace& space, std::size_t levels, const std::string& where) {
  try {
    (void)dyadic_chain(levels, space);
  } catch (const InvalidArgument& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline bool needs_function(const std::string& kind) {
  return kind == "norm" || kind == "martingale" || kind == "basis" || kind == "rn_net";
}

}  // namespace detail

/// Checks every module precondition the experiments will rely on, so that
/// run() only meets capacity limits and numerical failures.
inline void validate(const Scenario& s) {
  if (!(s.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  const MeasureSpace space = build_space(s);
  const NormSpec x = build_value_space(s, space);
  const VectorMeasure m = build_measure(s.measure, space, x, s.seed);
  for (std::size_t k = 0; k < s.functions.size(); ++k) {
    if (s.functions[k].size() != space.size()) {
      throw ValidationError("functions[" + std::to_string(k) + "] has length " +
                            std::to_string(s.functions[k].size()) + " but n = " +
                            std::to_string(space.size()));
    }
  }
  for (std::size_t k = 0; k < s.experiments.size(); ++k) {
    const ExperimentSpec& e = s.experiments[k];
    const std::string where = "experiments[" + std::to_string(k) + "] (" + e.kind + ")";
    if (detail::needs_function(e.kind)) {
      if (s.functions.empty()) throw ValidationError(where + ": scenario has no functions");
      if (e.function && *e.function >= s.functions.size()) {
        throw ValidationError(where + ": function index out of range");
      }
    }
    if (e.kind == "norm" && e.restarts == 0) {
      throw ValidationError(where + ": restarts must be at least 1");
    }
    if (e.kind == "martingale") detail::require_dyadic(space, e.levels, where);
    if (e.kind == "rn_net" && e.family == "conditional_expectation") {
      detail::require_dyadic(space, e.levels, where);
      if (!(x == NormSpec::l1_of(space))) {
        throw ValidationError(where +
                              ": conditional_expectation family needs value space L1 l1-of-mu");
      }
    }
    if (e.kind == "daugavet") {
      if (e.op == "measure") {
        if (!(x == NormSpec::l1_of(space))) {
          throw ValidationError(where + ": operator 'measure' needs value space L1 l1-of-mu");
        }
      } else if (e.sizes.empty()) {
        throw ValidationError(where + ": sizes must be nonempty");
      }
      for (std::size_t n : e.sizes) {
        if (n == 0) throw ValidationError(where + ": sizes must be at least 1");
      }
    }
    if (e.kind == "lemma4") {
      if (!x.polyhedral()) throw ValidationError(where + ": value space must be L1 or LINF kind");
      if (e.lambdas.empty()) throw ValidationError(where + ": lambda list is empty");
      if (e.other) {
        (void)build_measure(*e.other, space, x, s.seed);
      } else {
        if (!(x == NormSpec::l1_of(space))) {
          throw ValidationError(where + ": canonical pair needs value space L1 l1-of-mu");
        }
        const SimpleFunction g = lemma4_g(e, space);
        if (g.size() != space.size()) throw ValidationError(where + ": g must have length n");
        try {
          (void)canonical_pair(space, g, s.tolerance);
        } catch (const NotNormalized& err) {
          throw ValidationError(where + ": " + err.what());
        }
      }
    }
    if (e.kind == "theorem_a") {
      if (!(x == NormSpec::l1_of(space)) && e.family != "integral") {
        throw ValidationError(where + ": theorem_a families need value space L1 l1-of-mu");
      }
      if (e.family == "martingale") detail::require_dyadic(space, e.levels, where);
      if (e.family == "rn_span" && e.counts.empty()) {
        throw ValidationError(where + ": counts must be nonempty");
      }
    }
  }
}

inline Scenario load_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(detail::position_of(text, e.byte) + ": invalid JSON");
  }
  Scenario s = parse_scenario(doc);
  validate(s);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_scenario_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline Scenario load_scenario(const json& doc) {
  Scenario s = parse_scenario(doc);
  validate(s);
  return s;
}

}  // namespace vml::harness

#endif  // VML_HARNESS_SCENARIO_HPP
