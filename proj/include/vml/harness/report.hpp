#ifndef VML_HARNESS_REPORT_HPP
#define VML_HARNESS_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vml/errors.hpp"

#ifndef VML_VERSION_STRING
#define VML_VERSION_STRING "0.0.0"
#endif

namespace vml::harness {

using json = nlohmann::json;

struct ErrorInfo {
  std::string type;
  std::string message;

  friend bool operator==(const ErrorInfo&, const ErrorInfo&) = default;
};

/// One experiment's table. Cells are JSON scalars: numbers, or strings for
/// labels and non-finite values ("inf", "-inf", "nan").
struct ExperimentResult {
  std::string kind;
  std::string label;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::optional<ErrorInfo> error;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

struct Metadata {
  std::string version = VML_VERSION_STRING;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;

  friend bool operator==(const Metadata&, const Metadata&) = default;
};

struct Report {
  json scenario;
  std::vector<ExperimentResult> experiments;
  Metadata metadata;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Numeric cell; JSON has no infinities, so they travel as strings.
inline json cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline json cell(std::size_t v) { return static_cast<std::uint64_t>(v); }
inline json cell(const std::string& v) { return v; }
inline json cell(const char* v) { return std::string(v); }

inline std::string error_type(const std::exception& e) {
  if (dynamic_cast<const CapacityExceeded*>(&e)) return "CapacityExceeded";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const NotPolyhedral*>(&e)) return "NotPolyhedral";
  if (dynamic_cast<const NoRybakovFound*>(&e)) return "NoRybakovFound";
  if (dynamic_cast<const NotNormalized*>(&e)) return "NotNormalized";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const LPInfeasible*>(&e)) return "LPInfeasible";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  return "Error";
}

inline json to_json(const Report& r) {
  json out;
  out["scenario"] = r.scenario;
  out["experiments"] = json::array();
  for (const auto& e : r.experiments) {
    json je;
    je["kind"] = e.kind;
    je["label"] = e.label;
    je["columns"] = e.columns;
    je["rows"] = json::array();
    for (const auto& row : e.rows) je["rows"].push_back(json(row));
    if (e.error) je["error"] = {{"type", e.error->type}, {"message", e.error->message}};
    out["experiments"].push_back(std::move(je));
  }
  out["metadata"] = {{"version", r.metadata.version},
                     {"seed", r.metadata.seed},
                     {"wall_time_s", r.metadata.wall_time_s}};
  return out;
}

inline Report report_from_json(const json& j) {
  try {
    Report r;
    r.scenario = j.at("scenario");
    for (const auto& je : j.at("experiments")) {
      ExperimentResult e;
      e.kind = je.at("kind").get<std::string>();
      e.label = je.at("label").get<std::string>();
      e.columns = je.at("columns").get<std::vector<std::string>>();
      for (const auto& row : je.at("rows")) {
        e.rows.emplace_back(row.begin(), row.end());
      }
      if (je.contains("error")) {
        e.error = ErrorInfo{je["error"].at("type").get<std::string>(),
                            je["error"].at("message").get<std::string>()};
      }
      r.experiments.push_back(std::move(e));
    }
    const json& md = j.at("metadata");
    r.metadata.version = md.at("version").get<std::string>();
    r.metadata.seed = md.at("seed").get<std::uint64_t>();
    r.metadata.wall_time_s = md.at("wall_time_s").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

/// Pretty-printed JSON; doubles use the shortest text that parses back to
/// the same value.
inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

namespace detail {

inline std::string csv_cell(const json& c) {
  if (c.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c.get<double>());
    return buf;
  }
  if (c.is_number()) return c.dump();
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return c.dump();
}

}  // namespace detail

/// One CSV block per experiment: the header row, then one row per net level
/// or sweep point. Blocks are separated by a blank line.
inline std::string render_csv(const Report& r) {
  std::string out;
  for (std::size_t k = 0; k < r.experiments.size(); ++k) {
    const auto& e = r.experiments[k];
    if (k > 0) out += "\n";
    for (std::size_t c = 0; c < e.columns.size(); ++c) {
      out += (c ? "," : "") + e.columns[c];
    }
    out += "\n";
    for (const auto& row : e.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out += (c ? "," : "") + detail::csv_cell(row[c]);
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string render(const Report& r, const std::string& format) {
  if (format == "json") return render_json(r);
  if (format == "csv") return render_csv(r);
  throw InvalidArgument("unknown report format '" + format + "' (expected json or csv)");
}

/// Writes the report to `path`, or to stdout for "" and "-".
inline void emit(const Report& r, const std::string& format, const std::string& path) {
  const std::string text = render(r, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace vml::harness

#endif  // VML_HARNESS_REPORT_HPP
