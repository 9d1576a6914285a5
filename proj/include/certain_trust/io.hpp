#pragma once

// Scenario JSON ingestion and report rendering (json / csv / table).

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "certain_trust/errors.hpp"
#include "certain_trust/formula.hpp"
#include "certain_trust/fuzzy.hpp"
#include "certain_trust/opinion.hpp"
#include "certain_trust/topology.hpp"

namespace ctm::io {

using Json = nlohmann::ordered_json;

/// Scenario file problem; `where` is a JSON pointer or "line L, column C".
class SchemaError : public InputError {
 public:
  SchemaError(std::string where, const std::string& what)
      : InputError(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline double number_at(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + "/" + key, "expected a finite number");
  return d;
}

inline std::optional<double> optional_number(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, key, where);
}

inline void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == k;
    if (!ok) throw SchemaError(where + "/" + k, "unknown field");
  }
}

inline Component parse_component(const Json& obj, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "component must be an object");
  const bool evidence = obj.contains("r") || obj.contains("s");
  const bool direct = obj.contains("t") || obj.contains("c");
  if (evidence && direct) throw SchemaError(where, "evidence (r, s) and direct (t, c) forms are mutually exclusive");
  if (evidence) {
    reject_unknown(obj, {"r", "s", "N", "w", "f", "scale"}, where);
    if (!obj.contains("r") || !obj.contains("s")) throw SchemaError(where, "evidence form needs both r and s");
    return EvidenceComponent{number_at(obj, "r", where),           number_at(obj, "s", where),
                             optional_number(obj, "N", where),     optional_number(obj, "w", where),
                             optional_number(obj, "f", where),     optional_number(obj, "scale", where)};
  }
  if (direct) {
    reject_unknown(obj, {"t", "c", "f", "scale"}, where);
    if (!obj.contains("t") || !obj.contains("c")) throw SchemaError(where, "direct form needs both t and c");
    return DirectComponent{number_at(obj, "t", where), number_at(obj, "c", where), optional_number(obj, "f", where),
                           optional_number(obj, "scale", where)};
  }
  throw SchemaError(where, "component needs either {r, s} or {t, c}");
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
  }
  if (!doc.is_object()) throw SchemaError("/", "scenario must be a JSON object");
  detail::reject_unknown(doc, {"formula", "defaults", "components"}, "");

  Scenario sc;
  if (!doc.contains("formula") || !doc["formula"].is_string()) throw SchemaError("/formula", "expected a string");
  try {
    sc.formula = parse_formula(doc["formula"].get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError("/formula", e.what());
  }

  if (doc.contains("defaults")) {
    const Json& d = doc["defaults"];
    if (!d.is_object()) throw SchemaError("/defaults", "expected an object");
    detail::reject_unknown(d, {"N", "w", "f", "scale"}, "/defaults");
    sc.defaults.max_evidence = detail::optional_number(d, "N", "/defaults");
    sc.defaults.dispositional_trust = detail::optional_number(d, "w", "/defaults").value_or(1.0);
    sc.defaults.initial_expectation = detail::optional_number(d, "f", "/defaults").value_or(0.5);
    sc.defaults.scale = detail::optional_number(d, "scale", "/defaults").value_or(5.0);
  }

  if (!doc.contains("components") || !doc["components"].is_object()) {
    throw SchemaError("/components", "expected an object");
  }
  for (const auto& [id, v] : doc["components"].items()) {
    const std::string where = "/components/" + id;
    // Leaf ids must be usable in the formula language.
    try {
      const FormulaNode probe = parse_formula(id);
      if (!probe.is_leaf() || probe.id() != id) throw SchemaError(where, "not a valid component id");
    } catch (const ParseError&) {
      throw SchemaError(where, "not a valid component id");
    }
    sc.components.emplace(id, detail::parse_component(v, where));
  }
  if (sc.components.empty()) throw SchemaError("/components", "no components given");

  try {
    sc.validate();
  } catch (const UnboundIdentifier& e) {
    throw SchemaError("/formula", "variable '" + e.id() + "' has no entry in /components");
  } catch (const SchemaError&) {
    throw;
  } catch (const InputError& e) {
    throw SchemaError("/defaults", e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// Fixed precision: 3 decimals for opinion components and E, 2 for percents.
inline double round_to(double x, int decimals) {
  const double k = std::pow(10.0, decimals);
  const double r = std::round(x * k) / k;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

inline std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_to(x, decimals));
  return buf;
}

inline Json metrics_json(const Metrics& m) {
  Json j;
  j["t"] = round_to(m.opinion.t(), 3);
  j["c"] = round_to(m.opinion.c(), 3);
  j["f"] = round_to(m.opinion.f(), 3);
  j["E"] = round_to(m.expectation, 3);
  j["T"] = round_to(m.trust_percent, 2);
  j["trust_class"] = std::string(fuzzy::to_string(m.trust_class));
  if (m.assessment) {
    j["P"] = round_to(m.assessment->behavior_percent, 2);
    j["P_raw"] = round_to(m.assessment->raw_behavior_percent, 2);
    j["direction"] = std::string(to_string(m.assessment->direction));
    j["behavior"] = std::string(to_string(m.assessment->behavior_class));
  } else {
    j["P"] = nullptr;
    j["P_raw"] = nullptr;
    j["direction"] = nullptr;
    j["behavior"] = nullptr;
  }
  return j;
}

inline Json report_json(const SystemReport& r) {
  Json j;
  j["formula"] = r.formula;
  j["scale"] = r.scale;
  j["not_mode"] = std::string(to_string(r.not_mode));
  Json comps = Json::array();
  for (const auto& c : r.components) {
    Json row;
    row["id"] = c.id;
    row["source"] = c.from_evidence ? "evidence" : "direct";
    row.update(metrics_json(c.metrics));
    comps.push_back(std::move(row));
  }
  j["components"] = std::move(comps);
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    Json row;
    row["path"] = n.path;
    row["formula"] = n.text;
    row["leaf"] = n.leaf;
    row.update(metrics_json(n.metrics));
    nodes.push_back(std::move(row));
  }
  j["nodes"] = std::move(nodes);
  j["root"] = metrics_json(r.root_metrics());
  return j;
}

namespace detail {

struct Row {
  std::string system;
  const Metrics* m;
};

// Components, then each composite node in post-order (root last).
inline std::vector<Row> table_rows(const SystemReport& r) {
  std::vector<Row> rows;
  for (const auto& c : r.components) rows.push_back({c.id, &c.metrics});
  for (const auto& n : r.nodes) {
    if (!n.leaf) rows.push_back({n.text, &n.metrics});
  }
  return rows;
}

inline std::vector<std::string> cells(const Row& row) {
  const Metrics& m = *row.m;
  std::vector<std::string> out{row.system,
                               fixed(m.opinion.t(), 3),
                               fixed(m.opinion.c(), 3),
                               fixed(m.opinion.f(), 3),
                               fixed(m.expectation, 3),
                               fixed(m.trust_percent, 2),
                               std::string(fuzzy::to_string(m.trust_class))};
  if (m.assessment) {
    out.push_back(fixed(m.assessment->behavior_percent, 2));
    out.emplace_back(to_string(m.assessment->direction));
    out.emplace_back(to_string(m.assessment->behavior_class));
  } else {
    out.insert(out.end(), {"-", "-", "-"});
  }
  return out;
}

inline const std::vector<std::string>& header() {
  static const std::vector<std::string> h{"system", "t", "c", "f", "E", "T", "class", "P", "direction", "behavior"};
  return h;
}

}  // namespace detail

inline std::string report_csv(const SystemReport& r) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      const bool quote = cols[i].find_first_of(",\"") != std::string::npos;
      out += quote ? "\"" + cols[i] + "\"" : cols[i];
    }
    out += '\n';
  };
  line(detail::header());
  for (const auto& row : detail::table_rows(r)) line(detail::cells(row));
  return out;
}

inline std::string render_aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
    }
    out += line + '\n';
  }
  return out;
}

inline std::string report_table(const SystemReport& r) {
  std::vector<std::vector<std::string>> rows{detail::header()};
  for (const auto& row : detail::table_rows(r)) rows.push_back(detail::cells(row));
  return "formula: " + r.formula + "\n" + render_aligned(rows);
}

}  // namespace ctm::io
