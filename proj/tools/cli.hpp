#pragma once

// Command-line front end. `run` returns the process exit code:
// 0 success, 1 reference mismatch, 2 input/usage error, 3 evaluation domain error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "case_studies.hpp"
#include "certain_trust/errors.hpp"
#include "certain_trust/fam.hpp"
#include "certain_trust/fuzzy.hpp"
#include "certain_trust/io.hpp"
#include "certain_trust/opinion.hpp"
#include "certain_trust/topology.hpp"

namespace ctm::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kDomain = 3 };

enum class OutputFormat { json, csv, table };

struct MembershipOverride {
  std::string variable;
  fuzzy::Label label;
  double center;
  double sigma;
};

struct RunConfig {
  NotMode not_mode = NotMode::paper;
  double sampling_step = 0.1;
  double scale = 5.0;
  OutputFormat output_format = OutputFormat::table;
  double initial_expectation = 0.5;
  bool explain = false;
  std::vector<MembershipOverride> overrides;

  void validate() const {
    if (!(sampling_step > 0.0) || sampling_step > 1.0) throw InputError("--step must lie in (0, 1]");
    if (!(scale >= 1.0)) throw InputError("--scale must be >= 1");
    if (!(initial_expectation > 0.0) || initial_expectation > 1.0) throw InputError("--f must lie in (0, 1]");
  }

  fuzzy::DefaultVariables variables() const {
    fuzzy::DefaultVariables v = fuzzy::build_default_variables();
    for (const auto& o : overrides) {
      fuzzy::LinguisticVariable* target = o.variable == "certainty" ? &v.certainty
                                          : o.variable == "rating"  ? &v.rating
                                          : o.variable == "trust"   ? &v.trust
                                                                    : nullptr;
      if (!target) throw InputError("unknown variable in membership override: " + o.variable);
      *target = target->with_set(o.label, o.center, o.sigma);
    }
    return v;
  }
};

inline std::optional<NotMode> parse_not_mode(const std::string& s) {
  if (s == "paper") return NotMode::paper;
  if (s == "preserve-certainty" || s == "preserve_certainty") return NotMode::preserve_certainty;
  return std::nullopt;
}

inline std::optional<OutputFormat> parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "table") return OutputFormat::table;
  return std::nullopt;
}

/// Reads a JSON config file of the form
/// {"not_mode": "paper", "sampling_step": 0.1, "scale": 5, "output_format": "table", "f": 0.5,
///  "membership": {"trust": {"average": {"center": 50, "sigma": 16.9}}}}
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::SchemaError(path, "cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::SchemaError(path, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw io::SchemaError(path, "config must be a JSON object");
  RunConfig cfg;
  auto number = [&](const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw io::SchemaError(path + ":" + where, "expected a number");
    return j.get<double>();
  };
  for (const auto& [key, val] : doc.items()) {
    if (key == "not_mode") {
      const auto m = val.is_string() ? parse_not_mode(val.get<std::string>()) : std::nullopt;
      if (!m) throw io::SchemaError(path + ":/not_mode", "expected \"paper\" or \"preserve-certainty\"");
      cfg.not_mode = *m;
    } else if (key == "output_format") {
      const auto f = val.is_string() ? parse_format(val.get<std::string>()) : std::nullopt;
      if (!f) throw io::SchemaError(path + ":/output_format", "expected json, csv or table");
      cfg.output_format = *f;
    } else if (key == "sampling_step") {
      cfg.sampling_step = number(val, "/sampling_step");
    } else if (key == "scale") {
      cfg.scale = number(val, "/scale");
    } else if (key == "f") {
      cfg.initial_expectation = number(val, "/f");
    } else if (key == "membership") {
      if (!val.is_object()) throw io::SchemaError(path + ":/membership", "expected an object");
      for (const auto& [var, sets] : val.items()) {
        if (!sets.is_object()) throw io::SchemaError(path + ":/membership/" + var, "expected an object");
        for (const auto& [label, spec] : sets.items()) {
          const std::string where = "/membership/" + var + "/" + label;
          const auto l = fuzzy::parse_label(label);
          if (!l) throw io::SchemaError(path + ":" + where, "unknown class label");
          if (!spec.is_object() || !spec.contains("center") || !spec.contains("sigma")) {
            throw io::SchemaError(path + ":" + where, "expected {\"center\": x, \"sigma\": y}");
          }
          cfg.overrides.push_back(
              {var, *l, number(spec["center"], where + "/center"), number(spec["sigma"], where + "/sigma")});
        }
      }
    } else {
      throw io::SchemaError(path + ":/" + key, "unknown config field");
    }
  }
  return cfg;
}

namespace detail {

inline void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InputError("cannot write " + out_path);
  f << text;
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline int cmd_assess(const std::string& scenario_path, const std::string& out_path, const RunConfig& cfg,
                      std::ostream& out) {
  Scenario sc = io::load_scenario(scenario_path);
  AssessOptions opts;
  opts.not_mode = cfg.not_mode;
  opts.trust_variable = cfg.variables().trust;
  const SystemReport rep = assess_system(sc, opts);
  std::string text;
  switch (cfg.output_format) {
    case OutputFormat::json: text = detail::dump(io::report_json(rep)); break;
    case OutputFormat::csv: text = io::report_csv(rep); break;
    case OutputFormat::table: text = io::report_table(rep); break;
  }
  detail::write_output(text, out_path, out);
  return kOk;
}

inline int cmd_infer(double c, double t, const RunConfig& cfg, std::ostream& out) {
  const fuzzy::MamdaniEngine engine(cfg.variables(), fuzzy::build_default_rulebase(), cfg.sampling_step);
  const fuzzy::InferenceResult res = engine.explain(c, t);
  const fuzzy::Label cls = engine.classify_trust(res.trust);
  const TrustAssessment p = behavioral_probability(std::clamp(res.trust, 0.0, 100.0), cfg.initial_expectation);

  switch (cfg.output_format) {
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      j["c"] = io::round_to(res.certainty_input, 3);
      j["t"] = io::round_to(res.rating_input, 3);
      j["trust"] = io::round_to(res.trust, 2);
      j["class"] = std::string(fuzzy::to_string(cls));
      j["f"] = cfg.initial_expectation;
      j["P"] = io::round_to(p.behavior_percent, 2);
      j["direction"] = std::string(to_string(p.direction));
      j["behavior"] = std::string(to_string(p.behavior_class));
      if (cfg.explain) {
        auto rules = nlohmann::ordered_json::array();
        for (const auto& fr : res.fired) {
          nlohmann::ordered_json r;
          r["rule"] = "R" + std::to_string(fr.index + 1);
          r["certainty"] = std::string(fuzzy::to_string(fr.rule.certainty));
          r["rating"] = std::string(fuzzy::to_string(fr.rule.rating));
          r["trust"] = std::string(fuzzy::to_string(fr.rule.trust));
          r["weight"] = io::round_to(fr.weight, 6);
          rules.push_back(std::move(r));
        }
        j["rules"] = std::move(rules);
      }
      out << detail::dump(j);
      break;
    }
    case OutputFormat::csv: {
      out << "c,t,trust,class,f,P,direction,behavior\n"
          << io::fixed(res.certainty_input, 3) << ',' << io::fixed(res.rating_input, 3) << ','
          << io::fixed(res.trust, 2) << ',' << fuzzy::to_string(cls) << ',' << io::fixed(cfg.initial_expectation, 3)
          << ',' << io::fixed(p.behavior_percent, 2) << ',' << to_string(p.direction) << ','
          << to_string(p.behavior_class) << '\n';
      if (cfg.explain) {
        out << "rule,certainty,rating,trust,weight\n";
        for (const auto& fr : res.fired) {
          out << 'R' << fr.index + 1 << ',' << fuzzy::to_string(fr.rule.certainty) << ','
              << fuzzy::to_string(fr.rule.rating) << ',' << fuzzy::to_string(fr.rule.trust) << ','
              << io::fixed(fr.weight, 6) << '\n';
        }
      }
      break;
    }
    case OutputFormat::table: {
      out << "certainty  " << io::fixed(res.certainty_input, 3) << '\n'
          << "rating     " << io::fixed(res.rating_input, 3) << '\n'
          << "trust      " << io::fixed(res.trust, 2) << "%\n"
          << "class      " << fuzzy::to_string(cls) << '\n'
          << "P          " << io::fixed(p.behavior_percent, 2) << "% (" << to_string(p.direction) << ", "
          << to_string(p.behavior_class) << " behavior, f=" << io::fixed(cfg.initial_expectation, 3) << ")\n";
      if (cfg.explain) {
        std::vector<std::vector<std::string>> rows{{"rule", "certainty", "rating", "trust", "weight"}};
        for (const auto& fr : res.fired) {
          rows.push_back({"R" + std::to_string(fr.index + 1), std::string(fuzzy::to_string(fr.rule.certainty)),
                          std::string(fuzzy::to_string(fr.rule.rating)), std::string(fuzzy::to_string(fr.rule.trust)),
                          io::fixed(fr.weight, 6)});
        }
        out << '\n' << io::render_aligned(rows);
      }
      break;
    }
  }
  return kOk;
}

/// CSV rows (x, mu_very_low, ..., mu_very_high) over `samples` evenly spaced points.
inline std::string membership_csv(const fuzzy::LinguisticVariable& var, std::size_t samples) {
  if (samples < 2) throw InputError("--samples must be at least 2");
  std::string out = "x,very_low,low,average,high,very_high\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? var.hi()
                                      : var.lo() + (var.hi() - var.lo()) * static_cast<double>(i) /
                                                       static_cast<double>(samples - 1);
    out += io::fixed(x, 6);
    for (double m : var.fuzzify(x)) out += "," + io::fixed(m, 6);
    out += '\n';
  }
  return out;
}

inline int cmd_membership_dump(const std::string& variable, std::size_t samples, const std::string& out_path,
                               const RunConfig& cfg, std::ostream& out) {
  const fuzzy::DefaultVariables vars = cfg.variables();
  const fuzzy::LinguisticVariable* var = variable == "certainty" ? &vars.certainty
                                         : variable == "rating"  ? &vars.rating
                                         : variable == "trust"   ? &vars.trust
                                                                 : nullptr;
  if (!var) throw InputError("unknown variable '" + variable + "' (expected certainty, rating or trust)");
  detail::write_output(membership_csv(*var, samples), out_path, out);
  return kOk;
}

inline std::string fam_grid_text(const fam::FamTable& table, OutputFormat fmt) {
  std::vector<std::string> head{"c \\ t"};
  for (double t : table.t_grid()) head.push_back(io::fixed(t, table.t_decimals()));
  std::vector<std::vector<std::string>> rows{head};
  for (std::size_t i = 0; i < table.c_grid().size(); ++i) {
    std::vector<std::string> row{io::fixed(table.c_grid()[i], 1)};
    for (auto k : table.cells()[i]) row.emplace_back(fam::symbol(k));
    rows.push_back(std::move(row));
  }
  if (fmt == OutputFormat::table) return io::render_aligned(rows);
  if (fmt == OutputFormat::csv) {
    std::string out;
    rows[0][0] = "c/t";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json j;
  j["table"] = table.name();
  j["c"] = table.c_grid();
  j["t"] = table.t_grid();
  auto cells = nlohmann::ordered_json::array();
  for (const auto& r : table.cells()) {
    auto jr = nlohmann::ordered_json::array();
    for (auto k : r) jr.push_back(std::string(fam::symbol(k)));
    cells.push_back(std::move(jr));
  }
  j["cells"] = std::move(cells);
  return detail::dump(j);
}

inline int cmd_fam(const std::string& name, std::optional<double> c, std::optional<double> t, const RunConfig& cfg,
                   std::ostream& out) {
  const auto table = fam::table_by_name(name);
  if (!table) throw InputError("unknown FAM table '" + name + "' (expected people20 or people100)");
  if (c.has_value() != t.has_value()) throw InputError("fam lookup needs both --c and --t");
  if (!c) {
    out << fam_grid_text(*table, cfg.output_format);
    return kOk;
  }
  const fam::TrustClass k = table->lookup(*c, *t);
  if (cfg.output_format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["table"] = table->name();
    j["c"] = *c;
    j["t"] = *t;
    j["class"] = std::string(fam::symbol(k));
    out << detail::dump(j);
  } else {
    out << fam::symbol(k) << '\n';
  }
  return kOk;
}

namespace detail {

struct Check {
  std::string name;
  double expected;
  double actual;
  double tolerance;
  bool ok() const { return std::fabs(expected - actual) <= tolerance + 1e-12; }
};

inline bool print_check(std::ostream& out, const Check& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-4s %-10s expected %9.4f  got %9.4f  delta %+8.4f  tol %.3f\n",
                c.ok() ? "PASS" : "FAIL", c.name.c_str(), c.expected, c.actual, c.actual - c.expected, c.tolerance);
  out << buf;
  return c.ok();
}

inline bool print_direction(std::ostream& out, const std::string& name, Direction expected, Direction actual) {
  const bool ok = expected == actual;
  out << (ok ? "PASS " : "FAIL ") << name << " expected " << to_string(expected) << "  got " << to_string(actual)
      << '\n';
  return ok;
}

}  // namespace detail

inline int case1(const RunConfig& cfg, std::ostream& out) {
  const cases::Tolerances tol;
  AssessOptions opts;
  opts.not_mode = cfg.not_mode;
  bool all = true;
  out << "case1: multi-server topology (A1 | A2) & (B1 | B2)\n"
      << "note: leaf rows are given as (t, c, f); the reference c_A1 = 0.724 is not reachable from\n"
      << "      r=5, s=2, N=7, w=1 through the certainty formula (which gives 1.0).\n"
      << "note: composite rows are computed from the rows they combine as tabled.\n";
  for (const auto& row : cases::case1_reference()) {
    const SystemReport rep = assess_system(io::parse_scenario(row.scenario), opts);
    const Metrics& m = rep.root_metrics();
    out << "-- " << row.system << " = " << rep.formula << '\n';
    all &= detail::print_check(out, {row.system + ".t", row.t, m.opinion.t(), tol.opinion});
    all &= detail::print_check(out, {row.system + ".c", row.c, m.opinion.c(), tol.opinion});
    all &= detail::print_check(out, {row.system + ".f", row.f, m.opinion.f(), tol.opinion});
    all &= detail::print_check(out, {row.system + ".E", row.expectation, m.expectation, tol.expectation});
    all &= detail::print_check(out, {row.system + ".T", row.trust, m.trust_percent, tol.trust});
    all &= detail::print_direction(out, row.system + ".dir", row.direction, rep.root.direction);
    if (row.behavior) {
      all &= detail::print_check(out, {row.system + ".P", *row.behavior, rep.root.behavior_percent, tol.behavior});
    }
  }
  const SystemReport full = assess_system(io::parse_scenario(cases::kCase1), opts);
  out << "-- end-to-end from the four leaves (informational)\n" << io::report_table(full);
  out << (all ? "case1: all checks passed\n" : "case1: some checks FAILED\n");
  return all ? kOk : kMismatch;
}

inline int case2(const RunConfig& cfg, std::ostream& out) {
  AssessOptions opts;
  opts.not_mode = cfg.not_mode;
  const double c = quantized_certainty(20, 20, 5);
  const SystemReport rep = assess_system(io::parse_scenario(cases::kCase2), opts);
  const Metrics& m = rep.root_metrics();
  out << "case2: single site, 20 of 20 respondents certain (c = " << io::fixed(c, 1)
      << "), rating t' = " << io::fixed(scaled_rating(m.opinion, rep.scale), 2) << " of " << io::fixed(rep.scale, 0)
      << '\n';
  bool all = true;
  all &= detail::print_check(out, {"c", 1.0, c, 1e-12});
  all &= detail::print_check(out, {"T", cases::kCase2Trust, m.trust_percent, 0.01});
  all &= detail::print_check(out, {"P", cases::kCase2Behavior, rep.root.behavior_percent, 0.01});
  all &= detail::print_direction(out, "dir", Direction::above_expectation, rep.root.direction);
  out << "FAM people20 at (c=1.0, t=3.75): " << fam::symbol(fam::people20().lookup(1.0, 3.75)) << '\n';
  out << (all ? "case2: all checks passed\n" : "case2: some checks FAILED\n");
  return all ? kOk : kMismatch;
}

inline int cmd_case_study(const std::string& which, const RunConfig& cfg, std::ostream& out) {
  if (which == "case1") return case1(cfg, out);
  if (which == "case2") return case2(cfg, out);
  throw InputError("unknown case study '" + which + "' (expected case1 or case2)");
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certain-trust opinions, topology assessment and fuzzy trust inference"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, format, not_mode;
  double step = 0.1, scale = 5.0, f = 0.5;
  bool explain = false;
  app.add_option("--config", config_path, "JSON run configuration");
  auto* o_format = app.add_option("--format", format, "json|csv|table");
  auto* o_not = app.add_option("--not-mode", not_mode, "paper|preserve-certainty");
  auto* o_step = app.add_option("--step", step, "trust-domain sampling step");
  auto* o_scale = app.add_option("--scale", scale, "rating scale high value");
  auto* o_f = app.add_option("--f", f, "initial expectation for behavioral probability");
  auto* o_explain = app.add_flag("--explain", explain, "print fired-rule weights");

  std::string scenario_path, out_path, variable, table, which;
  double c = 0.0, t = 0.0;
  std::optional<double> fam_c, fam_t;
  std::size_t samples = 101;

  auto* assess = app.add_subcommand("assess", "assess a scenario file");
  assess->add_option("scenario", scenario_path, "scenario JSON")->required();
  assess->add_option("--out", out_path, "write the report here instead of stdout");

  auto* infer = app.add_subcommand("infer", "fuzzy trust inference for one (c, t') pair");
  infer->add_option("--c", c, "certainty in [0,1]")->required();
  infer->add_option("--t", t, "scaled rating in [1,5]")->required();

  auto* dump = app.add_subcommand("membership-dump", "membership curves as CSV");
  dump->add_option("variable", variable, "certainty|rating|trust")->required();
  dump->add_option("--samples", samples, "number of evenly spaced rows");
  dump->add_option("--out", out_path, "write the CSV here instead of stdout");

  auto* famcmd = app.add_subcommand("fam", "print a FAM grid or look up one cell");
  famcmd->add_option("table", table, "people20|people100")->required();
  famcmd->add_option("--c", fam_c, "certainty");
  famcmd->add_option("--t", fam_t, "rating");

  auto* cs = app.add_subcommand("case-study", "run a bundled case study against reference values");
  cs->add_option("which", which, "case1|case2")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (o_format->count()) {
      const auto fmt = parse_format(format);
      if (!fmt) throw InputError("--format must be json, csv or table");
      cfg.output_format = *fmt;
    }
    if (o_not->count()) {
      const auto m = parse_not_mode(not_mode);
      if (!m) throw InputError("--not-mode must be paper or preserve-certainty");
      cfg.not_mode = *m;
    }
    if (o_step->count()) cfg.sampling_step = step;
    if (o_scale->count()) cfg.scale = scale;
    if (o_f->count()) cfg.initial_expectation = f;
    if (o_explain->count()) cfg.explain = explain;
    cfg.validate();

    if (*assess) return cmd_assess(scenario_path, out_path, cfg, out);
    if (*infer) return cmd_infer(c, t, cfg, out);
    if (*dump) return cmd_membership_dump(variable, samples, out_path, cfg, out);
    if (*famcmd) return cmd_fam(table, fam_c, fam_t, cfg, out);
    if (*cs) return cmd_case_study(which, cfg, out);
  } catch (const DomainError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kDomain;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ctm::cli
