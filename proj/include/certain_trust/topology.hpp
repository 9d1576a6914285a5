#pragma once

// System scenarios: components bound to opinions (direct or from evidence),
// a topology formula over them, and the full per-node report.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "certain_trust/errors.hpp"
#include "certain_trust/formula.hpp"
#include "certain_trust/fuzzy.hpp"
#include "certain_trust/opinion.hpp"

namespace ctm {

/// Scenario-wide values used where a component omits them.
struct ScenarioDefaults {
  std::optional<double> max_evidence;  // N
  double dispositional_trust = 1.0;    // w
  double initial_expectation = 0.5;    // f
  double scale = 5.0;
};

struct EvidenceComponent {
  double positive = 0.0;
  double negative = 0.0;
  std::optional<double> max_evidence;
  std::optional<double> dispositional_trust;
  std::optional<double> initial_expectation;
  std::optional<double> scale;
};

struct DirectComponent {
  double rating = 0.5;
  double certainty = 0.0;
  std::optional<double> initial_expectation;
  std::optional<double> scale;
};

using Component = std::variant<EvidenceComponent, DirectComponent>;

struct Scenario {
  FormulaNode formula = FormulaNode::leaf("_");
  ScenarioDefaults defaults;
  std::map<std::string, Component> components;

  void validate() const {
    if (components.empty()) throw InputError("scenario has no components");
    if (!(defaults.scale >= 1.0)) throw InputError("defaults: scale must be >= 1");
    if (!(defaults.dispositional_trust > 0.0)) throw InputError("defaults: w must be > 0");
    if (!(defaults.initial_expectation >= 0.0 && defaults.initial_expectation <= 1.0)) {
      throw InputError("defaults: f must lie in [0,1]");
    }
    if (defaults.max_evidence && !(*defaults.max_evidence >= 1.0)) throw InputError("defaults: N must be >= 1");
    for (const auto& id : free_variables(formula)) {
      if (!components.contains(id)) throw UnboundIdentifier(id);
    }
  }
};

struct ResolvedComponent {
  Opinion opinion;
  double scale;
  bool from_evidence;
};

inline ResolvedComponent resolve(const std::string& id, const Component& comp, const ScenarioDefaults& d) {
  try {
    if (const auto* ev = std::get_if<EvidenceComponent>(&comp)) {
      const std::optional<double> n = ev->max_evidence ? ev->max_evidence : d.max_evidence;
      if (!n) throw InputError("no N given for the component or in defaults");
      EvidenceRecord rec{ev->positive,
                         ev->negative,
                         *n,
                         ev->dispositional_trust.value_or(d.dispositional_trust),
                         ev->initial_expectation.value_or(d.initial_expectation),
                         ev->scale.value_or(d.scale)};
      return ResolvedComponent{derive_opinion(rec), rec.scale, true};
    }
    const auto& dc = std::get<DirectComponent>(comp);
    const double scale = dc.scale.value_or(d.scale);
    if (!(scale >= 1.0)) throw InputError("rating scale must be >= 1");
    return ResolvedComponent{Opinion(dc.rating, dc.certainty, dc.initial_expectation.value_or(d.initial_expectation)),
                             scale, false};
  } catch (const InputError& e) {
    throw InputError("component '" + id + "': " + e.what());
  }
}

/// Derived quantities for one opinion.
struct Metrics {
  Opinion opinion;
  double expectation = 0.0;
  double trust_percent = 0.0;
  fuzzy::Label trust_class = fuzzy::Label::very_low;
  std::optional<TrustAssessment> assessment;  // absent when f = 0
};

inline Metrics compute_metrics(const Opinion& op, double scale, const fuzzy::LinguisticVariable& trust_var) {
  Metrics m;
  m.opinion = op;
  m.expectation = expectation(op);
  m.trust_percent = trust_percent(op, scale);
  m.trust_class = fuzzy::classify(trust_var, m.trust_percent);
  if (op.f() > 0.0) m.assessment = behavioral_probability(m.trust_percent, op.f());
  return m;
}

struct ComponentReport {
  std::string id;
  bool from_evidence = false;
  Metrics metrics;
};

struct NodeReport {
  std::string path;
  std::string text;
  bool leaf = false;
  Metrics metrics;
};

struct SystemReport {
  std::string formula;
  double scale = 5.0;
  NotMode not_mode = NotMode::paper;
  std::vector<ComponentReport> components;  // sorted by id
  std::vector<NodeReport> nodes;            // post-order, root last
  TrustAssessment root;

  const Metrics& root_metrics() const { return nodes.back().metrics; }
};

struct AssessOptions {
  NotMode not_mode = NotMode::paper;
  fuzzy::LinguisticVariable trust_variable = fuzzy::build_default_variables().trust;
};

inline SystemReport assess_system(const Scenario& scenario, const AssessOptions& opts = {}) {
  scenario.validate();
  SystemReport report;
  report.formula = unparse(scenario.formula);
  report.scale = scenario.defaults.scale;
  report.not_mode = opts.not_mode;

  std::map<std::string, Opinion> leaves;
  for (const auto& [id, comp] : scenario.components) {
    const ResolvedComponent rc = resolve(id, comp, scenario.defaults);
    leaves.emplace(id, rc.opinion);
    report.components.push_back(
        ComponentReport{id, rc.from_evidence, compute_metrics(rc.opinion, rc.scale, opts.trust_variable)});
  }

  for (const NodeEvaluation& n : evaluate_nodes(scenario.formula, leaves, opts.not_mode)) {
    report.nodes.push_back(NodeReport{n.path, n.text, n.leaf, compute_metrics(n.opinion, report.scale, opts.trust_variable)});
  }
  const auto& root = report.root_metrics().assessment;
  if (!root) throw DomainError("behavioral probability undefined at the root: f = 0");
  report.root = *root;
  return report;
}

}  // namespace ctm
