#pragma once

// Gaussian linguistic variables for certainty, rating and trust, the 25-rule
// base, and a Mamdani engine (min conjunction, min implication, max
// aggregation, discrete centroid).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certain_trust/errors.hpp"

namespace ctm::fuzzy {

enum class Label { very_low, low, average, high, very_high };

inline constexpr std::size_t kLabelCount = 5;
inline constexpr std::array<Label, kLabelCount> kLabels = {Label::very_low, Label::low, Label::average, Label::high,
                                                           Label::very_high};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::very_low: return "very_low";
    case Label::low: return "low";
    case Label::average: return "average";
    case Label::high: return "high";
    case Label::very_high: return "very_high";
  }
  return "?";
}

inline std::optional<Label> parse_label(std::string_view s) {
  for (Label l : kLabels) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

struct FuzzySet {
  Label label = Label::average;
  double center = 0.0;
  double sigma = 1.0;
};

/// exp(-(x - center)^2 / (2 sigma^2))
inline double gaussian_mf(double x, const FuzzySet& set) {
  const double d = x - set.center;
  return std::exp(-(d * d) / (2.0 * set.sigma * set.sigma));
}

/// Gaussian whose membership is exactly 0.5 at both ends of [lo, hi].
inline FuzzySet set_from_range(Label label, double lo, double hi) {
  if (!(hi > lo)) throw InputError("class range must have hi > lo");
  const double half_height = std::sqrt(2.0 * std::numbers::ln2);
  return FuzzySet{label, 0.5 * (lo + hi), (hi - lo) / (2.0 * half_height)};
}

using Memberships = std::array<double, kLabelCount>;

class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, double lo, double hi, std::array<FuzzySet, kLabelCount> sets)
      : name_(std::move(name)), lo_(lo), hi_(hi), sets_(sets) {
    if (!(lo_ < hi_)) throw InputError(name_ + ": domain must have lo < hi");
    for (std::size_t i = 0; i < kLabelCount; ++i) {
      const FuzzySet& s = sets_[i];
      if (s.label != kLabels[i]) throw InputError(name_ + ": sets must be ordered very_low..very_high");
      if (!(s.sigma > 0.0)) throw InputError(name_ + ": sigma must be > 0");
      if (s.center < lo_ || s.center > hi_) throw InputError(name_ + ": set center outside the domain");
      if (i > 0 && !(s.center > sets_[i - 1].center)) {
        throw InputError(name_ + ": set centers must be strictly increasing");
      }
    }
  }

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::array<FuzzySet, kLabelCount>& sets() const { return sets_; }
  const FuzzySet& set(Label l) const { return sets_[index_of(l)]; }

  double clamp(double x) const { return std::clamp(x, lo_, hi_); }

  /// Membership of x (clamped to the domain) in every set.
  Memberships fuzzify(double x) const {
    const double xc = clamp(x);
    Memberships m{};
    for (std::size_t i = 0; i < kLabelCount; ++i) m[i] = gaussian_mf(xc, sets_[i]);
    return m;
  }

  /// Returns a copy with one set replaced; the result is revalidated.
  LinguisticVariable with_set(Label l, double center, double sigma) const {
    auto sets = sets_;
    sets[index_of(l)] = FuzzySet{l, center, sigma};
    return LinguisticVariable(name_, lo_, hi_, sets);
  }

 private:
  std::string name_;
  double lo_;
  double hi_;
  std::array<FuzzySet, kLabelCount> sets_;
};

inline LinguisticVariable variable_from_ranges(std::string name, double lo, double hi,
                                               const std::array<std::pair<double, double>, kLabelCount>& ranges) {
  std::array<FuzzySet, kLabelCount> sets{};
  for (std::size_t i = 0; i < kLabelCount; ++i) sets[i] = set_from_range(kLabels[i], ranges[i].first, ranges[i].second);
  return LinguisticVariable(std::move(name), lo, hi, sets);
}

struct DefaultVariables {
  LinguisticVariable certainty;
  LinguisticVariable rating;
  LinguisticVariable trust;
};

// Class ranges per variable, very_low..very_high.
inline DefaultVariables build_default_variables() {
  return DefaultVariables{
      variable_from_ranges("certainty", 0.0, 1.0, {{{0.0, 0.2}, {0.1, 0.4}, {0.3, 0.7}, {0.6, 0.9}, {0.8, 1.0}}}),
      variable_from_ranges("rating", 1.0, 5.0, {{{1.0, 2.0}, {1.5, 3.0}, {2.0, 4.0}, {3.0, 4.5}, {4.25, 5.0}}}),
      variable_from_ranges("trust", 0.0, 100.0,
                           {{{0.0, 20.0}, {10.0, 40.0}, {30.0, 70.0}, {60.0, 90.0}, {80.0, 100.0}}}),
  };
}

struct Rule {
  Label certainty;
  Label rating;
  Label trust;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// One consequent per (certainty, rating) pair.
class RuleBase {
 public:
  explicit RuleBase(std::vector<Rule> rules) : rules_(std::move(rules)) {
    std::array<std::array<bool, kLabelCount>, kLabelCount> seen{};
    for (const Rule& r : rules_) {
      bool& slot = seen[index_of(r.certainty)][index_of(r.rating)];
      if (slot) {
        throw InputError("duplicate rule for certainty=" + std::string(to_string(r.certainty)) +
                         " rating=" + std::string(to_string(r.rating)));
      }
      slot = true;
      table_[index_of(r.certainty)][index_of(r.rating)] = r.trust;
    }
    for (const auto& row : seen) {
      if (!std::all_of(row.begin(), row.end(), [](bool b) { return b; })) {
        throw InputError("rule base must cover every (certainty, rating) pair");
      }
    }
  }

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  Label consequent(Label certainty, Label rating) const { return table_[index_of(certainty)][index_of(rating)]; }

 private:
  std::vector<Rule> rules_;
  std::array<std::array<Label, kLabelCount>, kLabelCount> table_{};
};

/// R1..R25, ordered by rating class then certainty class.
inline RuleBase build_default_rulebase() {
  using L = Label;
  constexpr L VL = L::very_low, LO = L::low, AV = L::average, HI = L::high, VH = L::very_high;
  // consequents[rating][certainty]
  constexpr std::array<std::array<L, kLabelCount>, kLabelCount> consequents = {{
      {VL, VL, VL, VL, VL},
      {VL, LO, LO, AV, AV},
      {VL, LO, AV, AV, HI},
      {VL, LO, AV, HI, HI},
      {VL, LO, AV, HI, VH},
  }};
  std::vector<Rule> rules;
  rules.reserve(kLabelCount * kLabelCount);
  for (Label rating : kLabels) {
    for (Label cert : kLabels) rules.push_back(Rule{cert, rating, consequents[index_of(rating)][index_of(cert)]});
  }
  return RuleBase(std::move(rules));
}

/// min(mu_certainty, mu_rating)
inline double rule_strength(const Rule& rule, const Memberships& certainty, const Memberships& rating) {
  return std::min(certainty[index_of(rule.certainty)], rating[index_of(rule.rating)]);
}

using MembershipCurve = std::vector<double>;

/// Evenly spaced samples lo, lo+step, ..., hi. The last sample is hi itself
/// when step divides the span (up to rounding).
inline std::vector<double> sample_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InputError("sampling step must be > 0");
  if (!(hi > lo)) throw InputError("sampling range must have hi > lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = std::min(hi, lo + static_cast<double>(i) * step);
  return ys;
}

/// Mamdani truncation: min(weight, mu(y)) at each sample.
inline MembershipCurve implicate(const FuzzySet& consequent, double weight, std::span<const double> ys) {
  if (!(weight >= 0.0) || weight > 1.0) throw InputError("rule weight must lie in [0,1]");
  MembershipCurve out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out[i] = std::min(weight, gaussian_mf(ys[i], consequent));
  return out;
}

/// Pointwise maximum.
inline MembershipCurve aggregate(std::span<const MembershipCurve> curves) {
  if (curves.empty()) throw InputError("cannot aggregate an empty rule list");
  MembershipCurve out = curves.front();
  for (const MembershipCurve& c : curves.subspan(1)) {
    if (c.size() != out.size()) throw InputError("aggregated curves must share a sample grid");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], c[i]);
  }
  return out;
}

/// sum(y * mu(y)) / sum(mu(y)) over the samples.
inline double defuzzify_centroid(std::span<const double> ys, std::span<const double> mu) {
  if (ys.size() != mu.size()) throw InputError("centroid: sample and membership sizes differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    num += ys[i] * mu[i];
    den += mu[i];
  }
  if (!(den > 0.0)) throw DomainError("centroid of an all-zero membership function");
  return num / den;
}

struct FiredRule {
  std::size_t index;  // 0-based position in the rule base (R1 == 0)
  Rule rule;
  double weight;
};

struct InferenceResult {
  double certainty_input;  // after clamping
  double rating_input;     // after clamping
  Memberships certainty_memberships;
  Memberships rating_memberships;
  std::vector<FiredRule> fired;
  double trust;
};

/// The maximum-membership trust class; ties go to the higher class.
inline Label classify(const LinguisticVariable& var, double x) {
  const Memberships m = var.fuzzify(x);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kLabelCount; ++i) {
    if (m[i] >= m[best]) best = i;
  }
  return kLabels[best];
}

class MamdaniEngine {
 public:
  explicit MamdaniEngine(double step = 0.1)
      : MamdaniEngine(build_default_variables(), build_default_rulebase(), step) {}

  MamdaniEngine(DefaultVariables vars, RuleBase rules, double step)
      : vars_(std::move(vars)), rules_(std::move(rules)), step_(step) {
    if (!(step_ > 0.0) || step_ > 1.0) throw InputError("sampling step must lie in (0, 1]");
    ys_ = sample_grid(vars_.trust.lo(), vars_.trust.hi(), step_);
  }

  const DefaultVariables& variables() const { return vars_; }
  const RuleBase& rules() const { return rules_; }
  double step() const { return step_; }
  std::span<const double> samples() const { return ys_; }

  InferenceResult explain(double certainty, double rating) const {
    InferenceResult res{};
    res.certainty_input = vars_.certainty.clamp(certainty);
    res.rating_input = vars_.rating.clamp(rating);
    res.certainty_memberships = vars_.certainty.fuzzify(res.certainty_input);
    res.rating_memberships = vars_.rating.fuzzify(res.rating_input);

    std::vector<MembershipCurve> truncated;
    truncated.reserve(rules_.size());
    res.fired.reserve(rules_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const Rule& r = rules_.rules()[i];
      const double w = rule_strength(r, res.certainty_memberships, res.rating_memberships);
      res.fired.push_back(FiredRule{i, r, w});
      truncated.push_back(implicate(vars_.trust.set(r.trust), w, ys_));
    }
    const MembershipCurve agg = aggregate(truncated);
    res.trust = defuzzify_centroid(ys_, agg);
    return res;
  }

  double infer(double certainty, double rating) const { return explain(certainty, rating).trust; }

  Label classify_trust(double trust_pct) const { return classify(vars_.trust, trust_pct); }

 private:
  DefaultVariables vars_;
  RuleBase rules_;
  double step_;
  std::vector<double> ys_;
};

inline double infer_trust(double certainty, double rating) {
  static const MamdaniEngine engine;
  return engine.infer(certainty, rating);
}

inline Label classify_trust(double trust_pct) {
  static const LinguisticVariable trust = build_default_variables().trust;
  return classify(trust, trust_pct);
}

}  // namespace ctm::fuzzy
