#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "certain_trust/errors.hpp"
#include "certain_trust/fam.hpp"
#include "certain_trust/fuzzy.hpp"

using namespace ctm;
using namespace ctm::fuzzy;

TEST(Membership, GaussianHalfHeightAtRangeEdge) {
  const FuzzySet s = set_from_range(Label::average, 30, 70);
  EXPECT_EQ(s.center, 50);
  EXPECT_NEAR(s.sigma * std::sqrt(2 * std::numbers::ln2), 20.0, 1e-12);
  EXPECT_NEAR(gaussian_mf(30, s), 0.5, 1e-12);
  EXPECT_NEAR(gaussian_mf(70, s), 0.5, 1e-12);
  EXPECT_EQ(gaussian_mf(50, s), 1.0);
  EXPECT_GT(gaussian_mf(1e6, s), -1.0);
}

TEST(Membership, ValuesInUnitIntervalAndPositive) {
  const DefaultVariables v = build_default_variables();
  for (const LinguisticVariable* var : {&v.certainty, &v.rating, &v.trust}) {
    for (int i = 0; i <= 200; ++i) {
      const double x = var->lo() + (var->hi() - var->lo()) * i / 200.0;
      for (double m : var->fuzzify(x)) {
        EXPECT_GT(m, 0.0);
        EXPECT_LE(m, 1.0);
      }
    }
  }
}

TEST(Membership, DefaultRanges) {
  const DefaultVariables v = build_default_variables();
  EXPECT_DOUBLE_EQ(v.certainty.set(Label::very_low).center, 0.1);
  EXPECT_DOUBLE_EQ(v.rating.set(Label::very_high).center, 4.625);
  EXPECT_DOUBLE_EQ(v.trust.set(Label::high).center, 75);
  EXPECT_EQ(v.rating.lo(), 1.0);
  EXPECT_EQ(v.trust.hi(), 100.0);
}

TEST(Membership, ClampsOutOfDomainInput) {
  const DefaultVariables v = build_default_variables();
  EXPECT_EQ(v.rating.fuzzify(0.4), v.rating.fuzzify(1.0));
  EXPECT_EQ(v.certainty.fuzzify(1.5), v.certainty.fuzzify(1.0));
}

TEST(Membership, OverrideReplacesOneSet) {
  const DefaultVariables v = build_default_variables();
  const LinguisticVariable t2 = v.trust.with_set(Label::average, 55, 10);
  EXPECT_EQ(t2.set(Label::average).center, 55);
  EXPECT_EQ(t2.set(Label::high).center, v.trust.set(Label::high).center);
  EXPECT_THROW(v.trust.with_set(Label::average, 55, 0), InputError);
}

TEST(Labels, Names) {
  EXPECT_EQ(to_string(Label::very_high), "very_high");
  EXPECT_EQ(parse_label("average"), Label::average);
  EXPECT_FALSE(parse_label("medium").has_value());
}

TEST(RuleBase, DefaultHas25TotalRules) {
  const RuleBase rb = build_default_rulebase();
  EXPECT_EQ(rb.size(), 25u);
  EXPECT_EQ(rb.consequent(Label::high, Label::average), Label::average);
  EXPECT_EQ(rb.consequent(Label::very_high, Label::very_high), Label::very_high);
  EXPECT_EQ(rb.consequent(Label::very_low, Label::very_high), Label::very_low);
  std::set<std::pair<int, int>> seen;
  for (const Rule& r : rb.rules()) seen.insert({index_of(r.certainty), index_of(r.rating)});
  EXPECT_EQ(seen.size(), 25u);
}

TEST(RuleBase, ConsequentsNondecreasing) {
  const RuleBase rb = build_default_rulebase();
  for (Label c : kLabels) {
    for (std::size_t r = 1; r < kLabelCount; ++r) {
      EXPECT_LE(index_of(rb.consequent(c, kLabels[r - 1])), index_of(rb.consequent(c, kLabels[r])));
      EXPECT_LE(index_of(rb.consequent(kLabels[r - 1], c)), index_of(rb.consequent(kLabels[r], c)));
    }
  }
}

TEST(RuleBase, RejectsIncompleteOrDuplicate) {
  std::vector<Rule> rules = build_default_rulebase().rules();
  rules.pop_back();
  EXPECT_THROW(RuleBase{rules}, InputError);
  rules.push_back(rules.front());
  EXPECT_THROW(RuleBase{rules}, InputError);
}

TEST(Pipeline, PieceParts) {
  const std::vector<double> ys = sample_grid(0, 100, 0.1);
  ASSERT_EQ(ys.size(), 1001u);
  EXPECT_EQ(ys.back(), 100.0);
  const DefaultVariables v = build_default_variables();
  const MembershipCurve cut = implicate(v.trust.set(Label::average), 0.3, ys);
  for (double m : cut) EXPECT_LE(m, 0.3);
  EXPECT_THROW(aggregate(std::span<const MembershipCurve>{}), InputError);
  const std::vector<double> zero(ys.size(), 0.0);
  EXPECT_THROW(defuzzify_centroid(ys, zero), DomainError);
  std::vector<double> spike(ys.size(), 0.0);
  spike[420] = 0.7;
  EXPECT_DOUBLE_EQ(defuzzify_centroid(ys, spike), ys[420]);
}

TEST(Pipeline, FrozenValues) {
  // Brute-force reference values from an independent implementation.
  EXPECT_NEAR(infer_trust(0.7, 3.0), 50.0, 1e-9);
  EXPECT_NEAR(infer_trust(1.0, 5.0), 73.37878162395084, 1e-9);
  EXPECT_NEAR(infer_trust(0.05, 1.2), 22.305646693273122, 1e-9);
  EXPECT_NEAR(infer_trust(0.0, 3.0), 21.364075348327738, 1e-9);
  EXPECT_NEAR(infer_trust(0.5, 2.5), 42.450761016679905, 1e-9);
}

TEST(Pipeline, HighCertaintyAverageRatingIsAverage) {
  const double t = infer_trust(0.7, 3.0);
  EXPECT_GE(t, 30);
  EXPECT_LE(t, 70);
  EXPECT_EQ(classify_trust(t), Label::average);
}

// VeryHigh inputs reach only 0.5 membership at the domain corner, so the
// crisp output stays below 75 but still classifies High.
TEST(Pipeline, TopCornerClassifiesHigh) {
  const double t = infer_trust(1.0, 5.0);
  EXPECT_LT(t, 75.0);
  EXPECT_EQ(classify_trust(t), Label::high);
}

TEST(Pipeline, ExplainReportsAllRules) {
  const MamdaniEngine e;
  const InferenceResult r = e.explain(0.7, 3.0);
  ASSERT_EQ(r.fired.size(), 25u);
  EXPECT_EQ(r.fired[13].rule.certainty, Label::high);
  EXPECT_EQ(r.fired[13].rule.rating, Label::average);
  EXPECT_NEAR(r.fired[12].weight, 0.5, 1e-12);
  for (const FiredRule& fr : r.fired) {
    EXPECT_EQ(fr.weight, std::min(r.certainty_memberships[index_of(fr.rule.certainty)],
                                  r.rating_memberships[index_of(fr.rule.rating)]));
  }
}

TEST(Pipeline, DeterministicAndInRange) {
  const MamdaniEngine e;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 16; ++j) {
      const double c = i / 20.0, t = 1.0 + j * 0.25;
      const double a = e.infer(c, t), b = MamdaniEngine().infer(c, t);
      ASSERT_EQ(a, b);
      ASSERT_GE(a, 0.0);
      ASSERT_LE(a, 100.0);
    }
  }
}

TEST(Pipeline, FineStepConverges) {
  const MamdaniEngine fine(0.01);
  EXPECT_NEAR(fine.infer(0.7, 3.0), infer_trust(0.7, 3.0), 0.05);
  EXPECT_NEAR(fine.infer(0.3, 4.0), infer_trust(0.3, 4.0), 0.05);
  EXPECT_THROW(MamdaniEngine(0.0), InputError);
  EXPECT_THROW(MamdaniEngine(2.0), InputError);
}

TEST(Classification, MaxMembership) {
  EXPECT_EQ(classify_trust(90), Label::very_high);
  EXPECT_EQ(classify_trust(50), Label::average);
  EXPECT_EQ(classify_trust(51.69), Label::average);
  EXPECT_EQ(classify_trust(0), Label::very_low);
  EXPECT_EQ(classify_trust(75), Label::high);
}

TEST(Classification, TiesGoUp) {
  // Equal-width sets VL [0,20] and L [10,40] do not tie symmetrically, so
  // build a variable where two sets do.
  const LinguisticVariable v("x", 0, 10,
                             {FuzzySet{Label::very_low, 1, 1}, FuzzySet{Label::low, 3, 1},
                              FuzzySet{Label::average, 5, 1}, FuzzySet{Label::high, 7, 1},
                              FuzzySet{Label::very_high, 9, 1}});
  EXPECT_EQ(classify(v, 4.0), Label::average);
  EXPECT_EQ(classify(v, 2.0), Label::low);
}

// Lattice monotonicity does not hold with the default sets. Freeze the
// exact set of decreasing steps so any change in behavior is visible.
TEST(Pipeline, LatticeMonotonicityViolationsAreFrozen) {
  const MamdaniEngine e;
  std::set<std::tuple<char, int, int>> found;  // direction, c*10, t*2
  for (int i = 1; i <= 10; ++i) {
    for (int j = 2; j <= 10; ++j) {
      const double c = i / 10.0, t = j / 2.0, x = e.infer(c, t);
      if (i < 10 && e.infer((i + 1) / 10.0, t) < x - 1e-9) found.insert({'c', i, j});
      if (j < 10 && e.infer(c, (j + 1) / 2.0) < x - 1e-9) found.insert({'t', i, j});
    }
  }
  const std::set<std::tuple<char, int, int>> expected{
      {'t', 1, 2}, {'t', 1, 5}, {'c', 4, 3}, {'c', 4, 4}, {'t', 4, 9},
      {'t', 5, 2}, {'c', 6, 3}, {'t', 7, 9}, {'c', 8, 3}, {'t', 8, 9},
      {'c', 9, 4}, {'c', 9, 5}, {'c', 9, 6}, {'t', 9, 6}, {'c', 9, 9}};
  EXPECT_EQ(found, expected);
}

// FAM cells (c > 0) against the pipeline's class: the lattice agrees within
// one class step except at these low-rating cells, where the FAM says VL and
// the pipeline lands in Average.
TEST(Pipeline, FamConsistencyExceptionsAreFrozen) {
  const MamdaniEngine e;
  std::set<std::tuple<std::string, int, int>> found;  // table, c*10, t*10
  int checked = 0;
  for (const fam::FamTable& tb : {fam::people20(), fam::people100()}) {
    for (std::size_t i = 0; i < tb.c_grid().size(); ++i) {
      const double c = tb.c_grid()[i];
      if (c == 0.0) continue;
      for (std::size_t j = 0; j < tb.t_grid().size(); ++j) {
        const double t = tb.t_grid()[j];
        const int pipe = fam::rank(fam::from_label(e.classify_trust(e.infer(c, t))));
        ++checked;
        if (std::abs(pipe - fam::rank(tb.at(i, j))) > 1) {
          found.insert({tb.name(), static_cast<int>(std::lround(c * 10)), static_cast<int>(std::lround(t * 10))});
        }
      }
    }
  }
  EXPECT_EQ(checked, 25 + 90);
  const std::set<std::tuple<std::string, int, int>> expected{
      {"people20", 4, 20},  {"people100", 3, 20}, {"people100", 3, 25}, {"people100", 3, 30},
      {"people100", 4, 20}, {"people100", 4, 25}, {"people100", 5, 20}, {"people100", 6, 15}};
  EXPECT_EQ(found, expected);
}

// Independent evaluation of the same pipeline directly from the definitions.
TEST(Pipeline, MatchesDirectEvaluation) {
  const DefaultVariables v = build_default_variables();
  const RuleBase rb = build_default_rulebase();
  auto direct = [&](double c, double t) {
    double num = 0, den = 0;
    for (int k = 0; k <= 1000; ++k) {
      const double y = k * 0.1;
      double mu = 0;
      for (Label lc : kLabels) {
        for (Label lr : kLabels) {
          const double w = std::min(gaussian_mf(std::clamp(c, 0.0, 1.0), v.certainty.set(lc)),
                                    gaussian_mf(std::clamp(t, 1.0, 5.0), v.rating.set(lr)));
          mu = std::max(mu, std::min(w, gaussian_mf(y, v.trust.set(rb.consequent(lc, lr)))));
        }
      }
      num += y * mu;
      den += mu;
    }
    return num / den;
  };
  for (double c : {0.0, 0.15, 0.5, 0.85, 1.0}) {
    for (double t : {1.0, 2.2, 3.0, 4.1, 5.0}) EXPECT_NEAR(infer_trust(c, t), direct(c, t), 1e-9) << c << "," << t;
  }
}
