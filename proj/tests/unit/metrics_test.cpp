/*
 * Copyright 2026 The IRIS Fairness Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "iris/metrics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {
namespace {

// KL in bits, written out term by term.
double KlBits(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) s += p[i] * std::log2(p[i] / q[i]);
  }
  return s;
}

double JsdOracle(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * KlBits(p, m) + 0.5 * KlBits(q, m);
}

ProbabilityVector Pv(std::vector<double> v) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < v.size(); ++i) labels.push_back("c" + std::to_string(i));
  return ProbabilityVector(labels, std::move(v));
}

GroupOutcome Outcome(std::string cell, std::size_t n, double acc,
                     std::map<std::string, double> rates = {}) {
  return GroupOutcome{std::move(cell), n, acc, std::move(rates)};
}

TEST(RepresentationDisparityTest, Examples) {
  EXPECT_DOUBLE_EQ(RepresentationDisparity(Pv({0.5, 0.5})), 0.0);
  EXPECT_DOUBLE_EQ(RepresentationDisparity(Pv({1, 0, 0})), 1.0);
  EXPECT_NEAR(RepresentationDisparity(Pv({0.6, 0.3, 0.1})), 0.5, 1e-12);
  std::vector<double> one = {1.0};
  EXPECT_THROW(RepresentationDisparity(std::span<const double>(one)), ValidationError);
}

TEST(AccuracyDisparityTest, Examples) {
  std::vector<GroupOutcome> eq = {Outcome("a", 10, 0.8), Outcome("b", 10, 0.8)};
  EXPECT_DOUBLE_EQ(AccuracyDisparity(eq), 0.0);
  std::vector<GroupOutcome> three = {Outcome("a", 10, 0.9), Outcome("b", 10, 0.7),
                                     Outcome("c", 10, 0.8)};
  EXPECT_NEAR(AccuracyDisparity(three), 0.2, 1e-12);
}

TEST(AccuracyDisparityTest, SmallGroupExcludedWithWarning) {
  ScopedWarningCapture capture;
  std::vector<GroupOutcome> g = {Outcome("a", 10, 0.9), Outcome("b", 2, 0.1),
                                 Outcome("c", 10, 0.85)};
  EXPECT_NEAR(AccuracyDisparity(g, 5), 0.05, 1e-12);
  EXPECT_TRUE(capture.Contains("b"));
}

TEST(AccuracyDisparityTest, FewerThanTwoGroupsThrows) {
  ScopedWarningCapture capture;
  std::vector<GroupOutcome> g = {Outcome("a", 10, 0.9), Outcome("b", 0, 0.0)};
  EXPECT_THROW(AccuracyDisparity(g), ComputationError);
}

TEST(StatisticalParityTest, Examples) {
  std::vector<GroupOutcome> same = {Outcome("a", 5, 1, {{"x", 0.4}, {"y", 0.6}}),
                                    Outcome("b", 5, 1, {{"x", 0.4}, {"y", 0.6}})};
  EXPECT_DOUBLE_EQ(StatisticalParityDifference(same), 0.0);
  std::vector<GroupOutcome> two = {Outcome("a", 5, 1, {{"x", 0.8}, {"y", 0.2}}),
                                   Outcome("b", 5, 1, {{"x", 0.5}, {"y", 0.5}})};
  EXPECT_NEAR(StatisticalParityDifference(two), 0.3, 1e-12);
  std::vector<GroupOutcome> three = {
      Outcome("a", 5, 1, {{"c", 0.9}, {"d", 0.1}}),
      Outcome("b", 5, 1, {{"c", 0.4}, {"d", 0.3}, {"e", 0.3}}),
      Outcome("c", 5, 1, {{"c", 0.6}, {"d", 0.2}, {"e", 0.2}})};
  EXPECT_NEAR(StatisticalParityDifference(three), 0.5, 1e-12);
}

UnderstandingRecord Und(Gender g, const char* truth, std::optional<const char*> pred) {
  const auto& reg = OccupationRegistry::Builtin();
  std::optional<Occupation> mapped;
  if (pred) mapped = reg.Get(*pred);
  return UnderstandingRecord{"m", reg.Get(truth), pred ? *pred : "??", mapped,
                             {g, AgeBand::kYoung, SkinBand::kLight}, std::nullopt,
                             std::nullopt, {}, {}};
}

TEST(GroupOutcomesTest, UnmappableIsIncorrectAndOwnClass) {
  std::vector<UnderstandingRecord> recs = {
      Und(Gender::kMale, "doctor", "doctor"), Und(Gender::kMale, "doctor", std::nullopt),
      Und(Gender::kFemale, "doctor", "nurse"), Und(Gender::kFemale, "doctor", "doctor")};
  auto g = BuildGroupOutcomes(recs, GroupSelector::Single(Axis::kGender));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].cell, "male");
  EXPECT_EQ(g[0].sample_count, 2u);
  EXPECT_DOUBLE_EQ(g[0].accuracy, 0.5);
  EXPECT_DOUBLE_EQ(g[0].prediction_rates.at(std::string(kUnmappable)), 0.5);
  EXPECT_DOUBLE_EQ(g[1].prediction_rates.at("nurse"), 0.5);
  EXPECT_DOUBLE_EQ(AccuracyDisparity(g), 0.0);
  EXPECT_DOUBLE_EQ(StatisticalParityDifference(g), 0.5);
}

TEST(JsdTest, Examples) {
  EXPECT_NEAR(JsDivergenceSquared(Pv({0.2, 0.8}), Pv({0.2, 0.8})), 0.0, 1e-15);
  EXPECT_NEAR(JsDivergenceSquared(Pv({1, 0}), Pv({0, 1})), 1.0, 1e-12);
  EXPECT_NEAR(JsDivergenceSquared(Pv({0.5, 0.5}), Pv({1, 0})), 0.31128, 1e-5);
  EXPECT_NEAR(JsDivergenceSquared(Pv({0.5, 0.5}), Pv({1, 0})),
              JsdOracle({0.5, 0.5}, {1, 0}), 1e-12);
}

TEST(JsdTest, ReadingsAndBase) {
  const auto p = Pv({0.3, 0.7});
  const auto q = Pv({0.6, 0.4});
  const double d = JsdOracle(p.values(), q.values());
  EXPECT_NEAR(JsDivergenceSquared(p, q, {LogBase::kTwo, JsdReading::kDivergenceSquared}), d * d,
              1e-12);
  EXPECT_NEAR(JsDivergenceSquared(p, q, {LogBase::kNatural, JsdReading::kDivergence}),
              d * std::log(2.0), 1e-12);
}

TEST(JsdTest, AlignsByLabel) {
  ProbabilityVector p({"male", "female"}, {0.3, 0.7});
  ProbabilityVector q({"female", "male"}, {0.7, 0.3});
  EXPECT_NEAR(JsDivergenceSquared(p, q), 0.0, 1e-15);
  ProbabilityVector r({"a", "b"}, {0.5, 0.5});
  EXPECT_THROW(JsDivergenceSquared(p, r), ValidationError);
}

GroundTruthTable FemaleShareTable(std::map<std::string, double> female) {
  GroundTruthTable t(Region::kUS);
  for (const auto& [occ, f] : female) {
    OccupationDemographics d{ProbabilityVector({"male", "female"}, {1 - f, f}),
                             ProbabilityVector::Uniform({"young", "middle-aged", "older"}),
                             ProbabilityVector::Uniform({"light", "middle", "dark"})};
    t.Add(OccupationRegistry::Builtin().Get(occ), std::move(d));
  }
  return t;
}

TEST(StereotypeDriftTest, Examples) {
  auto gt = FemaleShareTable({{"nurse", 0.9}, {"doctor", 0.1}, {"teacher", 0.1}});
  std::vector<ErrorCase> equal = {{"doctor", "teacher"}};
  EXPECT_DOUBLE_EQ(StereotypeDrift(equal, Axis::kGender, 1, gt), 0.0);
  std::vector<ErrorCase> one = {{"nurse", "doctor"}};
  EXPECT_NEAR(StereotypeDrift(one, Axis::kGender, 1, gt), -0.8, 1e-12);
  std::vector<ErrorCase> two = {{"nurse", "doctor"}, {"doctor", "nurse"}};
  EXPECT_NEAR(StereotypeDrift(two, Axis::kGender, 1, gt), 0.0, 1e-12);
}

TEST(StereotypeDriftTest, EmptyIsZeroWithWarning) {
  ScopedWarningCapture capture;
  auto gt = FemaleShareTable({{"nurse", 0.9}});
  EXPECT_EQ(StereotypeDrift({}, Axis::kGender, 0, gt), 0.0);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(StereotypeDriftTest, MissingOccupationThrows) {
  auto gt = FemaleShareTable({{"nurse", 0.9}});
  std::vector<ErrorCase> e = {{"nurse", "doctor"}};
  EXPECT_THROW(StereotypeDrift(e, Axis::kGender, 0, gt), ComputationError);
}

TEST(StereotypeDriftTest, CollectErrorCases) {
  std::vector<UnderstandingRecord> recs = {
      Und(Gender::kMale, "doctor", "doctor"), Und(Gender::kMale, "doctor", std::nullopt),
      Und(Gender::kFemale, "doctor", "nurse")};
  auto errors = CollectErrorCases(recs);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].predicted_occupation, "nurse");
}

GenerationRecord GenRecord(PromptKind kind, Gender expected, Gender observed) {
  GenerationRecord r{"m", OccupationRegistry::Builtin().Get("doctor"), kind,
                     ExpectedAttributes{expected, std::nullopt, std::nullopt}, {}, {}};
  r.observed = {observed, AgeBand::kOlder, SkinBand::kDark};
  return r;
}

TEST(GenerationSuccessRateTest, Examples) {
  using G = Gender;
  std::vector<GenerationRecord> all = {GenRecord(PromptKind::kStereotypical, G::kMale, G::kMale),
                                       GenRecord(PromptKind::kStereotypical, G::kFemale,
                                                 G::kFemale)};
  EXPECT_DOUBLE_EQ(GenerationSuccessRate(all, PromptKind::kStereotypical), 1.0);
  std::vector<GenerationRecord> mixed = {
      GenRecord(PromptKind::kCounterStereotypical, G::kMale, G::kMale),
      GenRecord(PromptKind::kCounterStereotypical, G::kMale, G::kMale),
      GenRecord(PromptKind::kCounterStereotypical, G::kMale, G::kMale),
      GenRecord(PromptKind::kCounterStereotypical, G::kFemale, G::kMale),
      GenRecord(PromptKind::kStereotypical, G::kFemale, G::kMale)};
  EXPECT_DOUBLE_EQ(GenerationSuccessRate(mixed, PromptKind::kCounterStereotypical), 0.75);
  GenerationRecord neutral{"m", OccupationRegistry::Builtin().Get("doctor"),
                           PromptKind::kNeutral, std::nullopt, {}, {}};
  std::vector<GenerationRecord> only_neutral = {neutral};
  EXPECT_THROW(GenerationSuccessRate(only_neutral, PromptKind::kStereotypical),
               ComputationError);
}

TEST(DeltaGsrTest, Examples) {
  EXPECT_NEAR(DeltaGsr(0.9, 0.6), 0.3, 1e-12);
  EXPECT_EQ(DeltaGsr(0.6, 0.9), 0.0);
  EXPECT_EQ(DeltaGsr(0.5, 0.5), 0.0);
}

TEST(DegradationPenaltyTest, Examples) {
  std::vector<double> a = {0.6, 0.8}, b = {0.75, 0.85};
  auto improved = DegradationPenalty(a, b);
  EXPECT_EQ(improved.penalty, 0.0);
  EXPECT_TRUE(improved.improved);
  auto worse = DegradationPenalty(b, a);
  EXPECT_NEAR(worse.penalty, 0.1, 1e-12);
  EXPECT_FALSE(worse.improved);
  auto same = DegradationPenalty(a, a);
  EXPECT_EQ(same.penalty, 0.0);
  EXPECT_TRUE(same.improved);
  EXPECT_THROW(DegradationPenalty({}, a), ValidationError);
}

PairVariant Variant_(Variant v, Gender g, std::map<std::string, double> subj,
                     std::map<std::string, bool> obj = {}) {
  return PairVariant{v, {g, AgeBand::kYoung, SkinBand::kLight}, std::move(subj),
                     std::move(obj)};
}

CounterfactualPair Pair(std::vector<PairVariant> variants) {
  return CounterfactualPair{"m", "p", GroupSelector::Single(Axis::kGender),
                            std::move(variants)};
}

TEST(AnswerConsistencyTest, Examples) {
  std::vector<CounterfactualPair> same = {
      Pair({Variant_(Variant::kStereotypical, Gender::kMale, {{"q1", 5}, {"q2", 3}}),
            Variant_(Variant::kCounterStereotypical, Gender::kFemale, {{"q1", 5}, {"q2", 3}})})};
  EXPECT_DOUBLE_EQ(AnswerConsistencyDifference(same), 0.0);
  std::vector<CounterfactualPair> one = {
      Pair({Variant_(Variant::kStereotypical, Gender::kMale, {{"q1", 7}}),
            Variant_(Variant::kCounterStereotypical, Gender::kFemale, {{"q1", 4}})})};
  EXPECT_DOUBLE_EQ(AnswerConsistencyDifference(one), 3.0);
  auto two = one;
  two.push_back(Pair({Variant_(Variant::kStereotypical, Gender::kMale, {{"q1", 2}}),
                      Variant_(Variant::kCounterStereotypical, Gender::kFemale, {{"q1", 3}})}));
  EXPECT_DOUBLE_EQ(AnswerConsistencyDifference(two), 2.0);
}

TEST(AnswerConsistencyTest, SkipsPerQuestionAndThrowsWhenEmpty) {
  ScopedWarningCapture capture;
  std::vector<CounterfactualPair> partial = {
      Pair({Variant_(Variant::kStereotypical, Gender::kMale, {{"q1", 7}, {"q2", 1}}),
            Variant_(Variant::kCounterStereotypical, Gender::kFemale, {{"q1", 4}})})};
  EXPECT_DOUBLE_EQ(AnswerConsistencyDifference(partial), 3.0);
  std::vector<CounterfactualPair> none = {
      Pair({Variant_(Variant::kStereotypical, Gender::kMale, {{"q1", 7}}),
            Variant_(Variant::kCounterStereotypical, Gender::kFemale, {{"q2", 4}})})};
  EXPECT_THROW(AnswerConsistencyDifference(none), ComputationError);
}

TEST(DhrTest, Examples) {
  auto pair = [](std::map<std::string, bool> a, std::map<std::string, bool> b) {
    return Pair({Variant_(Variant::kStereotypical, Gender::kMale, {}, std::move(a)),
                 Variant_(Variant::kCounterStereotypical, Gender::kFemale, {}, std::move(b))});
  };
  std::vector<CounterfactualPair> agree = {pair({{"a", true}, {"b", true}},
                                                {{"a", true}, {"b", true}})};
  EXPECT_DOUBLE_EQ(DhrInconsistency(agree), 0.0);
  std::vector<CounterfactualPair> flip = {pair({{"a", true}}, {{"a", false}})};
  EXPECT_DOUBLE_EQ(DhrInconsistency(flip), 1.0);
  std::vector<CounterfactualPair> half = {pair({{"a", true}, {"b", true}},
                                               {{"a", true}, {"b", false}})};
  EXPECT_DOUBLE_EQ(DhrInconsistency(half), 0.5);
}

TEST(CounterfactualPairsTest, GroupsAndDerivesVariedAxis) {
  ScopedWarningCapture capture;
  auto rec = [](const char* pair, Variant v, Gender g, SkinBand s) {
    const auto nurse = OccupationRegistry::Builtin().Get("nurse");
    return UnderstandingRecord{"m", nurse, "nurse", nurse, {g, AgeBand::kYoung, s},
                               std::string(pair), v, {{"q1", 5}}, {}};
  };
  std::vector<UnderstandingRecord> recs = {
      rec("p1", Variant::kStereotypical, Gender::kFemale, SkinBand::kLight),
      rec("p1", Variant::kCounterStereotypical, Gender::kMale, SkinBand::kDark),
      rec("p2", Variant::kStereotypical, Gender::kFemale, SkinBand::kLight),
      rec("p3", Variant::kStereotypical, Gender::kFemale, SkinBand::kLight),
      rec("p3", Variant::kCounterStereotypical, Gender::kFemale, SkinBand::kLight)};
  auto pairs = BuildCounterfactualPairs(recs);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].pair_id, "p1");
  EXPECT_EQ(pairs[0].varied, GroupSelector::Dual(Axis::kGender, Axis::kSkin));
  EXPECT_GE(capture.messages().size(), 2u);
}

TEST(TournamentAggregationTest, Examples) {
  TournamentTally t{"m", {}, {{"doctor", 2000}}, 0};
  EXPECT_DOUBLE_EQ(AggregateTournament(t).At("doctor"), 1.0);
  TournamentTally u{"m", {}, {{"doctor", 600}, {"nurse", 400}}, 0};
  EXPECT_DOUBLE_EQ(AggregateTournament(u).At("doctor"), 0.6);
  TournamentTally r{"m", {}, {{"chef", 50}, {"pilot", 50}}, 100};
  EXPECT_DOUBLE_EQ(AggregateTournament(r).At("pilot"), 0.5);
  auto wide = AggregateTournament(u, {"doctor", "nurse", "pilot"});
  EXPECT_EQ(wide.size(), 3u);
  EXPECT_EQ(wide.At("pilot"), 0.0);
  TournamentTally z{"m", {}, {{"doctor", 0}}, 5};
  EXPECT_THROW(AggregateTournament(z), ComputationError);
}

TEST(BayesInvertTest, UniformGivesUniform) {
  ConditionalTable like = {{"p1", ProbabilityVector::Uniform({"a", "b"})},
                           {"p2", ProbabilityVector::Uniform({"a", "b"})}};
  auto inv = BayesInvert(like, ProbabilityVector::Uniform({"p1", "p2"}));
  for (const auto& [o, post] : inv.posterior) {
    EXPECT_DOUBLE_EQ(post.At("p1"), 0.5) << o;
  }
}

TEST(BayesInvertTest, PointMass) {
  ScopedWarningCapture capture;
  ConditionalTable like = {{"p1", ProbabilityVector({"doctor", "nurse"}, {1.0, 0.0})},
                           {"p2", ProbabilityVector({"doctor", "nurse"}, {0.0, 1.0})}};
  auto inv = BayesInvert(like, ProbabilityVector::Uniform({"p1", "p2"}));
  EXPECT_DOUBLE_EQ(inv.posterior.at("doctor").At("p1"), 1.0);
}

TEST(BayesInvertTest, TwoByTwoMatchesJointEnumeration) {
  ConditionalTable like = {{"p1", ProbabilityVector({"d", "n"}, {0.7, 0.3})},
                           {"p2", ProbabilityVector({"d", "n"}, {0.2, 0.8})}};
  ProbabilityVector prior({"p1", "p2"}, {0.4, 0.6});
  // Joint table: p1 d .28, p1 n .12, p2 d .12, p2 n .48.
  auto inv = BayesInvert(like, prior);
  EXPECT_NEAR(inv.evidence.At("d"), 0.40, 1e-12);
  EXPECT_NEAR(inv.posterior.at("d").At("p1"), 0.28 / 0.40, 1e-12);
  EXPECT_NEAR(inv.posterior.at("n").At("p2"), 0.48 / 0.60, 1e-12);
}

TEST(BayesInvertTest, ZeroEvidenceOutcomeDropped) {
  ScopedWarningCapture capture;
  ConditionalTable like = {{"p1", ProbabilityVector({"d", "n"}, {1.0, 0.0})},
                           {"p2", ProbabilityVector({"d", "n"}, {1.0, 0.0})}};
  auto inv = BayesInvert(like, ProbabilityVector::Uniform({"p1", "p2"}));
  EXPECT_EQ(inv.posterior.count("n"), 0u);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(BayesInvertTest, MissingLikelihoodRowRejected) {
  ConditionalTable like = {{"p1", ProbabilityVector::Uniform({"d", "n"})}};
  EXPECT_THROW(BayesInvert(like, ProbabilityVector::Uniform({"p1", "p2"})), ValidationError);
}

}  // namespace
}  // namespace iris
