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

#include "iris/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cohort.hpp"
#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {
namespace {

// Scores of the seven unified models, in the same model order.
const std::vector<double> kRfsGen = {69.13, 34.68, 60.50, 42.45, 68.22, 62.35, 40.68};
const std::vector<double> kBisGen = {60.91, 78.82, 49.97, 69.30, 54.57, 45.94, 64.97};
const std::vector<double> kIfsUnd = {71.46, 62.14, 74.44, 32.84, 68.32, 51.90, 39.94};

// Composite Simpson integration of f over [a, b] with n (even) panels.
template <typename F>
double Simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double TDensity(double x, double df) {
  const double c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  return std::exp(c - (df + 1) / 2 * std::log1p(x * x / df));
}

double TwoSidedOracle(double t, double df) {
  return 1.0 - 2.0 * Simpson([df](double x) { return TDensity(x, df); }, 0.0, std::abs(t),
                             20000);
}

TEST(CronbachAlphaTest, IdenticalColumnsGiveOne) {
  ScoreMatrix m({"a", "b", "c", "d"}, {"x", "y", "z"},
                {{1, 1, 1}, {2, 2, 2}, {4, 4, 4}, {3, 3, 3}});
  EXPECT_NEAR(CronbachAlpha(m), 1.0, 1e-12);
}

TEST(CronbachAlphaTest, UncorrelatedEqualVarianceGivesZero) {
  // Orthogonal +-1 columns: every covariance is exactly zero.
  ScoreMatrix m({"a", "b", "c", "d"}, {"x", "y"}, {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  EXPECT_NEAR(CronbachAlpha(m), 0.0, 1e-12);
}

TEST(CronbachAlphaTest, ZeroTotalVarianceThrows) {
  ScoreMatrix m({"a", "b"}, {"x", "y"}, {{1, 1}, {1, 1}});
  EXPECT_THROW(CronbachAlpha(m), ComputationError);
}

TEST(CronbachAlphaTest, ShiftInvariant) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::vector<double>> v(10, std::vector<double>(4));
  for (auto& r : v) {
    const double common = n(rng);
    for (auto& x : r) x = common + 0.5 * n(rng);
  }
  std::vector<std::string> rows(10, "r"), cols = {"a", "b", "c", "d"};
  const double base = CronbachAlpha(ScoreMatrix(rows, cols, v));
  for (auto& r : v) r[2] += 17.0;
  EXPECT_NEAR(CronbachAlpha(ScoreMatrix(rows, cols, v)), base, 1e-10);
}

TEST(PearsonTest, Examples) {
  std::vector<double> x = {1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(2 * v + 1);
  EXPECT_NEAR(PearsonR(x, y), 1.0, 1e-12);
  EXPECT_NEAR(PearsonR(kRfsGen, kBisGen), -0.7949, 1e-3);
  EXPECT_NEAR(PearsonR(kRfsGen, kIfsUnd), 0.618, 1e-3);
  std::vector<double> flat(5, 2.0);
  EXPECT_THROW(PearsonR(x, flat), ComputationError);
}

TEST(SpearmanTest, Examples) {
  std::vector<double> x = {1, 2, 3, 4, 5, 6, 7};
  std::vector<double> rev(x.rbegin(), x.rend());
  std::vector<double> swap = {1, 2, 4, 3, 5, 6, 7};
  EXPECT_DOUBLE_EQ(SpearmanRho(x, x).rho, 1.0);
  EXPECT_EQ(SpearmanRho(x, x).p_value, 0.0);
  EXPECT_DOUBLE_EQ(SpearmanRho(x, rev).rho, -1.0);
  EXPECT_NEAR(SpearmanRho(x, swap).rho, 1.0 - 6.0 * 2 / (7.0 * 48), 1e-12);
  EXPECT_NEAR(SpearmanRho(x, swap).rho, 0.9643, 1e-4);
  EXPECT_NEAR(SpearmanRho(kRfsGen, kBisGen).rho, -0.643, 1e-3);
}

TEST(SpearmanTest, AverageRanksForTies) {
  std::vector<double> x = {10, 20, 20, 30};
  EXPECT_EQ(AverageRanks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(WelchTest, PublishedArchitectureSplit) {
  std::vector<double> hybrid = {95.94, 40.13, 64.43, 60.69, 60.01};
  std::vector<double> ar = {67.97, 52.49};
  auto r = WelchTTest(hybrid, ar);
  EXPECT_NEAR(r.p_two_sided, 0.76, 0.02);
  EXPECT_NEAR(r.df, 3.79, 0.01);
  auto s = WelchTTest(ar, hybrid);
  EXPECT_NEAR(s.p_two_sided, r.p_two_sided, 1e-14);
  EXPECT_NEAR(std::abs(s.t), std::abs(r.t), 1e-14);
}

TEST(WelchTest, EqualMeans) {
  std::vector<double> a = {1, 2, 3}, b = {0, 2, 4};
  auto same = WelchTTest(a, a);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p_two_sided, 1.0);
  auto unequal_var = WelchTTest(a, b);
  EXPECT_EQ(unequal_var.t, 0.0);
  EXPECT_NEAR(unequal_var.p_two_sided, 1.0, 1e-12);
  std::vector<double> one = {1};
  EXPECT_THROW(WelchTTest(one, a), ComputationError);
}

TEST(IncompleteBetaTest, MatchesNumericalIntegration) {
  for (double a : {1.0, 1.5, 2.0, 3.5, 7.0}) {
    for (double b : {1.0, 2.5, 4.0, 10.0}) {
      const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
      for (double x : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        // u = s^2 keeps the integrand smooth at 0 for fractional a.
        const double oracle =
            Simpson([&](double s) {
              return 2 * std::pow(s, 2 * a - 1) * std::pow(1 - s * s, b - 1);
            }, 0.0, std::sqrt(x), 20000) /
            beta;
        EXPECT_NEAR(RegularizedIncompleteBeta(a, b, x), oracle, 1e-8)
            << a << " " << b << " " << x;
      }
    }
  }
  EXPECT_EQ(RegularizedIncompleteBeta(2, 3, 0), 0.0);
  EXPECT_EQ(RegularizedIncompleteBeta(2, 3, 1), 1.0);
}

TEST(StudentTTest, PValuesMatchNumericalIntegration) {
  for (double df : {1.0, 2.0, 3.79, 5.0, 12.0, 30.0}) {
    for (double t : {0.0, 0.25, 0.8, 1.5, 2.2, 3.0}) {
      EXPECT_NEAR(StudentTTwoSided(t, df), TwoSidedOracle(t, df), 1e-4) << t << " " << df;
      EXPECT_NEAR(StudentTCdf(-t, df), 0.5 * StudentTTwoSided(t, df), 1e-12);
    }
  }
}

TEST(CorrelationPValueTest, Limits) {
  EXPECT_EQ(CorrelationPValue(1.0, 7), 0.0);
  EXPECT_EQ(CorrelationPValue(-1.0, 7), 0.0);
  EXPECT_NEAR(CorrelationPValue(0.0, 7), 1.0, 1e-12);
}

TEST(CorrelationMatrixTest, SymmetricUnitDiagonal) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < kRfsGen.size(); ++i) {
    rows.push_back({kRfsGen[i], kBisGen[i], kIfsUnd[i]});
  }
  ScoreMatrix m(std::vector<std::string>(rows.size(), "m"), {"RFS_Gen", "BIS_Gen", "IFS_Und"},
                rows);
  for (auto kind : {CorrelationKind::kPearson, CorrelationKind::kSpearman}) {
    auto c = DimensionCorrelationMatrix(m, kind);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_DOUBLE_EQ(c.values[i][i], 1.0);
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_DOUBLE_EQ(c.values[i][j], c.values[j][i]);
        EXPECT_LE(std::abs(c.values[i][j]), 1.0);
      }
    }
  }
  EXPECT_NEAR(DimensionCorrelationMatrix(m).values[0][1], -0.80, 0.02);
}

TEST(ScoreMatrixTest, SelectAndColumns) {
  ScoreMatrix m({"a", "b"}, {"x", "y", "z"}, {{1, 2, 3}, {4, 5, 6}});
  auto s = m.Select({"z", "x"});
  EXPECT_EQ(s.columns(), (std::vector<std::string>{"z", "x"}));
  EXPECT_EQ(s.Column("x"), (std::vector<double>{1, 4}));
  EXPECT_THROW(m.Select({"w"}), ValidationError);
  EXPECT_THROW(ScoreMatrix({"a"}, {"x", "y"}, {{1}}), ValidationError);
}

TEST(SensitivityTest, ConstantMetricRemovalKeepsRanking) {
  auto cohort = testing::SyntheticCohort(6, 3);
  for (auto& m : cohort) m.granular[Dimension::kIfsGen].entries[2].value = 0.4;
  auto loo = LooSensitivity(cohort, HyperParams{});
  ASSERT_EQ(loo.size(), 60u);
  EXPECT_EQ(loo[2].removed, "RD_skin");
  EXPECT_DOUBLE_EQ(loo[2].rho, 1.0);
}

TEST(SensitivityTest, IdenticalModelsGiveRhoOneEverywhere) {
  std::vector<ModelInput> cohort(4, testing::SyntheticModel("same", 1));
  for (const auto& e : LooSensitivity(cohort, HyperParams{})) EXPECT_EQ(e.rho, 1.0);
}

TEST(SensitivityTest, SingleVaryingMetric) {
  ScopedWarningCapture capture;
  auto base = testing::SyntheticModel("base", 1);
  std::vector<ModelInput> cohort;
  for (int i = 0; i < 4; ++i) {
    ModelInput m = base;
    m.model_id = "m" + std::to_string(i);
    // Only one metric differs; every other column is constant.
    m.granular[Dimension::kBisGen].entries[0].value = 0.1 * (i + 1);
    cohort.push_back(m);
  }
  auto loo = LooSensitivity(cohort, HyperParams{});
  for (const auto& e : loo) {
    if (e.removed == "Penalty_ΔGSR") {
      EXPECT_EQ(e.rho, 0.0);
    } else {
      EXPECT_DOUBLE_EQ(e.rho, 1.0) << e.removed;
    }
  }
}

TEST(SensitivityTest, DeterminingMetricRemovalLowersRho) {
  auto cohort = testing::SyntheticCohort(5, 9);
  // Make one metric dominate the ranking.
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    for (auto& [d, g] : cohort[i].granular)
      for (auto& e : g.entries) e.value *= 0.01;
    cohort[i].granular[Dimension::kRfsUnd].entries[0].value = 0.2 * static_cast<double>(i);
  }
  auto loo = LooSensitivity(cohort, HyperParams{});
  EXPECT_LT(loo[MetricTaxonomy::Canonical().Find("JSD_gender_US").value()].rho, 1.0);
}

TEST(SensitivityTest, PerturbationsOnSeparatedCohort) {
  std::vector<ModelInput> cohort;
  for (int i = 0; i < 5; ++i) {
    cohort.push_back(testing::SyntheticModel("m" + std::to_string(i), 77, 0.1 * i, 0.1 * i + 0.01));
  }
  auto zero = WeightPerturbation(cohort, HyperParams{}, {Perturbation{}});
  EXPECT_DOUBLE_EQ(zero[0].rho, 1.0);
  auto dims = DimensionPerturbations(0.1);
  ASSERT_EQ(dims.size(), 12u);
  for (const auto& e : WeightPerturbation(cohort, HyperParams{}, dims)) {
    EXPECT_DOUBLE_EQ(e.rho, 1.0) << e.label;
  }
  EXPECT_THROW(WeightPerturbation(cohort, HyperParams{}, {Perturbation{{}, "nope", 1.1}}),
               ValidationError);
}

TEST(SensitivityTest, NeedsThreeCompleteModels) {
  auto two = testing::SyntheticCohort(2, 1);
  EXPECT_THROW(LooSensitivity(two, HyperParams{}), ValidationError);
  auto three = testing::SyntheticCohort(3, 1);
  three[1].granular.erase(Dimension::kBisUnd);
  EXPECT_THROW(LooSensitivity(three, HyperParams{}), ValidationError);
}

TEST(DimensionScoreMatrixTest, OnlyCompleteModels) {
  auto cohort = testing::SyntheticCohort(4, 2);
  cohort[0].granular.erase(Dimension::kIfsUnd);
  auto results = ScoreCohort(cohort, HyperParams{}).models;
  auto m = DimensionScoreMatrix(results);
  EXPECT_EQ(m.row_count(), 3u);
  EXPECT_EQ(m.column_count(), 6u);
  EXPECT_EQ(m.columns().front(), "IFS_Gen");
}

}  // namespace
}  // namespace iris
