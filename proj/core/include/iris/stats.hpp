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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iris/config.hpp"
#include "iris/scoring.hpp"

namespace iris {

// Rectangular table of reals: one row per model, one column per item.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> rows, std::vector<std::string> columns,
              std::vector<std::vector<double>> values);

  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& columns() const { return columns_; }
  double At(std::size_t row, std::size_t column) const { return values_[row][column]; }
  std::vector<double> Column(std::size_t column) const;
  std::vector<double> Column(const std::string& name) const;
  std::optional<std::size_t> FindColumn(const std::string& name) const;

  // Keeps the named columns in the given order.
  ScoreMatrix Select(const std::vector<std::string>& columns) const;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> values_;
};

double SampleVariance(std::span<const double> xs);

// k/(k-1) * (1 - sum of item variances / variance of row totals).
double CronbachAlpha(const ScoreMatrix& m);

double PearsonR(std::span<const double> x, std::span<const double> y);

// 1-based ranks; ties share their average rank.
std::vector<double> AverageRanks(std::span<const double> xs);

struct CorrelationTest {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, t approximation with n-2 df
};
CorrelationTest SpearmanRho(std::span<const double> x, std::span<const double> y);

// Two-sided p for a correlation r from n observations.
double CorrelationPValue(double r, std::size_t n);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};
WelchResult WelchTTest(std::span<const double> a, std::span<const double> b);

// I_x(a, b) by continued fraction, relative accuracy about 1e-14.
double RegularizedIncompleteBeta(double a, double b, double x);
double StudentTCdf(double t, double df);
double StudentTTwoSided(double t, double df);

enum class CorrelationKind { kPearson, kSpearman };

struct CorrelationMatrix {
  CorrelationKind kind = CorrelationKind::kPearson;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};
CorrelationMatrix DimensionCorrelationMatrix(const ScoreMatrix& scores,
                                             CorrelationKind kind = CorrelationKind::kPearson);

// Dimension scores of models that have all six, as a ScoreMatrix with
// IFS_Gen..BIS_Und columns.
ScoreMatrix DimensionScoreMatrix(const std::vector<IrisResult>& results);

// ---------------------------------------------------------------------------
// Sensitivity

struct LooEntry {
  std::string removed;
  double rho = 1.0;
  double p_value = 0.0;
};

// Multiplies the deviation entries of one dimension (or one metric, or all
// entries when both are empty) by `factor` before aggregation.
struct Perturbation {
  std::optional<Dimension> dimension;
  std::string metric;
  double factor = 1.0;

  std::string Label() const;
};

struct PerturbationEntry {
  std::string label;
  double rho = 1.0;
  double p_value = 0.0;
};

struct SensitivityReport {
  std::vector<LooEntry> loo;
  std::vector<PerturbationEntry> perturbations;
};

// Overall scores of a cohort whose deviation entries are scaled by
// `weights` (one per canonical metric).
std::vector<double> WeightedOverallScores(const std::vector<std::vector<double>>& deviations,
                                          std::span<const double> weights,
                                          const HyperParams& hp);

// Canonical-order deviation values (60 per model). Every model needs all
// six dimensions complete; throws ValidationError otherwise.
std::vector<std::vector<double>> CanonicalDeviations(const std::vector<ModelInput>& models,
                                                     const HyperParams& hp);

// Drops each canonical metric in turn, rescores, and compares the ranking
// to the baseline. Needs at least three models.
std::vector<LooEntry> LooSensitivity(const std::vector<ModelInput>& models, const HyperParams& hp);

std::vector<PerturbationEntry> WeightPerturbation(const std::vector<ModelInput>& models,
                                                  const HyperParams& hp,
                                                  const std::vector<Perturbation>& perturbations);

// +fraction and -fraction on each dimension in turn.
std::vector<Perturbation> DimensionPerturbations(double fraction);

}  // namespace iris
