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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iris/config.hpp"
#include "iris/diagnosis.hpp"
#include "iris/taxonomy.hpp"

namespace iris {

struct MetricEntry {
  std::string name;
  double value = 0.0;

  friend bool operator==(const MetricEntry&, const MetricEntry&) = default;
};

// Raw granular values of one dimension. Entries follow the taxonomy order;
// a vector may hold a subsequence when some inputs were unavailable.
struct GranularMetricVector {
  Dimension dimension = Dimension::kIfsGen;
  std::vector<MetricEntry> entries;

  bool complete() const { return entries.size() == MetricTaxonomy::Canonical().For(dimension).size(); }
  friend bool operator==(const GranularMetricVector&, const GranularMetricVector&) = default;
};

// Normalized coordinates; 0 is the ideal.
struct DeviationVector {
  Dimension dimension = Dimension::kIfsGen;
  std::vector<MetricEntry> entries;

  friend bool operator==(const DeviationVector&, const DeviationVector&) = default;
};

// Throws ValidationError on unknown names, wrong dimension, duplicates or
// out-of-order entries.
void ValidateGranular(const GranularMetricVector& v,
                      const MetricTaxonomy& taxonomy = MetricTaxonomy::Canonical());

// Bounded: m / m_max; penalties: ln(1 + m); pass-through: m. Answer
// consistency entries follow hp.ac_diff. Values outside the metric's domain
// throw ValidationError.
DeviationVector Normalize(const GranularMetricVector& v, const HyperParams& hp = {},
                          const MetricTaxonomy& taxonomy = MetricTaxonomy::Canonical());

double L2Norm(std::span<const double> xs);
double DimensionalMagnitude(const DeviationVector& dev);

// S * exp(-K * magnitude). Throws ValidationError for a negative magnitude
// or non-positive K, S.
double DecayScore(double magnitude, double k, double s);

// S such that a model at the median magnitude scores `target_score`.
double Calibrate(double median_magnitude, double k, double target_score);

double Median(std::vector<double> xs);

// True when L2(sub_norms) equals L2(entries) within tol.
bool NestedNormCheck(std::span<const double> sub_norms, std::span<const double> entries,
                     double tol = 1e-9);

struct DimensionScore {
  Dimension dimension = Dimension::kIfsGen;
  double magnitude = 0.0;
  double score = 0.0;

  friend bool operator==(const DimensionScore&, const DimensionScore&) = default;
};

DimensionScore ScoreDimension(Dimension d, double magnitude, const HyperParams& hp);

struct OverallScore {
  double d_tot = 0.0;
  double score = 0.0;
};

// L2 of every entry of all six deviation vectors. Throws ComputationError
// when a dimension is missing or repeated.
double TotalDeviation(std::span<const DeviationVector> deviations);
OverallScore OverallIris(std::span<const DeviationVector> deviations, double k_tot,
                         double s_tot);

// Everything known about one model before scoring.
struct ModelInput {
  std::string model_id;
  std::map<Dimension, GranularMetricVector> granular;
  // Used for dimensions without granular data.
  std::map<Dimension, double> magnitudes;

  friend bool operator==(const ModelInput&, const ModelInput&) = default;
};

struct IrisResult {
  std::string model_id;
  std::map<Dimension, DimensionScore> dimensions;
  std::map<Dimension, DeviationVector> deviations;
  std::optional<double> d_tot;
  std::optional<double> score;
  std::optional<MbtiCode> gen_mbti;
  std::optional<MbtiCode> und_mbti;

  bool HasTask(Task t) const;

  friend bool operator==(const IrisResult&, const IrisResult&) = default;
};

struct CohortResult {
  std::vector<IrisResult> models;  // input order
  std::optional<double> s_tot;     // configured or calibrated
};

// Scores every available dimension. D_tot and the overall score need all
// six dimensions; with every dimension granular and complete D_tot is the
// L2 over all entries, otherwise it is the L2 of the six magnitudes. An
// "auto" S_tot is calibrated on the median D_tot of the cohort.
CohortResult ScoreCohort(const std::vector<ModelInput>& inputs, const HyperParams& hp);

}  // namespace iris
