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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iris/demographics.hpp"
#include "iris/ground_truth.hpp"
#include "iris/ingest.hpp"
#include "iris/probability.hpp"
#include "iris/records.hpp"

namespace iris {

// ---------------------------------------------------------------------------
// Ideal fairness

// Mean pairwise absolute gap between subgroup proportions, scaled by
// 1/(k-1) so that a point mass scores 1 and a uniform vector 0.
// Throws ValidationError for k < 2.
double RepresentationDisparity(std::span<const double> proportions);
double RepresentationDisparity(const ProbabilityVector& p);

// Per-cell outcome of an understanding task.
struct GroupOutcome {
  std::string cell;
  std::size_t sample_count = 0;
  double accuracy = 0.0;
  // Predicted class -> P(prediction = class | cell). Includes UNMAPPABLE.
  std::map<std::string, double> prediction_rates;
};

// Accuracy and prediction rates per cell of `selector`, in DeriveGroups
// order. UNMAPPABLE predictions count as incorrect and form their own class.
// Paired (counterfactual) records are ignored.
std::vector<GroupOutcome> BuildGroupOutcomes(const std::vector<UnderstandingRecord>& records,
                                             const GroupSelector& selector);

// Groups with fewer than n_min samples (and empty groups) are excluded with a
// warning. Both throw ComputationError when fewer than two groups remain.
double AccuracyDisparity(std::span<const GroupOutcome> groups, std::size_t n_min = 1);
double StatisticalParityDifference(std::span<const GroupOutcome> groups, std::size_t n_min = 1);

// ---------------------------------------------------------------------------
// Real-world fidelity

enum class LogBase { kTwo, kNatural };

// kDivergence returns the Jensen-Shannon divergence, i.e. the square of the
// JS distance. kDivergenceSquared squares the divergence itself.
enum class JsdReading { kDivergence, kDivergenceSquared };

struct JsdOptions {
  LogBase base = LogBase::kTwo;
  JsdReading reading = JsdReading::kDivergence;
  friend bool operator==(const JsdOptions&, const JsdOptions&) = default;
};

// Vectors are aligned by label first; zero entries use 0*log(0) = 0.
// Throws ValidationError when the label sets differ.
double JsDivergenceSquared(const ProbabilityVector& p, const ProbabilityVector& q,
                           const JsdOptions& options = {});

struct ErrorCase {
  std::string true_occupation;
  std::string predicted_occupation;
};

// Mean of P_real(cell | predicted) - P_real(cell | true) over the error
// cases, for a single-axis cell. Signed; scoring uses the absolute value.
// An empty error list gives 0 with a warning. Occupations missing from the
// table and axes the region lacks throw ComputationError.
double StereotypeDrift(std::span<const ErrorCase> errors, Axis axis, std::size_t category,
                       const GroundTruthTable& ground_truth);

// Misclassified, mappable, unpaired understanding records of one model.
std::vector<ErrorCase> CollectErrorCases(const std::vector<UnderstandingRecord>& records);

// ---------------------------------------------------------------------------
// Bias inertia and steerability

// Share of `kind` records whose observed profile realises every attribute
// the prompt specified. Throws ComputationError when no record qualifies.
double GenerationSuccessRate(std::span<const GenerationRecord> records, PromptKind kind);

// max(0, stereo - counter).
double DeltaGsr(double gsr_stereo, double gsr_counter);

struct Degradation {
  double penalty = 0.0;   // max(0, mean(stereo) - mean(counter))
  bool improved = false;  // mean(counter) >= mean(stereo)
};
// Throws ValidationError when either list is empty.
Degradation DegradationPenalty(std::span<const double> stereo_scores,
                               std::span<const double> counter_scores);

struct PairVariant {
  Variant variant = Variant::kStereotypical;
  AttributeProfile profile;
  std::map<std::string, double> subjective;
  std::map<std::string, bool> objective;
};

// Records sharing a pair id; the variants differ only on the axes in
// `varied`.
struct CounterfactualPair {
  std::string model_id;
  std::string pair_id;
  GroupSelector varied = GroupSelector::Single(Axis::kGender);
  std::vector<PairVariant> variants;
};

// Groups paired records by (model_id, pair_id) in first-appearance order.
// Pairs with fewer than two records, or whose records share one profile, are
// skipped with a warning.
std::vector<CounterfactualPair> BuildCounterfactualPairs(
    const std::vector<UnderstandingRecord>& records);

// Mean over pairs of the per-question mean pairwise |score difference|.
// Questions answered by fewer than two variants are skipped; pairs left with
// no question are skipped with a warning; if every pair is skipped the call
// throws ComputationError.
double AnswerConsistencyDifference(std::span<const CounterfactualPair> pairs);

// 1 - mean agreement of objective correctness across variant pairs, with
// the same skipping rules.
double DhrInconsistency(std::span<const CounterfactualPair> pairs);

// ---------------------------------------------------------------------------
// Tournament probing

// Normalized win counts; refusals are excluded. With `support`, the result
// covers exactly those labels (missing ones get 0). Throws ComputationError
// for an all-zero tally.
ProbabilityVector AggregateTournament(const TournamentTally& tally);
ProbabilityVector AggregateTournament(const TournamentTally& tally,
                                      const std::vector<std::string>& support);

// condition label -> distribution over outcomes.
using ConditionalTable = std::map<std::string, ProbabilityVector>;

struct BayesInversion {
  // outcome label -> distribution over conditions (labels in prior order).
  ConditionalTable posterior;
  // P(outcome) = sum_c P(outcome | c) P(c).
  ProbabilityVector evidence;
};

// P(c | o) = P(o | c) P(c) / P(o). Every prior label needs a likelihood row
// and all rows must share one outcome support. Outcomes with zero evidence
// are left out of the posterior with a warning.
BayesInversion BayesInvert(const ConditionalTable& likelihood, const ProbabilityVector& prior);

}  // namespace iris
