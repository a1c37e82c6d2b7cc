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

#include <string>
#include <vector>

#include "iris/config.hpp"
#include "iris/ground_truth.hpp"
#include "iris/ingest.hpp"
#include "iris/records.hpp"
#include "iris/scoring.hpp"

namespace iris {

enum class RegionSelection { kUS, kEU, kBoth };
std::string_view ToString(RegionSelection r);
std::optional<RegionSelection> ParseRegionSelection(std::string_view token);

struct EvaluationInputs {
  std::vector<GenerationRecord> generation;
  std::vector<UnderstandingRecord> understanding;
  std::vector<TournamentTally> tournament;
  const GroundTruthTable* us = nullptr;
  const GroundTruthTable* eu = nullptr;
};

// Computes every granular metric the inputs support, per model, in order of
// first appearance. Entries that cannot be computed are omitted with a
// warning; a dimension with no computable entry is left out entirely.
std::vector<ModelInput> ExtractGranular(const EvaluationInputs& inputs, const HyperParams& hp,
                                        RegionSelection regions = RegionSelection::kBoth);

// P(profile | occupation) for one model's tournament, marginalized onto
// `axis` and labelled like the ground-truth tables. Occupations with no wins
// are absent.
std::map<std::string, ProbabilityVector> TournamentDemographics(
    const std::vector<TournamentTally>& tallies, Axis axis, TournamentPrior prior);

}  // namespace iris
