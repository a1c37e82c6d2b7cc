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

#include <benchmark/benchmark.h>

#include "iris/extract.hpp"
#include "iris/ground_truth.hpp"
#include "iris/ingest.hpp"
#include "iris/log.hpp"
#include "test_util.hpp"

namespace iris {
namespace {

struct Fixture {
  GroundTruthTable us;
  GroundTruthTable eu;
  EvaluationInputs inputs;

  Fixture()
      : us(LoadGroundTruth(testing::DataFile("ground_truth_us.csv"), Region::kUS)),
        eu(LoadGroundTruth(testing::DataFile("ground_truth_eu.csv"), Region::kEU)) {
    inputs.generation = ParseGenerationRecords(testing::Fixture("synthetic/generation.csv"));
    inputs.understanding =
        ParseUnderstandingRecords(testing::Fixture("synthetic/understanding.csv"));
    inputs.tournament = ParseTournament(testing::Fixture("synthetic/tournament.csv"));
    inputs.us = &us;
    inputs.eu = &eu;
  }
};

void BM_ParseGeneration(benchmark::State& state) {
  const auto path = testing::Fixture("synthetic/generation.csv");
  for (auto _ : state) benchmark::DoNotOptimize(ParseGenerationRecords(path));
}
BENCHMARK(BM_ParseGeneration);

void BM_ExtractGranular(benchmark::State& state) {
  ScopedWarningCapture quiet;
  const Fixture f;
  const HyperParams hp;
  for (auto _ : state) benchmark::DoNotOptimize(ExtractGranular(f.inputs, hp));
}
BENCHMARK(BM_ExtractGranular)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace iris
