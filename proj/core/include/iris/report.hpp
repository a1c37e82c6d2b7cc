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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iris/config.hpp"
#include "iris/diagnosis.hpp"
#include "iris/scoring.hpp"
#include "iris/stats.hpp"

namespace iris {

inline constexpr int kRunFormatVersion = 1;

struct RunArchive {
  std::string run_id;
  std::string timestamp;         // ISO-8601 UTC; the only wall-clock field
  HyperParams config;            // S_tot resolved when the cohort allowed it
  std::vector<ModelInput> inputs;
  std::vector<IrisResult> results;
  std::optional<SensitivityReport> sensitivity;
};

// Scores the cohort and snapshots the config with S_tot resolved.
RunArchive BuildArchive(std::string run_id, std::vector<ModelInput> inputs,
                        const HyperParams& hp);

// Recomputes every result from the stored inputs and config snapshot.
CohortResult ReplayRun(const RunArchive& archive);

std::string UtcTimestamp();

// Writes <dir> atomically: files go to a sibling temporary directory that is
// renamed into place. An existing <dir> is replaced only with `overwrite`.
// Failures throw ValidationError and leave no partial directory behind.
void SaveRun(const RunArchive& archive, const std::filesystem::path& dir, bool overwrite = false);
RunArchive LoadRun(const std::filesystem::path& dir);

// Individual run files, exposed for the CLI and tests.
std::string GranularCsv(const std::vector<ModelInput>& inputs);
std::string MagnitudesCsv(const std::vector<ModelInput>& inputs);
std::string DeviationsCsv(const std::vector<IrisResult>& results);
std::string ScoresCsv(const std::vector<IrisResult>& results);
std::string SensitivityCsv(const SensitivityReport& report);

// Parses granular.csv (and optionally magnitudes.csv) back into inputs.
std::vector<ModelInput> ParseModelInputs(std::string_view granular_csv,
                                         std::string_view magnitudes_csv,
                                         const std::string& granular_source,
                                         const std::string& magnitudes_source);
// model_id,dimension,magnitude rows.
std::vector<ModelInput> LoadMagnitudes(const std::filesystem::path& path);

// One leaderboard line; any cell may be absent.
struct ScoreRow {
  std::string model_id;
  std::array<std::optional<double>, kDimensionCount> scores{};
  std::optional<double> iris;
  std::optional<MbtiCode> gen_mbti;
  std::optional<MbtiCode> und_mbti;
};

std::vector<ScoreRow> ScoreRowsFrom(const std::vector<IrisResult>& results);

// Reads scores.csv (model_id,sector,magnitude,score,detail). Magnitudes may
// be blank.
std::vector<ScoreRow> ReadScoreRows(const std::filesystem::path& path);
std::vector<ScoreRow> ParseScoreRows(std::string_view text, const std::string& source);

// Fills absent MBTI codes for tasks with all three scores.
void FillMbti(std::vector<ScoreRow>& rows, double tau);

struct Leaderboard {
  std::string markdown;
  std::string csv;
};

// Sorted by IRIS score (descending, absent last) then model id. Per score
// column the best value is marked with a dagger and the worst with a double
// dagger when at least two models have a value.
Leaderboard RenderLeaderboard(std::vector<ScoreRow> rows);

// model_id,dimension,metric,u rows for every stored deviation entry.
std::string ExportFairnessSpace(const std::vector<IrisResult>& results);
std::map<std::string, std::vector<DeviationVector>> ImportFairnessSpace(std::string_view csv,
                                                                        const std::string& source);

}  // namespace iris
