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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iris/demographics.hpp"
#include "iris/occupations.hpp"
#include "iris/probability.hpp"
#include "iris/records.hpp"

namespace iris {

// Synonyms for registry occupations. Keys are normalized the same way as
// answers (lowercase, punctuation stripped, words joined by '_').
class AliasTable {
 public:
  AliasTable() = default;

  // Two-column CSV with header "alias,canonical". Unknown canonical names are
  // a ValidationError citing the line.
  static AliasTable FromFile(const std::filesystem::path& path,
                             const OccupationRegistry& registry =
                                 OccupationRegistry::Builtin());
  static AliasTable FromMap(const std::map<std::string, std::vector<std::string>>& by_occupation,
                            const OccupationRegistry& registry =
                                OccupationRegistry::Builtin());

  // First registration of an alias wins; later conflicting ones are ignored
  // with a warning.
  void Add(std::string_view alias, const Occupation& occupation);
  std::optional<Occupation> Find(std::string_view normalized_alias) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Occupation> entries_;
};

// Lowercases, removes punctuation and joins words with '_'.
std::string NormalizeAnswer(std::string_view raw);

// Direct match against the registry, then against aliases. nullopt means
// UNMAPPABLE.
std::optional<Occupation> MapAnswerTier1(std::string_view raw_answer, const AliasTable& aliases,
                                         const OccupationRegistry& registry =
                                             OccupationRegistry::Builtin());

// Semantic fallback for answers Tier 1 cannot place (embedding similarity
// with a confidence threshold). Not provided by this library.
using AnswerFallback = std::function<std::optional<Occupation>(std::string_view)>;

struct ParseOptions {
  const OccupationRegistry* registry = &OccupationRegistry::Builtin();
  // Used when an understanding record leaves predicted_mapped empty.
  const AliasTable* aliases = nullptr;
  AnswerFallback fallback;
};

enum class RecordFormat { kCsv, kJsonLines };
// ".jsonl"/".ndjson"/".json" are JSON lines; everything else is CSV.
RecordFormat DetectFormat(const std::filesystem::path& path);

// CSV header: model_id,occupation,prompt_kind,exp_gender,exp_age,exp_skin,
//             obs_gender,obs_age,obs_skin,qps,fqp,sil,scl
// JSON lines use the same field names. Age cells accept a band or integer
// years; skin cells accept a band or an MST value 1..10.
std::vector<GenerationRecord> ParseGenerationRecords(const std::filesystem::path& path,
                                                     const ParseOptions& options = {});
std::vector<GenerationRecord> ParseGenerationRecords(std::string_view text,
                                                     const std::string& source,
                                                     RecordFormat format,
                                                     const ParseOptions& options = {});

// CSV header: model_id,true_occupation,predicted_raw,predicted_mapped,gender,
//             age,skin,pair_id,variant,subj_q1..subj_q9,obj_a..obj_h
std::vector<UnderstandingRecord> ParseUnderstandingRecords(const std::filesystem::path& path,
                                                           const ParseOptions& options = {});
std::vector<UnderstandingRecord> ParseUnderstandingRecords(std::string_view text,
                                                           const std::string& source,
                                                           RecordFormat format,
                                                           const ParseOptions& options = {});

void WriteGenerationRecordsCsv(std::ostream& out, const std::vector<GenerationRecord>& records);
void WriteUnderstandingRecordsCsv(std::ostream& out,
                                  const std::vector<UnderstandingRecord>& records);

// Win counts of one model's forced-choice tournament for one profile.
struct TournamentTally {
  std::string model_id;
  AttributeProfile profile;
  std::map<std::string, std::uint64_t> win_counts;  // occupation -> wins
  std::uint64_t refusals = 0;
};

// CSV header: model_id,gender,age,skin,occupation,wins. The occupation token
// "refused" accumulates refusals and off-list answers. Tallies come back in
// first-appearance order of (model_id, profile).
std::vector<TournamentTally> ParseTournament(const std::filesystem::path& path,
                                             const OccupationRegistry& registry =
                                                 OccupationRegistry::Builtin());
std::vector<TournamentTally> ParseTournament(std::string_view text, const std::string& source,
                                             const OccupationRegistry& registry =
                                                 OccupationRegistry::Builtin());

// Observed-profile frequencies of one occupation's records over the
// selector's cells, in DeriveGroups order. Throws ComputationError when no
// record has that occupation.
ProbabilityVector EmpiricalDistribution(const std::vector<GenerationRecord>& records,
                                        const Occupation& occupation,
                                        const GroupSelector& selector);

}  // namespace iris
