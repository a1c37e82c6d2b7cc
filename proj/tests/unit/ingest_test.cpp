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

#include "iris/ingest.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "iris/error.hpp"
#include "iris/log.hpp"
#include "test_util.hpp"

namespace iris {
namespace {

constexpr char kGenHeader[] =
    "model_id,occupation,prompt_kind,exp_gender,exp_age,exp_skin,obs_gender,obs_age,"
    "obs_skin,qps,fqp,sil,scl\n";

std::string UndHeader() {
  std::string h = "model_id,true_occupation,predicted_raw,predicted_mapped,gender,age,skin,"
                  "pair_id,variant";
  for (auto q : kSubjectiveQuestions) h += ",subj_" + std::string(q);
  for (auto q : kObjectiveQuestions) h += ",obj_" + std::string(q);
  return h + "\n";
}

// Understanding row with empty pair fields and empty question columns.
std::string UndRow(const std::string& prefix) { return prefix + std::string(17, ',') + "\n"; }

TEST(OccupationRegistryTest, BuiltinHasFiftyTwo) {
  const auto& reg = OccupationRegistry::Builtin();
  EXPECT_EQ(reg.size(), 52u);
  EXPECT_TRUE(reg.Find("doctor").has_value());
  EXPECT_TRUE(reg.Find("Doctor").has_value());
  EXPECT_FALSE(reg.Find("farmer_of_mars").has_value());
}

TEST(OccupationRegistryTest, BundledFileMatchesBuiltin) {
  auto file = OccupationRegistry::FromFile(testing::DataFile("occupations.txt"));
  EXPECT_EQ(file.names(), OccupationRegistry::Builtin().names());
}

TEST(OccupationRegistryTest, GetSuggestsNearest) {
  try {
    OccupationRegistry::Builtin().Get("astronot");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("astronaut"), std::string::npos);
  }
}

TEST(OccupationRegistryTest, DuplicatesRejected) {
  EXPECT_THROW(OccupationRegistry::FromNames({"a", "b", "A"}), ValidationError);
}

TEST(AnswerMappingTest, Tier1) {
  auto aliases = AliasTable::FromMap({{"doctor", {"physician"}}});
  EXPECT_EQ(MapAnswerTier1("Doctor.", aliases)->name(), "doctor");
  EXPECT_EQ(MapAnswerTier1("physician", aliases)->name(), "doctor");
  EXPECT_FALSE(MapAnswerTier1("astronaut pilot engineer", aliases).has_value());
  EXPECT_FALSE(MapAnswerTier1("   ", aliases).has_value());
}

TEST(AnswerMappingTest, NormalizeAnswer) {
  EXPECT_EQ(NormalizeAnswer("  Security   Guard! "), "security_guard");
  EXPECT_EQ(NormalizeAnswer("DOCTOR."), "doctor");
}

TEST(AnswerMappingTest, DefaultAliasFile) {
  auto aliases = AliasTable::FromFile(testing::DataFile("aliases_default.csv"));
  EXPECT_GT(aliases.size(), 0u);
  EXPECT_EQ(MapAnswerTier1("Medical doctor", aliases)->name(), "doctor");
}

TEST(AnswerMappingTest, AliasToUnknownOccupationCitesLine) {
  auto dir = testing::TempDir("alias");
  testing::WriteFile(dir / "a.csv", "alias,canonical\nmedic,doctor\nzz,not_a_job\n");
  try {
    AliasTable::FromFile(dir / "a.csv");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(GenerationRecordsTest, ParsesValidRows) {
  std::string text = std::string(kGenHeader) +
                     "m,doctor,neutral,,,,male,young,light,,,,\n"
                     "m,nurse,stereotypical,female,,,female,45,9,0.5,0.25,,\n"
                     "m,nurse,counter_stereotypical,male,,,female,older,2,,,0.9,0.8\n";
  auto recs = ParseGenerationRecords(text, "g.csv", RecordFormat::kCsv);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_FALSE(recs[0].expected.has_value());
  EXPECT_EQ(recs[1].observed.age, AgeBand::kMiddleAged);
  EXPECT_EQ(recs[1].observed.skin, SkinBand::kDark);
  EXPECT_EQ(recs[1].expected->gender, Gender::kFemale);
  EXPECT_EQ(recs[1].quality.Get(QualityKey::kFqp), 0.25);
  EXPECT_FALSE(recs[1].quality.Get(QualityKey::kSil).has_value());
  EXPECT_TRUE(recs[1].expected->Matches(recs[1].observed));
  EXPECT_FALSE(recs[2].expected->Matches(recs[2].observed));
}

TEST(GenerationRecordsTest, UnknownOccupationCitesLineAndSuggestion) {
  std::string text = std::string(kGenHeader) + "m,doctor,neutral,,,,male,young,light,,,,\n" +
                     "m,astronot,neutral,,,,male,young,light,,,,\n";
  try {
    ParseGenerationRecords(text, "g.csv", RecordFormat::kCsv);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("astronaut"), std::string::npos);
  }
}

TEST(GenerationRecordsTest, NonNeutralNeedsExpectedAttributes) {
  std::string text = std::string(kGenHeader) + "m,doctor,stereotypical,,,,male,young,light,,,,\n";
  EXPECT_THROW(ParseGenerationRecords(text, "g.csv", RecordFormat::kCsv), ValidationError);
}

TEST(GenerationRecordsTest, NeutralWithExpectedAttributesRejected) {
  std::string text = std::string(kGenHeader) + "m,doctor,neutral,male,,,male,young,light,,,,\n";
  EXPECT_THROW(ParseGenerationRecords(text, "g.csv", RecordFormat::kCsv), ValidationError);
}

TEST(GenerationRecordsTest, BadTokensRejected) {
  for (const char* row : {"m,doctor,neutral,,,,robot,young,light,,,,\n",
                          "m,doctor,neutral,,,,male,young,11,,,,\n",
                          "m,doctor,neutral,,,,male,young,light,abc,,,\n",
                          "m,doctor,sideways,,,,male,young,light,,,,\n"}) {
    EXPECT_THROW(ParseGenerationRecords(std::string(kGenHeader) + row, "g.csv",
                                        RecordFormat::kCsv),
                 ValidationError)
        << row;
  }
}

TEST(GenerationRecordsTest, JsonLinesMatchesCsv) {
  std::string csv_text = std::string(kGenHeader) +
                         "m,doctor,stereotypical,male,,,male,young,light,0.5,,,\n";
  std::string jsonl =
      R"({"model_id":"m","occupation":"doctor","prompt_kind":"stereotypical",)"
      R"("exp_gender":"male","obs_gender":"male","obs_age":"young","obs_skin":"light","qps":0.5})"
      "\n";
  EXPECT_EQ(ParseGenerationRecords(csv_text, "g.csv", RecordFormat::kCsv),
            ParseGenerationRecords(jsonl, "g.jsonl", RecordFormat::kJsonLines));
  EXPECT_THROW(ParseGenerationRecords("{not json}\n", "g.jsonl", RecordFormat::kJsonLines),
               ValidationError);
}

TEST(GenerationRecordsTest, ExportRoundTrip) {
  auto recs = ParseGenerationRecords(testing::Fixture("synthetic/generation.csv"));
  std::ostringstream out;
  WriteGenerationRecordsCsv(out, recs);
  EXPECT_EQ(ParseGenerationRecords(out.str(), "rt.csv", RecordFormat::kCsv), recs);
}

TEST(GenerationRecordsTest, DetectFormat) {
  EXPECT_EQ(DetectFormat("x.jsonl"), RecordFormat::kJsonLines);
  EXPECT_EQ(DetectFormat("x.csv"), RecordFormat::kCsv);
}

TEST(UnderstandingRecordsTest, PairedRowsAndMapping) {
  std::string h = UndHeader();
  std::string text = h +
                     UndRow("m,doctor,Physician,,male,young,light,,") +
                     UndRow("m,doctor,space cowboy,,female,young,light,,") +
                     "m,nurse,nurse,nurse,female,young,light,p1,stereotypical,"
                     "5,6,7,8,9,10,1,2,3,true,false,true,true,true,true,true,true\n"
                     "m,nurse,nurse,nurse,male,young,light,p1,counter_stereotypical,"
                     "5,6,7,8,9,10,1,2,4,true,true,true,true,true,true,true,true\n";
  auto aliases = AliasTable::FromMap({{"doctor", {"physician"}}});
  ParseOptions opts;
  opts.aliases = &aliases;
  auto recs = ParseUnderstandingRecords(text, "u.csv", RecordFormat::kCsv, opts);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_TRUE(recs[0].IsCorrect());
  EXPECT_FALSE(recs[1].predicted_mapped.has_value());
  EXPECT_FALSE(recs[1].IsPaired());
  EXPECT_TRUE(recs[2].IsPaired());
  EXPECT_EQ(*recs[2].pair_id, *recs[3].pair_id);
  EXPECT_EQ(recs[3].subjective.at("q9"), 4.0);
  EXPECT_FALSE(recs[2].objective.at("b"));
}

TEST(UnderstandingRecordsTest, FallbackHookUsedForUnmapped) {
  std::string text = UndHeader() + UndRow("m,doctor,healer,,male,young,light,,");
  ParseOptions opts;
  opts.fallback = [](std::string_view) {
    return OccupationRegistry::Builtin().Find("doctor");
  };
  auto recs = ParseUnderstandingRecords(text, "u.csv", RecordFormat::kCsv, opts);
  EXPECT_TRUE(recs[0].IsCorrect());
}

TEST(UnderstandingRecordsTest, SchemaErrors) {
  std::string h = UndHeader();
  std::string score11 = h + "m,nurse,nurse,nurse,female,young,light,p1,stereotypical,"
                            "11,,,,,,,,,,,,,,,,\n";
  EXPECT_THROW(ParseUnderstandingRecords(score11, "u.csv", RecordFormat::kCsv), ValidationError);
  std::string no_variant = h + UndRow("m,nurse,nurse,nurse,female,young,light,p1,");
  EXPECT_THROW(ParseUnderstandingRecords(no_variant, "u.csv", RecordFormat::kCsv),
               ValidationError);
  std::string scores_unpaired = h + "m,nurse,nurse,nurse,female,young,light,,,"
                                    "5,,,,,,,,,,,,,,,,\n";
  EXPECT_THROW(ParseUnderstandingRecords(scores_unpaired, "u.csv", RecordFormat::kCsv),
               ValidationError);
}

TEST(UnderstandingRecordsTest, ExportRoundTrip) {
  auto recs = ParseUnderstandingRecords(testing::Fixture("synthetic/understanding.csv"));
  std::ostringstream out;
  WriteUnderstandingRecordsCsv(out, recs);
  EXPECT_EQ(ParseUnderstandingRecords(out.str(), "rt.csv", RecordFormat::kCsv), recs);
}

TEST(UnderstandingRecordsTest, DeterministicParse) {
  auto a = ParseUnderstandingRecords(testing::Fixture("synthetic/understanding.csv"));
  auto b = ParseUnderstandingRecords(testing::Fixture("synthetic/understanding.csv"));
  EXPECT_EQ(a, b);
}

TEST(TournamentTest, TalliesAndRefusals) {
  std::string text =
      "model_id,gender,age,skin,occupation,wins\n"
      "m,male,young,light,doctor,3\n"
      "m,male,young,light,nurse,1\n"
      "m,male,young,light,refused,2\n"
      "m,female,young,light,nurse,4\n";
  auto tallies = ParseTournament(text, "t.csv");
  ASSERT_EQ(tallies.size(), 2u);
  EXPECT_EQ(tallies[0].win_counts.at("doctor"), 3u);
  EXPECT_EQ(tallies[0].refusals, 2u);
  EXPECT_EQ(tallies[1].profile.gender, Gender::kFemale);
  EXPECT_THROW(ParseTournament("model_id,gender,age,skin,occupation,wins\n"
                               "m,male,young,light,doctor,-1\n",
                               "t.csv"),
               ValidationError);
}

GenerationRecord Gen(Gender g, AgeBand a) {
  GenerationRecord r{"m", OccupationRegistry::Builtin().Get("doctor"), PromptKind::kNeutral,
                     std::nullopt, {}, {}};
  r.observed = {g, a, SkinBand::kLight};
  return r;
}

TEST(EmpiricalDistributionTest, Counts) {
  const auto doctor = OccupationRegistry::Builtin().Get("doctor");
  std::vector<GenerationRecord> recs;
  for (int i = 0; i < 6; ++i) recs.push_back(Gen(Gender::kMale, AgeBand::kYoung));
  for (int i = 0; i < 3; ++i) recs.push_back(Gen(Gender::kFemale, AgeBand::kMiddleAged));
  recs.push_back(Gen(Gender::kMale, AgeBand::kOlder));
  auto age = EmpiricalDistribution(recs, doctor, GroupSelector::Single(Axis::kAge));
  EXPECT_NEAR(age[0], 0.6, 1e-12);
  EXPECT_NEAR(age[1], 0.3, 1e-12);
  EXPECT_NEAR(age[2], 0.1, 1e-12);
  auto gender = EmpiricalDistribution(recs, doctor, GroupSelector::Single(Axis::kGender));
  EXPECT_NEAR(gender[0], 0.7, 1e-12);
  EXPECT_THROW(EmpiricalDistribution(recs, OccupationRegistry::Builtin().Get("nurse"),
                                     GroupSelector::Single(Axis::kAge)),
               ComputationError);
}

}  // namespace
}  // namespace iris
