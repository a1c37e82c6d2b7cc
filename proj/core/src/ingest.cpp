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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iris/csv.hpp"
#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {

// ---------------------------------------------------------------------------
// Enum tokens

std::string_view ToString(PromptKind kind) {
  switch (kind) {
    case PromptKind::kNeutral: return "neutral";
    case PromptKind::kStereotypical: return "stereotypical";
    case PromptKind::kCounterStereotypical: return "counter_stereotypical";
  }
  return "?";
}

std::optional<PromptKind> ParsePromptKind(std::string_view token) {
  const std::string t = NormalizeOccupationName(token);
  if (t == "neutral") return PromptKind::kNeutral;
  if (t == "stereotypical" || t == "stereo") return PromptKind::kStereotypical;
  if (t == "counter_stereotypical" || t == "counter") return PromptKind::kCounterStereotypical;
  return std::nullopt;
}

std::string_view ToString(Variant v) {
  return v == Variant::kStereotypical ? "stereotypical" : "counter_stereotypical";
}

std::optional<Variant> ParseVariant(std::string_view token) {
  const std::string t = NormalizeOccupationName(token);
  if (t == "stereotypical" || t == "stereo") return Variant::kStereotypical;
  if (t == "counter_stereotypical" || t == "counter") return Variant::kCounterStereotypical;
  return std::nullopt;
}

std::string_view ToString(QualityKey key) {
  switch (key) {
    case QualityKey::kQps: return "qps";
    case QualityKey::kFqp: return "fqp";
    case QualityKey::kSil: return "sil";
    case QualityKey::kScl: return "scl";
  }
  return "?";
}

bool QualityScores::empty() const {
  return std::none_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

bool ExpectedAttributes::Matches(const AttributeProfile& observed) const {
  if (gender && *gender != observed.gender) return false;
  if (age && *age != observed.age) return false;
  if (skin && *skin != observed.skin) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Aliases and Tier-1 answer mapping

std::string NormalizeAnswer(std::string_view raw) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || std::isspace(u) || c == '_' || c == '-') {
      cleaned += c;
    } else if (u >= 0x80) {
      cleaned += c;  // keep UTF-8 bytes intact
    }
  }
  return NormalizeOccupationName(cleaned);
}

void AliasTable::Add(std::string_view alias, const Occupation& occupation) {
  std::string key = NormalizeAnswer(alias);
  if (key.empty()) return;
  auto [it, inserted] = entries_.emplace(key, occupation);
  if (!inserted && it->second != occupation) {
    Warn("alias '" + key + "' already maps to '" + it->second.name() + "'; ignoring '" +
         occupation.name() + "'");
  }
}

std::optional<Occupation> AliasTable::Find(std::string_view normalized_alias) const {
  auto it = entries_.find(std::string(normalized_alias));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

AliasTable AliasTable::FromFile(const std::filesystem::path& path,
                                const OccupationRegistry& registry) {
  const csv::Table table = csv::Table::FromFile(path);
  const std::size_t alias_col = table.RequireColumn("alias");
  const std::size_t canon_col = table.RequireColumn("canonical");
  AliasTable out;
  for (const auto& row : table.rows()) {
    const std::string canonical = csv::Trim(row.fields[canon_col]);
    auto occ = registry.Find(canonical);
    if (!occ) {
      throw ValidationError(table.source(), row.line,
                            "alias target '" + canonical + "' is not a registered occupation");
    }
    out.Add(row.fields[alias_col], *occ);
  }
  return out;
}

AliasTable AliasTable::FromMap(const std::map<std::string, std::vector<std::string>>& by_occupation,
                               const OccupationRegistry& registry) {
  AliasTable out;
  for (const auto& [name, aliases] : by_occupation) {
    const Occupation occ = registry.Get(name);
    for (const auto& a : aliases) out.Add(a, occ);
  }
  return out;
}

std::optional<Occupation> MapAnswerTier1(std::string_view raw_answer, const AliasTable& aliases,
                                         const OccupationRegistry& registry) {
  const std::string key = NormalizeAnswer(raw_answer);
  if (key.empty()) return std::nullopt;
  if (auto direct = registry.Find(key)) return direct;
  return aliases.Find(key);
}

// ---------------------------------------------------------------------------
// Row access shared by the CSV and JSON-lines readers

namespace {

struct FieldRow {
  const std::string* source;
  std::size_t line;
  std::map<std::string, std::string> fields;

  // Empty string for absent fields.
  std::string Get(const std::string& name) const {
    auto it = fields.find(name);
    return it == fields.end() ? std::string() : csv::Trim(it->second);
  }
  [[noreturn]] void Fail(const std::string& message) const {
    throw ValidationError(*source, line, message);
  }
  std::string Require(const std::string& name) const {
    std::string v = Get(name);
    if (v.empty()) Fail("missing value for '" + name + "'");
    return v;
  }
};

std::vector<FieldRow> ReadRows(std::string_view text, const std::string& source,
                               RecordFormat format,
                               const std::vector<std::string>& required_columns) {
  std::vector<FieldRow> rows;
  if (format == RecordFormat::kCsv) {
    const csv::Table table(csv::Parse(text, source), source);
    for (const auto& col : required_columns) table.RequireColumn(col);
    for (const auto& r : table.rows()) {
      FieldRow fr{&source, r.line, {}};
      for (std::size_t i = 0; i < table.header().size(); ++i) {
        fr.fields.emplace(table.header()[i], r.fields[i]);
      }
      rows.push_back(std::move(fr));
    }
    return rows;
  }
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string line = csv::Trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ValidationError(source, line_no, "JSON line is not an object");
    FieldRow fr{&source, line_no, {}};
    for (const auto& [key, value] : obj.items()) {
      if (value.is_null()) continue;
      if (value.is_string()) {
        fr.fields.emplace(key, value.get<std::string>());
      } else if (value.is_boolean()) {
        fr.fields.emplace(key, value.get<bool>() ? "true" : "false");
      } else if (value.is_number_integer()) {
        fr.fields.emplace(key, std::to_string(value.get<long long>()));
      } else if (value.is_number()) {
        fr.fields.emplace(key, csv::FormatDouble(value.get<double>()));
      } else {
        throw ValidationError(source, line_no, "field '" + key + "' must be a scalar");
      }
    }
    rows.push_back(std::move(fr));
    if (end == text.size()) break;
  }
  return rows;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Occupation RequireOccupation(const FieldRow& row, const std::string& column,
                             const OccupationRegistry& registry) {
  const std::string name = row.Require(column);
  if (auto occ = registry.Find(name)) return *occ;
  row.Fail("unknown occupation '" + name + "' in '" + column + "' (nearest registry name: '" +
           registry.Nearest(name) + "')");
}

std::optional<Gender> OptionalGender(const FieldRow& row, const std::string& column) {
  const std::string v = row.Get(column);
  if (v.empty()) return std::nullopt;
  if (auto g = ParseGender(v)) return g;
  row.Fail("invalid gender '" + v + "' in '" + column + "' (expected male or female)");
}

std::optional<AgeBand> OptionalAge(const FieldRow& row, const std::string& column) {
  const std::string v = row.Get(column);
  if (v.empty()) return std::nullopt;
  if (auto a = ParseAgeBand(v)) return a;
  if (auto years = csv::ParseInt(v)) {
    if (*years < 0) row.Fail("negative age " + v + " in '" + column + "'");
    return AgeToBand(static_cast<unsigned>(*years));
  }
  row.Fail("invalid age '" + v + "' in '" + column +
           "' (expected young, middle_aged, older or integer years)");
}

std::optional<SkinBand> OptionalSkin(const FieldRow& row, const std::string& column) {
  const std::string v = row.Get(column);
  if (v.empty()) return std::nullopt;
  if (auto s = ParseSkinBand(v)) return s;
  if (auto mst = csv::ParseInt(v)) {
    try {
      return MstToBand(static_cast<int>(*mst));
    } catch (const ValidationError& e) {
      row.Fail(e.constraint() + " in '" + column + "'");
    }
  }
  row.Fail("invalid skin tone '" + v + "' in '" + column +
           "' (expected light, middle, dark or MST 1..10)");
}

AttributeProfile RequireProfile(const FieldRow& row, const std::string& g,
                                const std::string& a, const std::string& s) {
  auto gender = OptionalGender(row, g);
  auto age = OptionalAge(row, a);
  auto skin = OptionalSkin(row, s);
  if (!gender) row.Fail("missing value for '" + g + "'");
  if (!age) row.Fail("missing value for '" + a + "'");
  if (!skin) row.Fail("missing value for '" + s + "'");
  return AttributeProfile{*gender, *age, *skin};
}

std::optional<double> OptionalNumber(const FieldRow& row, const std::string& column) {
  const std::string v = row.Get(column);
  if (v.empty()) return std::nullopt;
  if (auto d = csv::ParseDouble(v)) return d;
  row.Fail("malformed number '" + v + "' in '" + column + "'");
}

std::optional<bool> OptionalBool(const FieldRow& row, const std::string& column) {
  std::string v = row.Get(column);
  if (v.empty()) return std::nullopt;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  row.Fail("invalid boolean '" + v + "' in '" + column + "' (expected 1/0/true/false)");
}

const std::vector<std::string>& GenerationColumns() {
  static const std::vector<std::string> cols = {
      "model_id", "occupation", "prompt_kind", "exp_gender", "exp_age", "exp_skin",
      "obs_gender", "obs_age", "obs_skin", "qps", "fqp", "sil", "scl"};
  return cols;
}

const std::vector<std::string>& UnderstandingColumns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"model_id", "true_occupation", "predicted_raw",
                                  "predicted_mapped", "gender", "age", "skin", "pair_id",
                                  "variant"};
    for (auto q : kSubjectiveQuestions) c.push_back("subj_" + std::string(q));
    for (auto q : kObjectiveQuestions) c.push_back("obj_" + std::string(q));
    return c;
  }();
  return cols;
}

GenerationRecord ToGenerationRecord(const FieldRow& row, const ParseOptions& options) {
  const std::string model_id = row.Require("model_id");
  Occupation occupation = RequireOccupation(row, "occupation", *options.registry);
  const std::string kind_token = row.Require("prompt_kind");
  auto kind = ParsePromptKind(kind_token);
  if (!kind) {
    row.Fail("invalid prompt_kind '" + kind_token +
             "' (expected neutral, stereotypical or counter_stereotypical)");
  }
  ExpectedAttributes expected{OptionalGender(row, "exp_gender"), OptionalAge(row, "exp_age"),
                              OptionalSkin(row, "exp_skin")};
  if (*kind == PromptKind::kNeutral && !expected.empty()) {
    row.Fail("neutral prompt must not carry expected attributes");
  }
  if (*kind != PromptKind::kNeutral && expected.empty()) {
    row.Fail("expected attributes missing for " + std::string(ToString(*kind)) + " prompt");
  }
  GenerationRecord rec{model_id,
                       std::move(occupation),
                       *kind,
                       expected.empty() ? std::nullopt : std::optional(expected),
                       RequireProfile(row, "obs_gender", "obs_age", "obs_skin"),
                       {}};
  for (QualityKey k : kQualityKeys) {
    if (auto v = OptionalNumber(row, std::string(ToString(k)))) rec.quality.Set(k, *v);
  }
  return rec;
}

UnderstandingRecord ToUnderstandingRecord(const FieldRow& row, const ParseOptions& options) {
  const OccupationRegistry& registry = *options.registry;
  const std::string model_id = row.Require("model_id");
  Occupation truth = RequireOccupation(row, "true_occupation", registry);
  const std::string raw = row.Get("predicted_raw");
  const std::string mapped_token = row.Get("predicted_mapped");

  std::optional<Occupation> mapped;
  if (!mapped_token.empty()) {
    std::string upper = mapped_token;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper != kUnmappable) mapped = RequireOccupation(row, "predicted_mapped", registry);
  } else {
    static const AliasTable kNoAliases;
    mapped = MapAnswerTier1(raw, options.aliases ? *options.aliases : kNoAliases, registry);
    if (!mapped && options.fallback && !raw.empty()) mapped = options.fallback(raw);
  }

  UnderstandingRecord rec{model_id, std::move(truth), raw, std::move(mapped),
                          RequireProfile(row, "gender", "age", "skin"),
                          std::nullopt, std::nullopt, {}, {}};

  const std::string pair_id = row.Get("pair_id");
  const std::string variant = row.Get("variant");
  for (auto q : kSubjectiveQuestions) {
    const std::string col = "subj_" + std::string(q);
    if (auto v = OptionalNumber(row, col)) {
      if (*v < 1.0 || *v > 10.0) {
        row.Fail("subjective score " + row.Get(col) + " in '" + col + "' is outside [1, 10]");
      }
      rec.subjective.emplace(std::string(q), *v);
    }
  }
  for (auto q : kObjectiveQuestions) {
    const std::string col = "obj_" + std::string(q);
    if (auto v = OptionalBool(row, col)) rec.objective.emplace(std::string(q), *v);
  }
  const bool has_answers = !rec.subjective.empty() || !rec.objective.empty();

  if (pair_id.empty() != variant.empty()) {
    row.Fail(pair_id.empty() ? "variant given without pair_id"
                             : "pair_id '" + pair_id + "' given without variant");
  }
  if (pair_id.empty()) {
    if (has_answers) row.Fail("question answers present on a record without pair_id");
    return rec;
  }
  auto v = ParseVariant(variant);
  if (!v) {
    row.Fail("invalid variant '" + variant +
             "' (expected stereotypical or counter_stereotypical)");
  }
  if (!has_answers) row.Fail("paired record '" + pair_id + "' has no question answers");
  rec.pair_id = pair_id;
  rec.variant = *v;
  return rec;
}

}  // namespace

RecordFormat DetectFormat(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return RecordFormat::kJsonLines;
  return RecordFormat::kCsv;
}

std::vector<GenerationRecord> ParseGenerationRecords(std::string_view text,
                                                     const std::string& source,
                                                     RecordFormat format,
                                                     const ParseOptions& options) {
  const std::vector<std::string> required = {"model_id", "occupation", "prompt_kind",
                                             "obs_gender", "obs_age", "obs_skin"};
  std::vector<GenerationRecord> out;
  for (const auto& row : ReadRows(text, source, format, required)) {
    out.push_back(ToGenerationRecord(row, options));
  }
  return out;
}

std::vector<GenerationRecord> ParseGenerationRecords(const std::filesystem::path& path,
                                                     const ParseOptions& options) {
  return ParseGenerationRecords(ReadText(path), path.string(), DetectFormat(path), options);
}

std::vector<UnderstandingRecord> ParseUnderstandingRecords(std::string_view text,
                                                           const std::string& source,
                                                           RecordFormat format,
                                                           const ParseOptions& options) {
  const std::vector<std::string> required = {"model_id", "true_occupation", "gender", "age",
                                             "skin"};
  std::vector<UnderstandingRecord> out;
  for (const auto& row : ReadRows(text, source, format, required)) {
    out.push_back(ToUnderstandingRecord(row, options));
  }
  return out;
}

std::vector<UnderstandingRecord> ParseUnderstandingRecords(const std::filesystem::path& path,
                                                           const ParseOptions& options) {
  return ParseUnderstandingRecords(ReadText(path), path.string(), DetectFormat(path), options);
}

// ---------------------------------------------------------------------------
// Writers

namespace {

template <typename T>
std::string OptToken(const std::optional<T>& v) {
  return v ? std::string(ToString(*v)) : std::string();
}

std::string OptNumber(const std::optional<double>& v) {
  return v ? csv::FormatDouble(*v) : std::string();
}

}  // namespace

void WriteGenerationRecordsCsv(std::ostream& out, const std::vector<GenerationRecord>& records) {
  csv::WriteRow(out, GenerationColumns());
  for (const auto& r : records) {
    const ExpectedAttributes e = r.expected.value_or(ExpectedAttributes{});
    std::vector<std::string> f = {r.model_id,
                                  r.occupation.name(),
                                  std::string(ToString(r.prompt_kind)),
                                  OptToken(e.gender),
                                  OptToken(e.age),
                                  OptToken(e.skin),
                                  std::string(ToString(r.observed.gender)),
                                  std::string(ToString(r.observed.age)),
                                  std::string(ToString(r.observed.skin))};
    for (QualityKey k : kQualityKeys) f.push_back(OptNumber(r.quality.Get(k)));
    csv::WriteRow(out, f);
  }
}

void WriteUnderstandingRecordsCsv(std::ostream& out,
                                  const std::vector<UnderstandingRecord>& records) {
  csv::WriteRow(out, UnderstandingColumns());
  for (const auto& r : records) {
    std::vector<std::string> f = {
        r.model_id,
        r.true_occupation.name(),
        r.predicted_raw,
        r.predicted_mapped ? r.predicted_mapped->name() : std::string(kUnmappable),
        std::string(ToString(r.subject.gender)),
        std::string(ToString(r.subject.age)),
        std::string(ToString(r.subject.skin)),
        r.pair_id.value_or(""),
        OptToken(r.variant)};
    for (auto q : kSubjectiveQuestions) {
      auto it = r.subjective.find(std::string(q));
      f.push_back(it == r.subjective.end() ? std::string() : csv::FormatDouble(it->second));
    }
    for (auto q : kObjectiveQuestions) {
      auto it = r.objective.find(std::string(q));
      f.push_back(it == r.objective.end() ? std::string() : (it->second ? "1" : "0"));
    }
    csv::WriteRow(out, f);
  }
}

// ---------------------------------------------------------------------------
// Tournament tallies

std::vector<TournamentTally> ParseTournament(std::string_view text, const std::string& source,
                                             const OccupationRegistry& registry) {
  const csv::Table table(csv::Parse(text, source), source);
  for (const char* col : {"model_id", "gender", "age", "skin"}) table.RequireColumn(col);
  const std::size_t c_occ = table.RequireColumn("occupation");
  const std::size_t c_wins = table.RequireColumn("wins");

  std::vector<TournamentTally> out;
  std::map<std::pair<std::string, std::size_t>, std::size_t> slot;
  for (const auto& r : table.rows()) {
    FieldRow row{&table.source(), r.line, {}};
    for (std::size_t i = 0; i < table.header().size(); ++i) {
      row.fields.emplace(table.header()[i], r.fields[i]);
    }
    const std::string model = row.Require("model_id");
    const AttributeProfile profile = RequireProfile(row, "gender", "age", "skin");
    const std::string occ_token = csv::Trim(r.fields[c_occ]);
    const auto wins = csv::ParseInt(r.fields[c_wins]);
    if (!wins || *wins < 0) {
      row.Fail("wins must be a non-negative integer, got '" + csv::Trim(r.fields[c_wins]) + "'");
    }
    auto key = std::make_pair(model, profile.Index());
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      out.push_back(TournamentTally{model, profile, {}, 0});
    }
    TournamentTally& tally = out[it->second];
    if (NormalizeOccupationName(occ_token) == "refused") {
      tally.refusals += static_cast<std::uint64_t>(*wins);
    } else {
      const Occupation occ = RequireOccupation(row, "occupation", registry);
      tally.win_counts[occ.name()] += static_cast<std::uint64_t>(*wins);
    }
  }
  return out;
}

std::vector<TournamentTally> ParseTournament(const std::filesystem::path& path,
                                             const OccupationRegistry& registry) {
  return ParseTournament(ReadText(path), path.string(), registry);
}

// ---------------------------------------------------------------------------

ProbabilityVector EmpiricalDistribution(const std::vector<GenerationRecord>& records,
                                        const Occupation& occupation,
                                        const GroupSelector& selector) {
  std::vector<double> counts(selector.CellCount(), 0.0);
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.occupation != occupation) continue;
    counts[ProfileToCellIndex(r.observed, selector)] += 1.0;
    ++n;
  }
  if (n == 0) {
    throw ComputationError("no records for occupation '" + occupation.name() +
                           "' (empty group)");
  }
  std::vector<std::string> labels;
  for (auto& cell : DeriveGroups(selector)) labels.push_back(std::move(cell.label));
  return ProbabilityVector::FromWeights(std::move(labels), counts);
}

}  // namespace iris
