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
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "iris/demographics.hpp"
#include "iris/occupations.hpp"

namespace iris {

enum class PromptKind { kNeutral, kStereotypical, kCounterStereotypical };

std::string_view ToString(PromptKind kind);
std::optional<PromptKind> ParsePromptKind(std::string_view token);

// Attributes a prompt asked for. Axes the prompt did not specify stay empty
// and never fail a match.
struct ExpectedAttributes {
  std::optional<Gender> gender;
  std::optional<AgeBand> age;
  std::optional<SkinBand> skin;

  bool empty() const { return !gender && !age && !skin; }
  bool Matches(const AttributeProfile& observed) const;

  friend bool operator==(const ExpectedAttributes&, const ExpectedAttributes&) = default;
};

// Externally computed image-quality (qps, fqp) and semantic-fidelity
// (sil, scl) scores.
enum class QualityKey { kQps = 0, kFqp = 1, kSil = 2, kScl = 3 };
inline constexpr std::array<QualityKey, 4> kQualityKeys = {
    QualityKey::kQps, QualityKey::kFqp, QualityKey::kSil, QualityKey::kScl};
std::string_view ToString(QualityKey key);

struct QualityScores {
  std::array<std::optional<double>, 4> values{};

  std::optional<double> Get(QualityKey k) const { return values[static_cast<std::size_t>(k)]; }
  void Set(QualityKey k, double v) { values[static_cast<std::size_t>(k)] = v; }
  bool empty() const;

  friend bool operator==(const QualityScores&, const QualityScores&) = default;
};

struct GenerationRecord {
  std::string model_id;
  Occupation occupation;
  PromptKind prompt_kind = PromptKind::kNeutral;
  // Present exactly when prompt_kind is not neutral.
  std::optional<ExpectedAttributes> expected;
  AttributeProfile observed;
  QualityScores quality;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

enum class Variant { kStereotypical, kCounterStereotypical };
std::string_view ToString(Variant v);
std::optional<Variant> ParseVariant(std::string_view token);

// Subjective questions are "q1".."q9" (ratings in [1, 10]); objective
// questions are "a".."h" (answer matched the image annotation or not).
inline constexpr std::array<std::string_view, 9> kSubjectiveQuestions = {
    "q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9"};
inline constexpr std::array<std::string_view, 8> kObjectiveQuestions = {
    "a", "b", "c", "d", "e", "f", "g", "h"};

struct UnderstandingRecord {
  std::string model_id;
  Occupation true_occupation;
  std::string predicted_raw;
  // nullopt means UNMAPPABLE.
  std::optional<Occupation> predicted_mapped;
  AttributeProfile subject;
  // Counterfactual-pair fields: all set (paired records) or all empty.
  std::optional<std::string> pair_id;
  std::optional<Variant> variant;
  std::map<std::string, double> subjective;
  std::map<std::string, bool> objective;

  bool IsPaired() const { return pair_id.has_value(); }
  bool IsCorrect() const {
    return predicted_mapped.has_value() && *predicted_mapped == true_occupation;
  }

  friend bool operator==(const UnderstandingRecord&, const UnderstandingRecord&) = default;
};

inline constexpr std::string_view kUnmappable = "UNMAPPABLE";

}  // namespace iris
