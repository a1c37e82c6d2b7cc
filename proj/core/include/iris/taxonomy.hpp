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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iris {

enum class Task { kGeneration = 0, kUnderstanding = 1 };
enum class Pillar { kIfs = 0, kRfs = 1, kBis = 2 };

enum class Dimension { kIfsGen = 0, kRfsGen, kBisGen, kIfsUnd, kRfsUnd, kBisUnd };
inline constexpr std::size_t kDimensionCount = 6;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::kIfsGen, Dimension::kRfsGen, Dimension::kBisGen,
    Dimension::kIfsUnd, Dimension::kRfsUnd, Dimension::kBisUnd};

constexpr Task TaskOf(Dimension d) {
  return static_cast<int>(d) < 3 ? Task::kGeneration : Task::kUnderstanding;
}
constexpr Pillar PillarOf(Dimension d) { return static_cast<Pillar>(static_cast<int>(d) % 3); }
constexpr Dimension DimensionOf(Task t, Pillar p) {
  return static_cast<Dimension>(static_cast<int>(t) * 3 + static_cast<int>(p));
}

std::string_view ToString(Dimension d);  // "IFS_Gen"
std::string_view ToString(Task t);       // "gen" / "und"
std::optional<Dimension> ParseDimension(std::string_view token);

enum class Normalization {
  kBounded,      // u = m / m_max
  kLogPenalty,   // u = ln(1 + m)
  kPassThrough,  // u = m
};
std::string_view ToString(Normalization n);
std::optional<Normalization> ParseNormalization(std::string_view token);

struct MetricSpec {
  std::string name;
  Dimension dimension = Dimension::kIfsGen;
  Normalization normalization = Normalization::kBounded;
  double m_max = 1.0;
  // True for the answer-consistency entries whose scale is 1..10.
  bool rating_scale = false;
};

// Ordered registry of granular metrics. The canonical instance holds the 60
// entries grouped by dimension in kDimensions order.
class MetricTaxonomy {
 public:
  static const MetricTaxonomy& Canonical();

  // Lines "dimension,name,normalization,m_max[,rating]" with a
  // "# iris-taxonomy <version>" header; '#' lines are comments.
  static MetricTaxonomy FromFile(const std::filesystem::path& path);
  static MetricTaxonomy Parse(std::string_view text, const std::string& source);

  int version() const { return version_; }
  std::size_t size() const { return metrics_.size(); }
  const std::vector<MetricSpec>& metrics() const { return metrics_; }
  std::span<const MetricSpec> For(Dimension d) const;
  std::optional<std::size_t> Find(std::string_view name) const;
  const MetricSpec& Get(std::string_view name) const;

  friend bool operator==(const MetricTaxonomy& a, const MetricTaxonomy& b);

 private:
  void Index();

  int version_ = 1;
  std::vector<MetricSpec> metrics_;
  std::array<std::pair<std::size_t, std::size_t>, kDimensionCount> ranges_{};
};

bool operator==(const MetricSpec& a, const MetricSpec& b);

}  // namespace iris
