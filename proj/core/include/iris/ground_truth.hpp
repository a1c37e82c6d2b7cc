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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "iris/demographics.hpp"
#include "iris/occupations.hpp"
#include "iris/probability.hpp"

namespace iris {

enum class Region { kUS, kEU };
std::string_view ToString(Region r);
std::optional<Region> ParseRegion(std::string_view token);

// Real-world demographic distributions of one occupation. Labels follow the
// single-axis group cells ("male"/"female", "young"/"middle-aged"/"older",
// "light"/"middle"/"dark").
struct OccupationDemographics {
  ProbabilityVector gender;
  ProbabilityVector age;
  std::optional<ProbabilityVector> skin;
};

class GroundTruthTable {
 public:
  explicit GroundTruthTable(Region region) : region_(region) {}

  Region region() const { return region_; }
  // EU labour statistics carry no skin-tone information.
  bool HasAxis(Axis axis) const { return axis != Axis::kSkin || region_ == Region::kUS; }

  void Add(const Occupation& occupation, OccupationDemographics demographics);
  const OccupationDemographics* Find(const std::string& occupation) const;
  bool Contains(const std::string& occupation) const { return Find(occupation) != nullptr; }
  // Throws ComputationError when the occupation or axis is unavailable.
  const ProbabilityVector& Distribution(const std::string& occupation, Axis axis) const;

  const std::map<std::string, OccupationDemographics>& rows() const { return rows_; }

 private:
  Region region_;
  std::map<std::string, OccupationDemographics> rows_;
};

struct GroundTruthOptions {
  // Per-axis sums within this distance of 1 are accepted as-is.
  double exact_tolerance = 1e-6;
  // Sums further off but within this distance are renormalized with a
  // warning (published tables carry rounding and omitted categories).
  double renormalize_slack = 0.05;
};

// Reads a CSV whose header mirrors the published labour-statistics tables:
// "User Term", "Female Ratio", "Light Skin (Proxy) %", "Middle Skin (Proxy) %",
// "Dark Skin (Proxy) %", "Young (0-39) %", "Middle (40-65) %", "Old (65+) %".
// Other columns are ignored. Values are percentages ("43.60%" or "43.60").
GroundTruthTable LoadGroundTruth(const std::filesystem::path& path, Region region,
                                 const OccupationRegistry& registry =
                                     OccupationRegistry::Builtin(),
                                 const GroundTruthOptions& options = {});
GroundTruthTable ParseGroundTruth(std::string_view csv_text, const std::string& source,
                                  Region region, const OccupationRegistry& registry,
                                  const GroundTruthOptions& options = {});

}  // namespace iris
