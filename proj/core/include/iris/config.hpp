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
#include <string>
#include <string_view>

#include "iris/metrics.hpp"
#include "iris/taxonomy.hpp"

namespace iris {

struct DecayParams {
  double k = 1.0;
  double s = 60.0;

  friend bool operator==(const DecayParams&, const DecayParams&) = default;
};

// How tournament tallies are inverted into P(profile | occupation).
enum class TournamentPrior { kUniform, kWinShare };

enum class AcDiffNormalization { kPassThrough, kBounded };

struct HyperParams {
  std::array<DecayParams, kDimensionCount> dimensions = {{
      {3.0, 58000.0},  // IFS_Gen
      {3.0, 132.0},    // RFS_Gen
      {1.0, 85.0},     // BIS_Gen
      {5.0, 180.0},    // IFS_Und
      {5.0, 2750.0},   // RFS_Und
      {1.0, 340.0},    // BIS_Und
  }};
  double k_tot = 1.0;
  std::optional<double> s_tot;  // nullopt: calibrate on the cohort median
  double calibration_target = 60.0;
  double tau = 60.0;
  std::size_t n_min = 1;
  JsdOptions jsd;
  AcDiffNormalization ac_diff = AcDiffNormalization::kPassThrough;
  TournamentPrior tournament_prior = TournamentPrior::kUniform;
  double tier3_threshold = 0.6;

  const DecayParams& For(Dimension d) const { return dimensions[static_cast<std::size_t>(d)]; }
  DecayParams& For(Dimension d) { return dimensions[static_cast<std::size_t>(d)]; }

  // Throws ValidationError naming the offending key.
  void Validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// Sectioned key = value text:
//
//   [ifs_gen]          K, S       (one section per dimension)
//   [overall]          K, S ("auto" or a number), target
//   [mbti]             tau
//   [metrics]          n_min, jsd_log_base (2|e), jsd_reading
//                      (divergence|divergence_squared), ac_diff
//                      (pass_through|bounded), tournament_prior
//                      (uniform|win_share)
//   [ingest]           tier3_threshold
//
// Missing keys keep their defaults; unknown sections or keys are errors.
HyperParams ParseConfig(std::string_view text, const std::string& source);
HyperParams LoadConfig(const std::filesystem::path& path);

// Round-trips through ParseConfig exactly (shortest decimal form).
std::string WriteConfig(const HyperParams& hp);

// Explicit path, else $IRIS_CONFIG, else nullopt (built-in defaults).
std::optional<std::filesystem::path> ResolveConfigPath(
    const std::optional<std::filesystem::path>& explicit_path);

// Directory holding the bundled data files: $IRIS_DATA_DIR, the install
// location, or the source tree.
std::filesystem::path DataDirectory();

}  // namespace iris
