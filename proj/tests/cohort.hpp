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

#include <random>
#include <string>
#include <vector>

#include "iris/scoring.hpp"

namespace iris::testing {

// One model with every canonical metric drawn uniformly from [lo, hi].
inline ModelInput SyntheticModel(const std::string& id, std::uint64_t seed, double lo = 0.0,
                                 double hi = 0.6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(lo, hi);
  ModelInput m{id, {}, {}};
  for (Dimension d : kDimensions) {
    GranularMetricVector g{d, {}};
    for (const auto& spec : MetricTaxonomy::Canonical().For(d)) {
      g.entries.push_back({spec.name, value(rng)});
    }
    m.granular[d] = std::move(g);
  }
  return m;
}

inline std::vector<ModelInput> SyntheticCohort(std::size_t n, std::uint64_t seed) {
  std::vector<ModelInput> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(SyntheticModel("model_" + std::to_string(i), seed * 1000 + i));
  }
  return out;
}

}  // namespace iris::testing
