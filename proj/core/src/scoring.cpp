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

#include "iris/scoring.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {

void ValidateGranular(const GranularMetricVector& v, const MetricTaxonomy& taxonomy) {
  std::optional<std::size_t> previous;
  for (const auto& e : v.entries) {
    auto idx = taxonomy.Find(e.name);
    if (!idx) throw ValidationError(fmt::format("unknown granular metric '{}'", e.name));
    const auto& spec = taxonomy.metrics()[*idx];
    if (spec.dimension != v.dimension) {
      throw ValidationError(fmt::format("metric '{}' belongs to {}, not {}", e.name,
                                        ToString(spec.dimension), ToString(v.dimension)));
    }
    if (previous && *idx <= *previous) {
      throw ValidationError(
          fmt::format("metric '{}' is duplicated or out of canonical order", e.name));
    }
    if (!std::isfinite(e.value)) {
      throw ValidationError(fmt::format("metric '{}' is not finite", e.name));
    }
    previous = idx;
  }
}

DeviationVector Normalize(const GranularMetricVector& v, const HyperParams& hp,
                          const MetricTaxonomy& taxonomy) {
  ValidateGranular(v, taxonomy);
  DeviationVector out{v.dimension, {}};
  out.entries.reserve(v.entries.size());
  for (const auto& e : v.entries) {
    const auto& spec = taxonomy.Get(e.name);
    Normalization mode = spec.normalization;
    if (spec.rating_scale) {
      mode = hp.ac_diff == AcDiffNormalization::kBounded ? Normalization::kBounded
                                                          : Normalization::kPassThrough;
    }
    if (e.value < 0.0) {
      throw ValidationError(fmt::format("metric '{}' = {} is negative", e.name, e.value));
    }
    double u = e.value;
    switch (mode) {
      case Normalization::kBounded:
        if (e.value > spec.m_max * (1.0 + 1e-12)) {
          throw ValidationError(fmt::format("metric '{}' = {} exceeds its maximum {}", e.name,
                                            e.value, spec.m_max));
        }
        u = e.value / spec.m_max;
        break;
      case Normalization::kLogPenalty:
        u = std::log1p(e.value);
        break;
      case Normalization::kPassThrough:
        break;
    }
    out.entries.push_back({e.name, u});
  }
  return out;
}

double L2Norm(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x * x;
  return std::sqrt(sum);
}

double DimensionalMagnitude(const DeviationVector& dev) {
  double sum = 0.0;
  for (const auto& e : dev.entries) sum += e.value * e.value;
  return std::sqrt(sum);
}

double DecayScore(double magnitude, double k, double s) {
  if (!(magnitude >= 0.0)) throw ValidationError("magnitude must be non-negative");
  if (!(k > 0.0) || !(s > 0.0)) throw ValidationError("K and S must be positive");
  return s * std::exp(-k * magnitude);
}

double Calibrate(double median_magnitude, double k, double target_score) {
  if (!(median_magnitude >= 0.0)) throw ValidationError("median magnitude must be non-negative");
  if (!(k > 0.0) || !(target_score > 0.0)) {
    throw ValidationError("K and the target score must be positive");
  }
  return target_score * std::exp(k * median_magnitude);
}

double Median(std::vector<double> xs) {
  if (xs.empty()) throw ComputationError("median of an empty list");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

bool NestedNormCheck(std::span<const double> sub_norms, std::span<const double> entries,
                     double tol) {
  return std::abs(L2Norm(sub_norms) - L2Norm(entries)) <= tol;
}

DimensionScore ScoreDimension(Dimension d, double magnitude, const HyperParams& hp) {
  const auto& p = hp.For(d);
  return {d, magnitude, DecayScore(magnitude, p.k, p.s)};
}

double TotalDeviation(std::span<const DeviationVector> deviations) {
  std::array<bool, kDimensionCount> seen{};
  double sum = 0.0;
  for (const auto& dev : deviations) {
    auto& flag = seen[static_cast<std::size_t>(dev.dimension)];
    if (flag) {
      throw ComputationError(fmt::format("dimension {} given twice", ToString(dev.dimension)));
    }
    flag = true;
    for (const auto& e : dev.entries) sum += e.value * e.value;
  }
  for (Dimension d : kDimensions) {
    if (!seen[static_cast<std::size_t>(d)]) {
      throw ComputationError(fmt::format("dimension {} is missing", ToString(d)));
    }
  }
  return std::sqrt(sum);
}

OverallScore OverallIris(std::span<const DeviationVector> deviations, double k_tot,
                         double s_tot) {
  const double d = TotalDeviation(deviations);
  return {d, DecayScore(d, k_tot, s_tot)};
}

bool IrisResult::HasTask(Task t) const {
  for (Dimension d : kDimensions) {
    if (TaskOf(d) == t && !dimensions.contains(d)) return false;
  }
  return true;
}

CohortResult ScoreCohort(const std::vector<ModelInput>& inputs, const HyperParams& hp) {
  hp.Validate();
  CohortResult cohort;
  for (const auto& in : inputs) {
    IrisResult r;
    r.model_id = in.model_id;
    bool all_granular = true;
    for (Dimension d : kDimensions) {
      auto g = in.granular.find(d);
      auto m = in.magnitudes.find(d);
      if (g != in.granular.end() && !g->second.entries.empty()) {
        if (g->second.dimension != d) {
          throw ValidationError(fmt::format("model '{}': granular vector filed under {} is {}",
                                            in.model_id, ToString(d),
                                            ToString(g->second.dimension)));
        }
        if (m != in.magnitudes.end()) {
          Warn(fmt::format("model '{}': {} has granular values; precomputed magnitude ignored",
                           in.model_id, ToString(d)));
        }
        DeviationVector dev = Normalize(g->second, hp);
        r.dimensions[d] = ScoreDimension(d, DimensionalMagnitude(dev), hp);
        r.deviations[d] = std::move(dev);
      } else if (m != in.magnitudes.end()) {
        all_granular = false;
        r.dimensions[d] = ScoreDimension(d, m->second, hp);
      } else {
        all_granular = false;
      }
    }
    if (r.dimensions.size() == kDimensionCount) {
      if (all_granular) {
        std::vector<DeviationVector> devs;
        for (const auto& [d, dev] : r.deviations) devs.push_back(dev);
        r.d_tot = TotalDeviation(devs);
      } else {
        std::vector<double> mags;
        for (const auto& [d, s] : r.dimensions) mags.push_back(s.magnitude);
        r.d_tot = L2Norm(mags);
      }
    }
    for (Task t : {Task::kGeneration, Task::kUnderstanding}) {
      if (!r.HasTask(t)) continue;
      MbtiCode code = Diagnose(r.dimensions.at(DimensionOf(t, Pillar::kIfs)).score,
                               r.dimensions.at(DimensionOf(t, Pillar::kRfs)).score,
                               r.dimensions.at(DimensionOf(t, Pillar::kBis)).score, hp.tau);
      (t == Task::kGeneration ? r.gen_mbti : r.und_mbti) = code;
    }
    cohort.models.push_back(std::move(r));
  }

  cohort.s_tot = hp.s_tot;
  if (!cohort.s_tot) {
    std::vector<double> totals;
    for (const auto& r : cohort.models) {
      if (r.d_tot) totals.push_back(*r.d_tot);
    }
    if (!totals.empty()) {
      cohort.s_tot = Calibrate(Median(totals), hp.k_tot, hp.calibration_target);
    }
  }
  for (auto& r : cohort.models) {
    if (r.d_tot && cohort.s_tot) r.score = DecayScore(*r.d_tot, hp.k_tot, *cohort.s_tot);
  }
  return cohort;
}

}  // namespace iris
