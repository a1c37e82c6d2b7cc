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

#include "iris/probability.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "iris/error.hpp"

namespace iris {

ProbabilityVector::ProbabilityVector(std::vector<std::string> labels,
                                     std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  if (labels_.size() != values_.size()) {
    throw ValidationError("probability vector has " + std::to_string(labels_.size()) +
                          " labels but " + std::to_string(values_.size()) + " values");
  }
  std::unordered_set<std::string> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!seen.insert(labels_[i]).second) {
      throw ValidationError("duplicate label '" + labels_[i] + "' in probability vector");
    }
    const double v = values_[i];
    if (!std::isfinite(v) || v < -kSimplexTolerance || v > 1.0 + kSimplexTolerance) {
      throw ValidationError("probability for '" + labels_[i] + "' is outside [0, 1]");
    }
    total += v;
  }
  if (!values_.empty() && std::abs(total - 1.0) > kSimplexTolerance) {
    throw ValidationError("probability vector sums to " + std::to_string(total));
  }
}

ProbabilityVector ProbabilityVector::FromWeights(std::vector<std::string> labels,
                                                 std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("weights must be finite and non-negative");
    }
    total += w;
  }
  if (total <= 0.0) throw ComputationError("cannot normalize all-zero weights");
  std::vector<double> values(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) values[i] = weights[i] / total;
  return ProbabilityVector(std::move(labels), std::move(values));
}

ProbabilityVector ProbabilityVector::Uniform(std::vector<std::string> labels) {
  std::vector<double> w(labels.size(), 1.0);
  return FromWeights(std::move(labels), w);
}

std::size_t ProbabilityVector::Find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return labels_.size();
}

double ProbabilityVector::At(const std::string& label) const {
  const std::size_t i = Find(label);
  return i < values_.size() ? values_[i] : 0.0;
}

ProbabilityVector ProbabilityVector::AlignedTo(const std::vector<std::string>& labels) const {
  if (labels.size() != labels_.size()) {
    throw ValidationError("label sets differ in size (" + std::to_string(labels_.size()) +
                          " vs " + std::to_string(labels.size()) + ")");
  }
  std::vector<double> values;
  values.reserve(labels.size());
  for (const auto& l : labels) {
    const std::size_t i = Find(l);
    if (i == labels_.size()) throw ValidationError("label '" + l + "' missing after alignment");
    values.push_back(values_[i]);
  }
  ProbabilityVector out;
  out.labels_ = labels;
  out.values_ = std::move(values);
  return out;
}

}  // namespace iris
