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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace iris {

inline constexpr double kSimplexTolerance = 1e-9;

// A discrete distribution over named cells. Values lie in [0, 1] and sum to
// one within kSimplexTolerance; labels are distinct.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  // Throws ValidationError if the invariants do not hold.
  ProbabilityVector(std::vector<std::string> labels, std::vector<double> values);

  // Normalizes non-negative weights. Throws ComputationError when the total
  // is zero.
  static ProbabilityVector FromWeights(std::vector<std::string> labels,
                                       std::span<const double> weights);
  static ProbabilityVector Uniform(std::vector<std::string> labels);

  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Index of `label`, or size() if absent.
  std::size_t Find(const std::string& label) const;
  // Probability of `label`; 0 when the label is absent.
  double At(const std::string& label) const;

  // Reorders to `labels`. Throws ValidationError when the label sets differ.
  ProbabilityVector AlignedTo(const std::vector<std::string>& labels) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

}  // namespace iris
