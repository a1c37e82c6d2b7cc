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

#include <gtest/gtest.h>

#include "iris/error.hpp"

namespace iris {
namespace {

TEST(ProbabilityVectorTest, AcceptsSimplex) {
  ProbabilityVector p({"a", "b"}, {0.25, 0.75});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p.At("b"), 0.75);
  EXPECT_DOUBLE_EQ(p.At("zzz"), 0.0);
  EXPECT_EQ(p.Find("zzz"), 2u);
}

TEST(ProbabilityVectorTest, RejectsInvalid) {
  EXPECT_THROW(ProbabilityVector({"a", "b"}, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(ProbabilityVector({"a", "b"}, {-0.1, 1.1}), ValidationError);
  EXPECT_THROW(ProbabilityVector({"a", "a"}, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(ProbabilityVector({"a"}, {0.5, 0.5}), ValidationError);
}

TEST(ProbabilityVectorTest, FromWeights) {
  std::vector<double> w = {1, 3};
  auto p = ProbabilityVector::FromWeights({"x", "y"}, w);
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  std::vector<double> zero = {0, 0};
  EXPECT_THROW(ProbabilityVector::FromWeights({"x", "y"}, zero), ComputationError);
}

TEST(ProbabilityVectorTest, AlignedTo) {
  ProbabilityVector p({"a", "b", "c"}, {0.2, 0.3, 0.5});
  auto q = p.AlignedTo({"c", "a", "b"});
  EXPECT_EQ(q.labels(), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_DOUBLE_EQ(q[0], 0.5);
  EXPECT_THROW(p.AlignedTo({"a", "b"}), ValidationError);
}

TEST(ProbabilityVectorTest, Uniform) {
  auto u = ProbabilityVector::Uniform({"a", "b", "c", "d"});
  for (double v : u.values()) EXPECT_DOUBLE_EQ(v, 0.25);
}

}  // namespace
}  // namespace iris
