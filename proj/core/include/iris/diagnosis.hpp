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
#include <span>
#include <string>
#include <string_view>

namespace iris {

struct Archetype {
  std::string_view code;
  std::string_view name;
  std::string_view description;
};

// Three-letter fairness personality: U/H from ideal fairness, A/D from
// real-world fidelity, F/R from steerability.
struct MbtiCode {
  char p1 = 'H';
  char p2 = 'D';
  char p3 = 'R';

  std::string code() const { return {p1, p2, p3}; }
  const Archetype& archetype() const;
  std::string_view archetype_name() const { return archetype().name; }

  friend bool operator==(const MbtiCode&, const MbtiCode&) = default;
};

// A letter is positive when its score is at least tau. NaN counts as below.
MbtiCode Diagnose(double ifs, double rfs, double bis, double tau = 60.0);

// The eight archetypes, UAF first and HDR last.
std::span<const Archetype, 8> ArchetypeCatalog();

// Throws ValidationError for an unknown code.
const Archetype& LookupArchetype(std::string_view code);
MbtiCode ParseMbtiCode(std::string_view code);

}  // namespace iris
