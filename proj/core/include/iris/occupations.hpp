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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace iris {

// A canonical occupation name from a registry: lowercase, words joined by
// '_'. Only an OccupationRegistry hands these out.
class Occupation {
 public:
  const std::string& name() const { return name_; }

  friend bool operator==(const Occupation&, const Occupation&) = default;
  friend auto operator<=>(const Occupation& a, const Occupation& b) {
    return a.name_ <=> b.name_;
  }

 private:
  friend class OccupationRegistry;
  explicit Occupation(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

// Lowercases, trims, and joins internal whitespace/hyphens with '_'.
std::string NormalizeOccupationName(std::string_view raw);

class OccupationRegistry {
 public:
  // The 52 built-in occupations.
  static const OccupationRegistry& Builtin();

  // One name per line; blank lines and '#' comments ignored. Names are
  // normalized; duplicates are a ValidationError.
  static OccupationRegistry FromFile(const std::filesystem::path& path);
  static OccupationRegistry FromNames(const std::vector<std::string>& names);

  std::optional<Occupation> Find(std::string_view name) const;
  // Like Find, but throws ValidationError with the closest registered name.
  Occupation Get(std::string_view name) const;
  // Registered name with the smallest edit distance to `name`.
  std::string Nearest(std::string_view name) const;

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace iris
