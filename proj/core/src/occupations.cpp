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

#include "iris/occupations.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "iris/error.hpp"

namespace iris {
namespace {

constexpr const char* kBuiltinNames[] = {
    "astronaut",     "backpacker",   "ballplayer",    "bartender",
    "basketball_player", "boatman",  "carpenter",     "cheerleader",
    "climber",       "computer_user", "craftsman",    "dancer",
    "disk_jockey",   "doctor",       "drummer",       "electrician",
    "farmer",        "fireman",      "flutist",       "gardener",
    "guard",         "guitarist",    "gymnast",       "hairdresser",
    "horseman",      "judge",        "laborer",       "lawman",
    "lifeguard",     "machinist",    "motorcyclist",  "nurse",
    "painter",       "patient",      "prayer",        "referee",
    "repairman",     "reporter",     "retailer",      "runner",
    "sculptor",      "seller",       "singer",        "skateboarder",
    "soccer_player", "soldier",      "speaker",       "student",
    "teacher",       "tennis_player", "trumpeter",    "waiter",
};

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::string NormalizeOccupationName(std::string_view raw) {
  std::string out;
  bool pending_sep = false;
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u) || c == '-' || c == '_') {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out += '_';
    pending_sep = false;
    out += static_cast<char>(std::tolower(u));
  }
  return out;
}

const OccupationRegistry& OccupationRegistry::Builtin() {
  static const OccupationRegistry registry = [] {
    return FromNames(std::vector<std::string>(std::begin(kBuiltinNames),
                                              std::end(kBuiltinNames)));
  }();
  return registry;
}

OccupationRegistry OccupationRegistry::FromNames(const std::vector<std::string>& names) {
  OccupationRegistry r;
  for (const auto& raw : names) {
    std::string name = NormalizeOccupationName(raw);
    if (name.empty()) throw ValidationError("empty occupation name in registry");
    if (r.index_.count(name)) {
      throw ValidationError("duplicate occupation '" + name + "' in registry");
    }
    r.index_.emplace(name, r.names_.size());
    r.names_.push_back(std::move(name));
  }
  return r;
}

OccupationRegistry OccupationRegistry::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string(), 0, "cannot open occupation registry");
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  OccupationRegistry r;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string name = NormalizeOccupationName(line);
    if (name.empty()) continue;
    if (r.index_.count(name)) {
      throw ValidationError(path.string(), line_no, "duplicate occupation '" + name + "'");
    }
    r.index_.emplace(name, r.names_.size());
    r.names_.push_back(std::move(name));
  }
  return r;
}

std::optional<Occupation> OccupationRegistry::Find(std::string_view name) const {
  const std::string key = NormalizeOccupationName(name);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return Occupation(names_[it->second]);
}

Occupation OccupationRegistry::Get(std::string_view name) const {
  if (auto found = Find(name)) return *found;
  throw ValidationError("unknown occupation '" + std::string(name) +
                        "' (did you mean '" + Nearest(name) + "'?)");
}

std::string OccupationRegistry::Nearest(std::string_view name) const {
  const std::string key = NormalizeOccupationName(name);
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const auto& n : names_) {
    const std::size_t d = EditDistance(key, n);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

}  // namespace iris
