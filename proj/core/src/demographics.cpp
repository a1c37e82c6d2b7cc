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

#include "iris/demographics.hpp"

#include <algorithm>
#include <cctype>

#include "iris/error.hpp"

namespace iris {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view ToString(Gender g) {
  return g == Gender::kMale ? "male" : "female";
}

std::string_view ToString(AgeBand a) {
  switch (a) {
    case AgeBand::kYoung: return "young";
    case AgeBand::kMiddleAged: return "middle_aged";
    case AgeBand::kOlder: return "older";
  }
  return "?";
}

std::string_view ToString(SkinBand s) {
  switch (s) {
    case SkinBand::kLight: return "light";
    case SkinBand::kMiddle: return "middle";
    case SkinBand::kDark: return "dark";
  }
  return "?";
}

std::string_view ToString(Axis axis) {
  switch (axis) {
    case Axis::kGender: return "gender";
    case Axis::kAge: return "age";
    case Axis::kSkin: return "skin";
  }
  return "?";
}

std::string_view CellToken(Axis axis, std::size_t category) {
  switch (axis) {
    case Axis::kGender:
      return ToString(kGenders.at(category));
    case Axis::kAge:
      return category == 1 ? std::string_view("middle-aged")
                           : ToString(kAgeBands.at(category));
    case Axis::kSkin:
      return ToString(kSkinBands.at(category));
  }
  return "?";
}

std::optional<Gender> ParseGender(std::string_view token) {
  const std::string t = Lower(token);
  if (t == "male") return Gender::kMale;
  if (t == "female") return Gender::kFemale;
  return std::nullopt;
}

std::optional<AgeBand> ParseAgeBand(std::string_view token) {
  const std::string t = Lower(token);
  if (t == "young") return AgeBand::kYoung;
  if (t == "middle_aged" || t == "middle-aged" || t == "middle") {
    return AgeBand::kMiddleAged;
  }
  if (t == "older" || t == "old") return AgeBand::kOlder;
  return std::nullopt;
}

std::optional<SkinBand> ParseSkinBand(std::string_view token) {
  const std::string t = Lower(token);
  if (t == "light") return SkinBand::kLight;
  if (t == "middle") return SkinBand::kMiddle;
  if (t == "dark") return SkinBand::kDark;
  return std::nullopt;
}

std::optional<Axis> ParseAxis(std::string_view token) {
  const std::string t = Lower(token);
  if (t == "gender") return Axis::kGender;
  if (t == "age") return Axis::kAge;
  if (t == "skin" || t == "skin_tone") return Axis::kSkin;
  return std::nullopt;
}

AgeBand AgeToBand(unsigned age_years) {
  if (age_years <= 39) return AgeBand::kYoung;
  if (age_years <= 64) return AgeBand::kMiddleAged;
  return AgeBand::kOlder;
}

SkinBand MstToBand(int mst) {
  if (mst < 1 || mst > 10) {
    throw ValidationError("Monk Skin Tone value " + std::to_string(mst) +
                          " is outside 1..10");
  }
  if (mst <= 3) return SkinBand::kLight;
  if (mst <= 7) return SkinBand::kMiddle;
  return SkinBand::kDark;
}

AgeBand ResolveAge(std::optional<unsigned> years, std::optional<AgeBand> band) {
  if (band && years) {
    if (AgeToBand(*years) != *band) {
      throw ValidationError("age " + std::to_string(*years) + " falls in band " +
                            std::string(ToString(AgeToBand(*years))) +
                            " but band " + std::string(ToString(*band)) +
                            " was given");
    }
    return *band;
  }
  if (band) return *band;
  if (years) return AgeToBand(*years);
  throw ValidationError("age requires either years or a band");
}

std::size_t AttributeProfile::Category(Axis axis) const {
  switch (axis) {
    case Axis::kGender: return static_cast<std::size_t>(gender);
    case Axis::kAge: return static_cast<std::size_t>(age);
    case Axis::kSkin: return static_cast<std::size_t>(skin);
  }
  return 0;
}

std::size_t AttributeProfile::Index() const {
  return (Category(Axis::kGender) * 3 + Category(Axis::kAge)) * 3 +
         Category(Axis::kSkin);
}

AttributeProfile AttributeProfile::FromIndex(std::size_t index) {
  return AttributeProfile{kGenders.at(index / 9), kAgeBands.at((index / 3) % 3),
                          kSkinBands.at(index % 3)};
}

const std::array<AttributeProfile, kProfileCount>& AllProfiles() {
  static const auto profiles = [] {
    std::array<AttributeProfile, kProfileCount> out{};
    for (std::size_t i = 0; i < kProfileCount; ++i) {
      out[i] = AttributeProfile::FromIndex(i);
    }
    return out;
  }();
  return profiles;
}

std::string ProfileLabel(const AttributeProfile& profile) {
  return ProfileToCell(profile, GroupSelector::Triple()).label;
}

GroupSelector::GroupSelector(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw ValidationError("group selector needs at least one axis");
  std::sort(axes_.begin(), axes_.end());
  if (std::adjacent_find(axes_.begin(), axes_.end()) != axes_.end()) {
    throw ValidationError("group selector repeats an axis");
  }
}

const std::vector<GroupSelector>& GroupSelector::All() {
  static const std::vector<GroupSelector> all = {
      Single(Axis::kGender),
      Single(Axis::kAge),
      Single(Axis::kSkin),
      Dual(Axis::kGender, Axis::kAge),
      Dual(Axis::kGender, Axis::kSkin),
      Dual(Axis::kAge, Axis::kSkin),
      Triple(),
  };
  return all;
}

bool GroupSelector::Contains(Axis axis) const {
  return std::find(axes_.begin(), axes_.end(), axis) != axes_.end();
}

std::size_t GroupSelector::CellCount() const {
  std::size_t n = 1;
  for (Axis a : axes_) n *= Cardinality(a);
  return n;
}

std::string GroupSelector::Name() const {
  std::string out;
  for (Axis a : axes_) {
    if (!out.empty()) out += '_';
    out += ToString(a);
  }
  return out;
}

std::vector<GroupCell> DeriveGroups(const GroupSelector& selector) {
  std::vector<GroupCell> cells;
  cells.reserve(selector.CellCount());
  const auto& axes = selector.axes();
  std::vector<std::size_t> digits(axes.size(), 0);
  for (std::size_t index = 0; index < selector.CellCount(); ++index) {
    std::string label;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      if (k > 0) label += '_';
      label += CellToken(axes[k], digits[k]);
    }
    cells.push_back(GroupCell{index, std::move(label)});
    for (std::size_t k = axes.size(); k-- > 0;) {
      if (++digits[k] < Cardinality(axes[k])) break;
      digits[k] = 0;
    }
  }
  return cells;
}

std::size_t ProfileToCellIndex(const AttributeProfile& profile,
                               const GroupSelector& selector) {
  std::size_t index = 0;
  for (Axis a : selector.axes()) index = index * Cardinality(a) + profile.Category(a);
  return index;
}

GroupCell ProfileToCell(const AttributeProfile& profile, const GroupSelector& selector) {
  std::string label;
  for (Axis a : selector.axes()) {
    if (!label.empty()) label += '_';
    label += CellToken(a, profile.Category(a));
  }
  return GroupCell{ProfileToCellIndex(profile, selector), std::move(label)};
}

}  // namespace iris
