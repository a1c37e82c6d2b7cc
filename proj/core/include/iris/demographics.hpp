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
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iris {

// Category order is fixed (male < female, young < middle_aged < older,
// light < middle < dark); every downstream vector relies on it.
enum class Gender { kMale = 0, kFemale = 1 };
enum class AgeBand { kYoung = 0, kMiddleAged = 1, kOlder = 2 };
enum class SkinBand { kLight = 0, kMiddle = 1, kDark = 2 };

enum class Axis { kGender = 0, kAge = 1, kSkin = 2 };

inline constexpr std::array<Gender, 2> kGenders = {Gender::kMale, Gender::kFemale};
inline constexpr std::array<AgeBand, 3> kAgeBands = {
    AgeBand::kYoung, AgeBand::kMiddleAged, AgeBand::kOlder};
inline constexpr std::array<SkinBand, 3> kSkinBands = {
    SkinBand::kLight, SkinBand::kMiddle, SkinBand::kDark};
inline constexpr std::array<Axis, 3> kAxes = {Axis::kGender, Axis::kAge, Axis::kSkin};

// Number of categories on an axis.
constexpr std::size_t Cardinality(Axis axis) {
  return axis == Axis::kGender ? 2 : 3;
}

// Canonical tokens used in data files: "male", "middle_aged", "dark", ...
std::string_view ToString(Gender g);
std::string_view ToString(AgeBand a);
std::string_view ToString(SkinBand s);
std::string_view ToString(Axis axis);

// Tokens used inside group-cell labels ("middle-aged" rather than
// "middle_aged", so that '_' only ever separates axes).
std::string_view CellToken(Axis axis, std::size_t category);

// Parsers are case-insensitive. Age accepts "middle_aged", "middle-aged",
// "middle" and the alias "old"; none of them accept anything else.
std::optional<Gender> ParseGender(std::string_view token);
std::optional<AgeBand> ParseAgeBand(std::string_view token);
std::optional<SkinBand> ParseSkinBand(std::string_view token);
std::optional<Axis> ParseAxis(std::string_view token);

// 0-39 young, 40-64 middle_aged, >= 65 older.
AgeBand AgeToBand(unsigned age_years);

// Monk Skin Tone 1-3 light, 4-7 middle, 8-10 dark. Throws ValidationError
// naming the value when outside 1..10.
SkinBand MstToBand(int mst);

// Resolves an age given as years, as a band, or both. Both present and
// disagreeing is a ValidationError; neither present is a ValidationError.
AgeBand ResolveAge(std::optional<unsigned> years, std::optional<AgeBand> band);

struct AttributeProfile {
  Gender gender = Gender::kMale;
  AgeBand age = AgeBand::kYoung;
  SkinBand skin = SkinBand::kLight;

  std::size_t Category(Axis axis) const;
  // Dense index 0..17 in gender-major, then age, then skin order.
  std::size_t Index() const;
  static AttributeProfile FromIndex(std::size_t index);

  friend auto operator<=>(const AttributeProfile&, const AttributeProfile&) = default;
};

inline constexpr std::size_t kProfileCount = 18;

// All 18 profiles in Index() order.
const std::array<AttributeProfile, kProfileCount>& AllProfiles();

// "male_young_light" style label.
std::string ProfileLabel(const AttributeProfile& profile);

enum class GroupLevel { kSingle = 1, kDual = 2, kTriple = 3 };

// A marginal or joint slice of the attribute lattice. Axes are held in
// canonical order (gender, age, skin) regardless of construction order.
class GroupSelector {
 public:
  // Throws ValidationError for empty or repeated axes.
  explicit GroupSelector(std::vector<Axis> axes);

  static GroupSelector Single(Axis axis) { return GroupSelector({axis}); }
  static GroupSelector Dual(Axis a, Axis b) { return GroupSelector({a, b}); }
  static GroupSelector Triple() {
    return GroupSelector({Axis::kGender, Axis::kAge, Axis::kSkin});
  }

  // The seven selectors in canonical order: gender, age, skin,
  // gender×age, gender×skin, age×skin, all three.
  static const std::vector<GroupSelector>& All();

  GroupLevel level() const { return static_cast<GroupLevel>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  bool Contains(Axis axis) const;
  std::size_t CellCount() const;
  // "gender", "gender_age", "gender_age_skin".
  std::string Name() const;

  friend bool operator==(const GroupSelector&, const GroupSelector&) = default;

 private:
  std::vector<Axis> axes_;
};

struct GroupCell {
  std::size_t index = 0;  // position in DeriveGroups() order
  std::string label;      // e.g. "female_dark"

  friend bool operator==(const GroupCell&, const GroupCell&) = default;
};

// Every cell of the selector's lattice, gender before age before skin and
// categories in declaration order (the last axis varies fastest).
std::vector<GroupCell> DeriveGroups(const GroupSelector& selector);

// Projects a profile onto the selector's axes.
GroupCell ProfileToCell(const AttributeProfile& profile, const GroupSelector& selector);
std::size_t ProfileToCellIndex(const AttributeProfile& profile,
                               const GroupSelector& selector);

}  // namespace iris
