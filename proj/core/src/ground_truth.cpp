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

#include "iris/ground_truth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iris/csv.hpp"
#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {

std::string_view ToString(Region r) { return r == Region::kUS ? "US" : "EU"; }

std::optional<Region> ParseRegion(std::string_view token) {
  std::string t(token);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (t == "US") return Region::kUS;
  if (t == "EU") return Region::kEU;
  return std::nullopt;
}

void GroundTruthTable::Add(const Occupation& occupation, OccupationDemographics demographics) {
  if (region_ == Region::kEU && demographics.skin) {
    throw ValidationError("EU ground truth cannot carry a skin distribution");
  }
  rows_.insert_or_assign(occupation.name(), std::move(demographics));
}

const OccupationDemographics* GroundTruthTable::Find(const std::string& occupation) const {
  auto it = rows_.find(occupation);
  return it == rows_.end() ? nullptr : &it->second;
}

const ProbabilityVector& GroundTruthTable::Distribution(const std::string& occupation,
                                                        Axis axis) const {
  const OccupationDemographics* d = Find(occupation);
  if (d == nullptr) {
    throw ComputationError("occupation '" + occupation + "' is not in the " +
                           std::string(ToString(region_)) + " ground truth");
  }
  switch (axis) {
    case Axis::kGender: return d->gender;
    case Axis::kAge: return d->age;
    case Axis::kSkin:
      if (!d->skin) {
        throw ComputationError("no skin distribution for '" + occupation + "' in " +
                               std::string(ToString(region_)) + " ground truth");
      }
      return *d->skin;
  }
  throw ComputationError("unknown axis");
}

namespace {

std::string LowerHeader(const std::string& h) {
  std::string out;
  for (char c : h) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool Has(const std::string& h, std::string_view needle) {
  return h.find(needle) != std::string::npos;
}

enum Col { kOcc, kFemale, kLight, kMidSkin, kDark, kYoung, kMidAge, kOld, kNumCols };

std::vector<std::optional<std::size_t>> ResolveColumns(const csv::Table& table) {
  std::vector<std::optional<std::size_t>> cols(kNumCols);
  for (std::size_t i = 0; i < table.header().size(); ++i) {
    const std::string h = LowerHeader(table.header()[i]);
    std::optional<Col> which;
    if (h == "user term" || h == "occupation" || h == "user_term") {
      which = kOcc;
    } else if (Has(h, "female")) {
      which = kFemale;
    } else if (Has(h, "light")) {
      which = kLight;
    } else if (Has(h, "dark")) {
      which = kDark;
    } else if (Has(h, "middle") && Has(h, "skin")) {
      which = kMidSkin;
    } else if (Has(h, "young")) {
      which = kYoung;
    } else if (Has(h, "middle")) {
      which = kMidAge;
    } else if (h.rfind("old", 0) == 0) {
      which = kOld;
    }
    if (!which) continue;
    if (cols[*which]) {
      throw ValidationError(table.source(), table.header_line(),
                            "ambiguous column '" + table.header()[i] + "'");
    }
    cols[*which] = i;
  }
  return cols;
}

double Percent(const csv::Row& row, std::size_t col, const std::string& source,
               const std::string& header) {
  std::string v = csv::Trim(row.fields[col]);
  if (!v.empty() && v.back() == '%') v.pop_back();
  auto d = csv::ParseDouble(v);
  if (!d || *d < 0.0 || *d > 100.0) {
    throw ValidationError(source, row.line,
                          "invalid percentage '" + csv::Trim(row.fields[col]) + "' in '" +
                              header + "'");
  }
  return *d / 100.0;
}

ProbabilityVector CheckedDistribution(std::vector<std::string> labels, std::vector<double> values,
                                      const csv::Row& row, const std::string& source,
                                      const std::string& what, const std::string& occupation,
                                      const GroundTruthOptions& options) {
  double total = 0.0;
  for (double v : values) total += v;
  const double off = std::abs(total - 1.0);
  if (off > options.renormalize_slack) {
    std::ostringstream msg;
    msg << what << " percentages for '" << occupation << "' sum to " << total * 100.0
        << "% (must be 100% within " << options.exact_tolerance << ")";
    throw ValidationError(source, row.line, msg.str());
  }
  if (off > options.exact_tolerance) {
    std::ostringstream msg;
    msg << source << ":" << row.line << ": " << what << " percentages for '" << occupation
        << "' sum to " << total * 100.0 << "%; renormalized";
    Warn(msg.str());
  }
  return ProbabilityVector::FromWeights(std::move(labels), values);
}

}  // namespace

GroundTruthTable ParseGroundTruth(std::string_view csv_text, const std::string& source,
                                  Region region, const OccupationRegistry& registry,
                                  const GroundTruthOptions& options) {
  const csv::Table table(csv::Parse(csv_text, source), source);
  const auto cols = ResolveColumns(table);
  const char* names[kNumCols] = {"User Term", "Female Ratio", "Light Skin", "Middle Skin",
                                 "Dark Skin", "Young", "Middle (age)", "Old"};
  for (int c : {kOcc, kFemale, kYoung, kMidAge, kOld}) {
    if (!cols[c]) {
      throw ValidationError(source, table.header_line(),
                            std::string("missing required column '") + names[c] + "'");
    }
  }
  const bool any_skin = cols[kLight] || cols[kMidSkin] || cols[kDark];
  const bool all_skin = cols[kLight] && cols[kMidSkin] && cols[kDark];
  if (region == Region::kEU && any_skin) {
    throw ValidationError(source, table.header_line(),
                          "skin-tone columns are not allowed in an EU ground-truth file");
  }
  if (region == Region::kUS && !all_skin) {
    throw ValidationError(source, table.header_line(),
                          "US ground truth needs light, middle and dark skin columns");
  }

  GroundTruthTable out(region);
  auto header = [&](int c) { return table.header()[*cols[c]]; };
  for (const auto& row : table.rows()) {
    const std::string name = csv::Trim(row.fields[*cols[kOcc]]);
    auto occ = registry.Find(name);
    if (!occ) {
      throw ValidationError(source, row.line,
                            "unknown occupation '" + name + "' (nearest registry name: '" +
                                registry.Nearest(name) + "')");
    }
    const double female = Percent(row, *cols[kFemale], source, header(kFemale));
    OccupationDemographics d{
        ProbabilityVector({"male", "female"}, {1.0 - female, female}),
        CheckedDistribution({"young", "middle-aged", "older"},
                            {Percent(row, *cols[kYoung], source, header(kYoung)),
                             Percent(row, *cols[kMidAge], source, header(kMidAge)),
                             Percent(row, *cols[kOld], source, header(kOld))},
                            row, source, "age", occ->name(), options),
        std::nullopt};
    if (region == Region::kUS) {
      d.skin = CheckedDistribution({"light", "middle", "dark"},
                                   {Percent(row, *cols[kLight], source, header(kLight)),
                                    Percent(row, *cols[kMidSkin], source, header(kMidSkin)),
                                    Percent(row, *cols[kDark], source, header(kDark))},
                                   row, source, "skin", occ->name(), options);
    }
    if (out.Contains(occ->name())) {
      throw ValidationError(source, row.line, "duplicate row for '" + occ->name() + "'");
    }
    out.Add(*occ, std::move(d));
  }
  return out;
}

GroundTruthTable LoadGroundTruth(const std::filesystem::path& path, Region region,
                                 const OccupationRegistry& registry,
                                 const GroundTruthOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), 0, "cannot open ground-truth file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseGroundTruth(ss.str(), path.string(), region, registry, options);
}

}  // namespace iris
