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

#include "iris/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "iris/csv.hpp"
#include "iris/error.hpp"

namespace iris {
namespace detail {
extern const char* const kCanonicalTaxonomyText;
}  // namespace detail

std::string_view ToString(Dimension d) {
  switch (d) {
    case Dimension::kIfsGen: return "IFS_Gen";
    case Dimension::kRfsGen: return "RFS_Gen";
    case Dimension::kBisGen: return "BIS_Gen";
    case Dimension::kIfsUnd: return "IFS_Und";
    case Dimension::kRfsUnd: return "RFS_Und";
    case Dimension::kBisUnd: return "BIS_Und";
  }
  return "?";
}

std::string_view ToString(Task t) { return t == Task::kGeneration ? "gen" : "und"; }

std::optional<Dimension> ParseDimension(std::string_view token) {
  std::string t;
  for (char c : token) {
    t += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (Dimension d : kDimensions) {
    std::string name(ToString(d));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == name) return d;
  }
  return std::nullopt;
}

std::string_view ToString(Normalization n) {
  switch (n) {
    case Normalization::kBounded: return "bounded";
    case Normalization::kLogPenalty: return "log_penalty";
    case Normalization::kPassThrough: return "pass_through";
  }
  return "?";
}

std::optional<Normalization> ParseNormalization(std::string_view token) {
  if (token == "bounded") return Normalization::kBounded;
  if (token == "log_penalty") return Normalization::kLogPenalty;
  if (token == "pass_through") return Normalization::kPassThrough;
  return std::nullopt;
}

bool operator==(const MetricSpec& a, const MetricSpec& b) {
  return a.name == b.name && a.dimension == b.dimension &&
         a.normalization == b.normalization && a.m_max == b.m_max &&
         a.rating_scale == b.rating_scale;
}

bool operator==(const MetricTaxonomy& a, const MetricTaxonomy& b) {
  return a.version_ == b.version_ && a.metrics_ == b.metrics_;
}

const MetricTaxonomy& MetricTaxonomy::Canonical() {
  static const MetricTaxonomy taxonomy =
      Parse(detail::kCanonicalTaxonomyText, "<builtin taxonomy>");
  return taxonomy;
}

MetricTaxonomy MetricTaxonomy::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), 0, "cannot open taxonomy file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), path.string());
}

MetricTaxonomy MetricTaxonomy::Parse(std::string_view text, const std::string& source) {
  MetricTaxonomy t;
  bool have_version = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = csv::Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      constexpr std::string_view kTag = "# iris-taxonomy ";
      if (trimmed.starts_with(kTag)) {
        auto v = csv::ParseInt(csv::Trim(trimmed.substr(kTag.size())));
        if (!v || *v < 1) throw ValidationError(source, line_no, "invalid taxonomy version");
        t.version_ = static_cast<int>(*v);
        have_version = true;
      }
      continue;
    }
    auto rows = csv::Parse(trimmed);
    const auto& f = rows.front().fields;
    if (f.size() != 4 && f.size() != 5) {
      throw ValidationError(source, line_no, "expected dimension,name,normalization,m_max[,rating]");
    }
    MetricSpec spec;
    auto dim = ParseDimension(csv::Trim(f[0]));
    if (!dim) throw ValidationError(source, line_no, "unknown dimension '" + f[0] + "'");
    spec.dimension = *dim;
    spec.name = csv::Trim(f[1]);
    if (spec.name.empty()) throw ValidationError(source, line_no, "empty metric name");
    auto norm = ParseNormalization(csv::Trim(f[2]));
    if (!norm) throw ValidationError(source, line_no, "unknown normalization '" + f[2] + "'");
    spec.normalization = *norm;
    auto m_max = csv::ParseDouble(csv::Trim(f[3]));
    if (!m_max || *m_max < 0.0 || (spec.normalization == Normalization::kBounded && *m_max <= 0.0)) {
      throw ValidationError(source, line_no, "invalid m_max '" + f[3] + "'");
    }
    spec.m_max = *m_max;
    if (f.size() == 5) {
      if (csv::Trim(f[4]) != "rating") {
        throw ValidationError(source, line_no, "unknown flag '" + f[4] + "'");
      }
      spec.rating_scale = true;
    }
    if (!t.metrics_.empty() && t.metrics_.back().dimension > spec.dimension) {
      throw ValidationError(source, line_no, "metrics must be grouped in dimension order");
    }
    if (t.Find(spec.name)) {
      throw ValidationError(source, line_no, "duplicate metric '" + spec.name + "'");
    }
    t.metrics_.push_back(std::move(spec));
  }
  if (!have_version) throw ValidationError(source, 0, "missing '# iris-taxonomy <version>' header");
  t.Index();
  return t;
}

void MetricTaxonomy::Index() {
  ranges_.fill({metrics_.size(), metrics_.size()});
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    auto& r = ranges_[static_cast<std::size_t>(metrics_[i].dimension)];
    if (r.first == metrics_.size()) r.first = i;
    r.second = i + 1;
  }
}

std::span<const MetricSpec> MetricTaxonomy::For(Dimension d) const {
  const auto& r = ranges_[static_cast<std::size_t>(d)];
  return std::span<const MetricSpec>(metrics_).subspan(r.first, r.second - r.first);
}

std::optional<std::size_t> MetricTaxonomy::Find(std::string_view name) const {
  std::string key(name);
  if (key == "Penalty_DeltaGSR") key = "Penalty_\xCE\x94GSR";
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    if (metrics_[i].name == key) return i;
  }
  return std::nullopt;
}

const MetricSpec& MetricTaxonomy::Get(std::string_view name) const {
  auto i = Find(name);
  if (!i) throw ValidationError(fmt::format("unknown granular metric '{}'", name));
  return metrics_[*i];
}

}  // namespace iris
