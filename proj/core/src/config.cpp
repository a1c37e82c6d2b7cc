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

#include "iris/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "iris/csv.hpp"
#include "iris/error.hpp"

namespace iris {
namespace {

std::string SectionName(Dimension d) {
  std::string s(ToString(d));
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string Unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

// Strips a trailing comment that is not inside quotes.
std::string StripComment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

class Reader {
 public:
  Reader(const std::string& source, std::size_t line, std::string key, std::string value)
      : source_(source), line_(line), key_(std::move(key)), value_(std::move(value)) {}

  double Number() const {
    auto v = csv::ParseDouble(value_);
    if (!v || !std::isfinite(*v)) Fail("expected a number");
    return *v;
  }
  double Positive() const {
    const double v = Number();
    if (!(v > 0.0)) Fail("expected a positive number");
    return v;
  }
  std::size_t Count() const {
    auto v = csv::ParseInt(value_);
    if (!v || *v < 1) Fail("expected a positive integer");
    return static_cast<std::size_t>(*v);
  }
  const std::string& Text() const { return value_; }
  [[noreturn]] void Fail(std::string_view what) const {
    throw ValidationError(source_, line_, fmt::format("{}: {} (got '{}')", key_, what, value_));
  }

 private:
  const std::string& source_;
  std::size_t line_;
  std::string key_;
  std::string value_;
};

std::string FormatNumber(double v) { return csv::FormatDouble(v); }

}  // namespace

void HyperParams::Validate() const {
  for (Dimension d : kDimensions) {
    const auto& p = For(d);
    if (!(p.k > 0.0) || !std::isfinite(p.k)) {
      throw ValidationError(fmt::format("{}.K must be positive", SectionName(d)));
    }
    if (!(p.s > 0.0) || !std::isfinite(p.s)) {
      throw ValidationError(fmt::format("{}.S must be positive", SectionName(d)));
    }
  }
  if (!(k_tot > 0.0) || !std::isfinite(k_tot)) throw ValidationError("overall.K must be positive");
  if (s_tot && (!(*s_tot > 0.0) || !std::isfinite(*s_tot))) {
    throw ValidationError("overall.S must be positive or 'auto'");
  }
  if (!(calibration_target > 0.0)) throw ValidationError("overall.target must be positive");
  if (!(tau > 0.0 && tau <= 100.0)) throw ValidationError("mbti.tau must lie in (0, 100]");
  if (n_min < 1) throw ValidationError("metrics.n_min must be at least 1");
  if (!(tier3_threshold >= 0.0 && tier3_threshold <= 1.0)) {
    throw ValidationError("ingest.tier3_threshold must lie in [0, 1]");
  }
}

HyperParams ParseConfig(std::string_view text, const std::string& source) {
  HyperParams hp;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = csv::Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(source, line_no, "unterminated section header");
      section = csv::Trim(line.substr(1, line.size() - 2));
      bool known = section == "overall" || section == "mbti" || section == "metrics" ||
                   section == "ingest" || ParseDimension(section).has_value();
      if (!known) throw ValidationError(source, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(source, line_no, "expected key = value");
    std::string key = csv::Trim(line.substr(0, eq));
    std::string value = Unquote(csv::Trim(line.substr(eq + 1)));
    if (section.empty()) throw ValidationError(source, line_no, "key '" + key + "' outside a section");
    Reader r(source, line_no, section + "." + key, value);

    if (auto d = ParseDimension(section)) {
      if (key == "K" || key == "k") {
        hp.For(*d).k = r.Positive();
      } else if (key == "S" || key == "s") {
        hp.For(*d).s = r.Positive();
      } else {
        r.Fail("unknown key");
      }
    } else if (section == "overall") {
      if (key == "K" || key == "k") {
        hp.k_tot = r.Positive();
      } else if (key == "S" || key == "s") {
        if (value == "auto") {
          hp.s_tot.reset();
        } else {
          hp.s_tot = r.Positive();
        }
      } else if (key == "target") {
        hp.calibration_target = r.Positive();
      } else {
        r.Fail("unknown key");
      }
    } else if (section == "mbti") {
      if (key == "tau") {
        hp.tau = r.Number();
      } else {
        r.Fail("unknown key");
      }
    } else if (section == "metrics") {
      if (key == "n_min") {
        hp.n_min = r.Count();
      } else if (key == "jsd_log_base") {
        if (value == "2") {
          hp.jsd.base = LogBase::kTwo;
        } else if (value == "e") {
          hp.jsd.base = LogBase::kNatural;
        } else {
          r.Fail("expected 2 or e");
        }
      } else if (key == "jsd_reading") {
        if (value == "divergence") {
          hp.jsd.reading = JsdReading::kDivergence;
        } else if (value == "divergence_squared") {
          hp.jsd.reading = JsdReading::kDivergenceSquared;
        } else {
          r.Fail("expected divergence or divergence_squared");
        }
      } else if (key == "ac_diff") {
        if (value == "pass_through") {
          hp.ac_diff = AcDiffNormalization::kPassThrough;
        } else if (value == "bounded") {
          hp.ac_diff = AcDiffNormalization::kBounded;
        } else {
          r.Fail("expected pass_through or bounded");
        }
      } else if (key == "tournament_prior") {
        if (value == "uniform") {
          hp.tournament_prior = TournamentPrior::kUniform;
        } else if (value == "win_share") {
          hp.tournament_prior = TournamentPrior::kWinShare;
        } else {
          r.Fail("expected uniform or win_share");
        }
      } else {
        r.Fail("unknown key");
      }
    } else if (section == "ingest") {
      if (key == "tier3_threshold") {
        hp.tier3_threshold = r.Number();
      } else {
        r.Fail("unknown key");
      }
    }
  }
  try {
    hp.Validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source, 0, e.constraint());
  }
  return hp;
}

HyperParams LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path.string());
}

std::string WriteConfig(const HyperParams& hp) {
  std::string out = "# iris hyperparameters\n";
  for (Dimension d : kDimensions) {
    out += fmt::format("\n[{}]\nK = {}\nS = {}\n", SectionName(d), FormatNumber(hp.For(d).k),
                       FormatNumber(hp.For(d).s));
  }
  out += fmt::format("\n[overall]\nK = {}\nS = {}\ntarget = {}\n", FormatNumber(hp.k_tot),
                     hp.s_tot ? FormatNumber(*hp.s_tot) : std::string("auto"),
                     FormatNumber(hp.calibration_target));
  out += fmt::format("\n[mbti]\ntau = {}\n", FormatNumber(hp.tau));
  out += fmt::format(
      "\n[metrics]\nn_min = {}\njsd_log_base = {}\njsd_reading = {}\nac_diff = {}\n"
      "tournament_prior = {}\n",
      hp.n_min, hp.jsd.base == LogBase::kTwo ? "2" : "e",
      hp.jsd.reading == JsdReading::kDivergence ? "divergence" : "divergence_squared",
      hp.ac_diff == AcDiffNormalization::kPassThrough ? "pass_through" : "bounded",
      hp.tournament_prior == TournamentPrior::kUniform ? "uniform" : "win_share");
  out += fmt::format("\n[ingest]\ntier3_threshold = {}\n", FormatNumber(hp.tier3_threshold));
  return out;
}

std::optional<std::filesystem::path> ResolveConfigPath(
    const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv("IRIS_CONFIG"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

std::filesystem::path DataDirectory() {
  if (const char* env = std::getenv("IRIS_DATA_DIR"); env && *env) return env;
  std::error_code ec;
  const std::filesystem::path installed = IRIS_INSTALL_DATA_DIR;
  if (std::filesystem::exists(installed / "metric_taxonomy.txt", ec)) return installed;
  return IRIS_SOURCE_DATA_DIR;
}

}  // namespace iris
