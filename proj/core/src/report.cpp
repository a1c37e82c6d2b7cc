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

#include "iris/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iris/csv.hpp"
#include "iris/error.hpp"

namespace iris {
namespace fs = std::filesystem;
namespace {

std::string Num(double v) { return csv::FormatDouble(v); }

std::string Line(const std::vector<std::string>& fields) {
  std::ostringstream out;
  csv::WriteRow(out, fields);
  return out.str();
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path.string(), 0, "cannot create file");
  out << text;
  out.flush();
  if (!out) throw ValidationError(path.string(), 0, "write failed");
}

double RequireNumber(const csv::Table& t, const csv::Row& row, std::size_t col,
                     std::string_view what) {
  auto v = csv::ParseDouble(csv::Trim(row.fields[col]));
  if (!v) {
    throw ValidationError(t.source(), row.line,
                          fmt::format("{} '{}' is not a number", what, row.fields[col]));
  }
  return *v;
}

Dimension RequireDimension(const csv::Table& t, const csv::Row& row, std::size_t col) {
  auto d = ParseDimension(csv::Trim(row.fields[col]));
  if (!d) throw ValidationError(t.source(), row.line, "unknown dimension '" + row.fields[col] + "'");
  return *d;
}

ModelInput& InputFor(std::vector<ModelInput>& inputs, const std::string& id) {
  for (auto& m : inputs) {
    if (m.model_id == id) return m;
  }
  inputs.push_back({id, {}, {}});
  return inputs.back();
}

std::string SectorName(Task t) {
  return t == Task::kGeneration ? "MBTI_Gen" : "MBTI_Und";
}

// Leaderboard column order: understanding first.
constexpr std::array<Dimension, kDimensionCount> kBoardOrder = {
    Dimension::kIfsUnd, Dimension::kRfsUnd, Dimension::kBisUnd,
    Dimension::kIfsGen, Dimension::kRfsGen, Dimension::kBisGen};

}  // namespace

RunArchive BuildArchive(std::string run_id, std::vector<ModelInput> inputs,
                        const HyperParams& hp) {
  RunArchive a;
  a.run_id = std::move(run_id);
  a.timestamp = UtcTimestamp();
  auto cohort = ScoreCohort(inputs, hp);
  a.config = hp;
  a.config.s_tot = cohort.s_tot;
  if (!cohort.s_tot) a.config.s_tot = hp.s_tot;
  a.inputs = std::move(inputs);
  a.results = std::move(cohort.models);
  return a;
}

CohortResult ReplayRun(const RunArchive& archive) {
  return ScoreCohort(archive.inputs, archive.config);
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z",
                     std::chrono::time_point_cast<std::chrono::seconds>(now));
}

// ---------------------------------------------------------------------------

std::string GranularCsv(const std::vector<ModelInput>& inputs) {
  std::string out = Line({"model_id", "dimension", "metric", "value"});
  for (const auto& m : inputs) {
    for (const auto& [d, v] : m.granular) {
      for (const auto& e : v.entries) {
        out += Line({m.model_id, std::string(ToString(d)), e.name, Num(e.value)});
      }
    }
  }
  return out;
}

std::string MagnitudesCsv(const std::vector<ModelInput>& inputs) {
  std::string out = Line({"model_id", "dimension", "magnitude"});
  for (const auto& m : inputs) {
    for (const auto& [d, mag] : m.magnitudes) {
      out += Line({m.model_id, std::string(ToString(d)), Num(mag)});
    }
  }
  return out;
}

std::string DeviationsCsv(const std::vector<IrisResult>& results) {
  std::string out = Line({"model_id", "dimension", "metric", "u"});
  for (const auto& r : results) {
    for (const auto& [d, v] : r.deviations) {
      for (const auto& e : v.entries) {
        out += Line({r.model_id, std::string(ToString(d)), e.name, Num(e.value)});
      }
    }
  }
  return out;
}

std::string ScoresCsv(const std::vector<IrisResult>& results) {
  std::string out = Line({"model_id", "sector", "magnitude", "score", "detail"});
  for (const auto& r : results) {
    for (const auto& [d, s] : r.dimensions) {
      out += Line({r.model_id, std::string(ToString(d)), Num(s.magnitude), Num(s.score), ""});
    }
    if (r.d_tot && r.score) out += Line({r.model_id, "IRIS", Num(*r.d_tot), Num(*r.score), ""});
    if (r.gen_mbti) out += Line({r.model_id, SectorName(Task::kGeneration), "", "", r.gen_mbti->code()});
    if (r.und_mbti) out += Line({r.model_id, SectorName(Task::kUnderstanding), "", "", r.und_mbti->code()});
  }
  return out;
}

std::string SensitivityCsv(const SensitivityReport& report) {
  std::string out = Line({"analysis", "item", "spearman_rho", "p_value"});
  for (const auto& e : report.loo) out += Line({"loo", e.removed, Num(e.rho), Num(e.p_value)});
  for (const auto& e : report.perturbations) {
    out += Line({"weight", e.label, Num(e.rho), Num(e.p_value)});
  }
  return out;
}

std::vector<ModelInput> ParseModelInputs(std::string_view granular_csv,
                                         std::string_view magnitudes_csv,
                                         const std::string& granular_source,
                                         const std::string& magnitudes_source) {
  const std::string& source = granular_source;
  std::vector<ModelInput> inputs;
  if (!granular_csv.empty()) {
    csv::Table t(csv::Parse(granular_csv, source), source);
    const auto cm = t.RequireColumn("model_id");
    const auto cd = t.RequireColumn("dimension");
    const auto cn = t.RequireColumn("metric");
    const auto cv = t.RequireColumn("value");
    for (const auto& row : t.rows()) {
      auto& m = InputFor(inputs, csv::Trim(row.fields[cm]));
      const Dimension d = RequireDimension(t, row, cd);
      auto& v = m.granular[d];
      v.dimension = d;
      v.entries.push_back({csv::Trim(row.fields[cn]), RequireNumber(t, row, cv, "value")});
      try {
        ValidateGranular(v);
      } catch (const ValidationError& e) {
        throw ValidationError(t.source(), row.line, e.constraint());
      }
    }
  }
  if (!magnitudes_csv.empty()) {
    csv::Table t(csv::Parse(magnitudes_csv, magnitudes_source), magnitudes_source);
    const auto cm = t.RequireColumn("model_id");
    const auto cd = t.RequireColumn("dimension");
    const auto cv = t.RequireColumn("magnitude");
    for (const auto& row : t.rows()) {
      auto& m = InputFor(inputs, csv::Trim(row.fields[cm]));
      const Dimension d = RequireDimension(t, row, cd);
      const double mag = RequireNumber(t, row, cv, "magnitude");
      if (!(mag >= 0.0) || !std::isfinite(mag)) {
        throw ValidationError(t.source(), row.line, "magnitude must be finite and non-negative");
      }
      if (!m.magnitudes.emplace(d, mag).second) {
        throw ValidationError(t.source(), row.line,
                              fmt::format("duplicate {} magnitude for '{}'", ToString(d), m.model_id));
      }
    }
  }
  return inputs;
}

std::vector<ModelInput> LoadMagnitudes(const fs::path& path) {
  return ParseModelInputs({}, ReadText(path), {}, path.string());
}

// ---------------------------------------------------------------------------

void SaveRun(const RunArchive& archive, const fs::path& dir, bool overwrite) {
  static std::atomic<unsigned> counter{0};
  const fs::path target = dir.has_filename() ? dir : dir.parent_path();
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const std::string name = target.filename().string();

  std::error_code ec;
  if (fs::exists(target, ec) && !overwrite) {
    throw ValidationError(target.string(), 0, "run directory already exists (use overwrite)");
  }
  fs::create_directories(parent, ec);
  if (ec || !fs::is_directory(parent)) {
    throw ValidationError(parent.string(), 0, "cannot create output directory: " + ec.message());
  }
  const std::string tag = fmt::format("{}-{}", ::getpid(), counter++);
  const fs::path tmp = parent / fmt::format(".{}.tmp-{}", name, tag);
  try {
    if (!fs::create_directory(tmp, ec) || ec) {
      throw ValidationError(tmp.string(), 0, "cannot create temporary directory: " + ec.message());
    }
    nlohmann::ordered_json manifest;
    manifest["format"] = kRunFormatVersion;
    manifest["run_id"] = archive.run_id;
    manifest["timestamp"] = archive.timestamp;
    manifest["models"] = nlohmann::json::array();
    for (const auto& m : archive.inputs) manifest["models"].push_back(m.model_id);
    WriteText(tmp / "manifest.json", manifest.dump(2) + "\n");
    WriteText(tmp / "config.snapshot", WriteConfig(archive.config));
    WriteText(tmp / "granular.csv", GranularCsv(archive.inputs));
    WriteText(tmp / "magnitudes.csv", MagnitudesCsv(archive.inputs));
    WriteText(tmp / "deviations.csv", DeviationsCsv(archive.results));
    WriteText(tmp / "scores.csv", ScoresCsv(archive.results));
    auto rows = ScoreRowsFrom(archive.results);
    WriteText(tmp / "leaderboard.md", RenderLeaderboard(rows).markdown);
    if (archive.sensitivity) WriteText(tmp / "sensitivity.csv", SensitivityCsv(*archive.sensitivity));

    if (fs::exists(target)) {
      const fs::path old = parent / fmt::format(".{}.old-{}", name, tag);
      fs::rename(target, old);
      fs::rename(tmp, target);
      fs::remove_all(old, ec);
    } else {
      fs::rename(tmp, target);
    }
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(tmp, ec);
    throw ValidationError(target.string(), 0, std::string("cannot write run: ") + e.what());
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
}

RunArchive LoadRun(const fs::path& dir) {
  RunArchive a;
  const fs::path manifest_path = dir / "manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(ReadText(manifest_path));
    if (manifest.at("format").get<int>() != kRunFormatVersion) {
      throw ValidationError(manifest_path.string(), 0, "unsupported run format");
    }
    a.run_id = manifest.at("run_id").get<std::string>();
    a.timestamp = manifest.at("timestamp").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(manifest_path.string(), 0, std::string("malformed manifest: ") + e.what());
  }
  a.config = LoadConfig(dir / "config.snapshot");

  const fs::path mag_path = dir / "magnitudes.csv";
  auto inputs = ParseModelInputs(ReadText(dir / "granular.csv"),
                                 fs::exists(mag_path) ? ReadText(mag_path) : std::string(),
                                 (dir / "granular.csv").string(), mag_path.string());
  for (const auto& id : manifest.at("models")) {
    const auto name = id.get<std::string>();
    auto it = std::find_if(inputs.begin(), inputs.end(),
                           [&](const ModelInput& m) { return m.model_id == name; });
    a.inputs.push_back(it == inputs.end() ? ModelInput{name, {}, {}} : *it);
  }

  const fs::path scores_path = dir / "scores.csv";
  csv::Table st(csv::Parse(ReadText(scores_path), scores_path.string()), scores_path.string());
  const auto cm = st.RequireColumn("model_id");
  const auto cs = st.RequireColumn("sector");
  const auto cmag = st.RequireColumn("magnitude");
  const auto csc = st.RequireColumn("score");
  const auto cdet = st.RequireColumn("detail");
  for (const auto& m : a.inputs) a.results.push_back(IrisResult{m.model_id, {}, {}, {}, {}, {}, {}});
  auto result_for = [&](const csv::Row& row) -> IrisResult& {
    const std::string id = csv::Trim(row.fields[cm]);
    for (auto& r : a.results) {
      if (r.model_id == id) return r;
    }
    throw ValidationError(st.source(), row.line, "model '" + id + "' is not in the manifest");
  };
  for (const auto& row : st.rows()) {
    auto& r = result_for(row);
    const std::string sector = csv::Trim(row.fields[cs]);
    if (auto d = ParseDimension(sector)) {
      r.dimensions[*d] = {*d, RequireNumber(st, row, cmag, "magnitude"),
                          RequireNumber(st, row, csc, "score")};
    } else if (sector == "IRIS") {
      r.d_tot = RequireNumber(st, row, cmag, "magnitude");
      r.score = RequireNumber(st, row, csc, "score");
    } else if (sector == SectorName(Task::kGeneration) || sector == SectorName(Task::kUnderstanding)) {
      try {
        auto code = ParseMbtiCode(csv::Trim(row.fields[cdet]));
        (sector == SectorName(Task::kGeneration) ? r.gen_mbti : r.und_mbti) = code;
      } catch (const ValidationError& e) {
        throw ValidationError(st.source(), row.line, e.constraint());
      }
    } else {
      throw ValidationError(st.source(), row.line, "unknown sector '" + sector + "'");
    }
  }

  const fs::path dev_path = dir / "deviations.csv";
  csv::Table dt(csv::Parse(ReadText(dev_path), dev_path.string()), dev_path.string());
  const auto dm = dt.RequireColumn("model_id");
  const auto dd = dt.RequireColumn("dimension");
  const auto dn = dt.RequireColumn("metric");
  const auto du = dt.RequireColumn("u");
  for (const auto& row : dt.rows()) {
    const std::string id = csv::Trim(row.fields[dm]);
    auto it = std::find_if(a.results.begin(), a.results.end(),
                           [&](const IrisResult& r) { return r.model_id == id; });
    if (it == a.results.end()) {
      throw ValidationError(dt.source(), row.line, "model '" + id + "' is not in the manifest");
    }
    const Dimension d = RequireDimension(dt, row, dd);
    auto& v = it->deviations[d];
    v.dimension = d;
    v.entries.push_back({csv::Trim(row.fields[dn]), RequireNumber(dt, row, du, "u")});
  }

  const fs::path sens_path = dir / "sensitivity.csv";
  if (fs::exists(sens_path)) {
    csv::Table t(csv::Parse(ReadText(sens_path), sens_path.string()), sens_path.string());
    const auto ca = t.RequireColumn("analysis");
    const auto ci = t.RequireColumn("item");
    const auto cr = t.RequireColumn("spearman_rho");
    const auto cp = t.RequireColumn("p_value");
    SensitivityReport rep;
    for (const auto& row : t.rows()) {
      const std::string kind = csv::Trim(row.fields[ca]);
      const double rho = RequireNumber(t, row, cr, "spearman_rho");
      const double p = RequireNumber(t, row, cp, "p_value");
      if (kind == "loo") {
        rep.loo.push_back({csv::Trim(row.fields[ci]), rho, p});
      } else if (kind == "weight") {
        rep.perturbations.push_back({csv::Trim(row.fields[ci]), rho, p});
      } else {
        throw ValidationError(t.source(), row.line, "unknown analysis '" + kind + "'");
      }
    }
    a.sensitivity = std::move(rep);
  }
  return a;
}

// ---------------------------------------------------------------------------

std::vector<ScoreRow> ScoreRowsFrom(const std::vector<IrisResult>& results) {
  std::vector<ScoreRow> rows;
  for (const auto& r : results) {
    ScoreRow row;
    row.model_id = r.model_id;
    for (const auto& [d, s] : r.dimensions) row.scores[static_cast<std::size_t>(d)] = s.score;
    row.iris = r.score;
    row.gen_mbti = r.gen_mbti;
    row.und_mbti = r.und_mbti;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScoreRow> ReadScoreRows(const fs::path& path) {
  return ParseScoreRows(ReadText(path), path.string());
}

std::vector<ScoreRow> ParseScoreRows(std::string_view text, const std::string& source) {
  csv::Table t(csv::Parse(text, source), source);
  const auto cm = t.RequireColumn("model_id");
  const auto cs = t.RequireColumn("sector");
  const auto csc = t.RequireColumn("score");
  const auto cdet = t.Column("detail");
  std::vector<ScoreRow> rows;
  for (const auto& row : t.rows()) {
    const std::string id = csv::Trim(row.fields[cm]);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ScoreRow& r) { return r.model_id == id; });
    if (it == rows.end()) {
      rows.push_back({id, {}, {}, {}, {}});
      it = rows.end() - 1;
    }
    const std::string sector = csv::Trim(row.fields[cs]);
    if (auto d = ParseDimension(sector)) {
      it->scores[static_cast<std::size_t>(*d)] = RequireNumber(t, row, csc, "score");
    } else if (sector == "IRIS") {
      it->iris = RequireNumber(t, row, csc, "score");
    } else if (sector == SectorName(Task::kGeneration) || sector == SectorName(Task::kUnderstanding)) {
      if (!cdet) throw ValidationError(t.source(), row.line, "MBTI row without a detail column");
      try {
        auto code = ParseMbtiCode(csv::Trim(row.fields[*cdet]));
        (sector == SectorName(Task::kGeneration) ? it->gen_mbti : it->und_mbti) = code;
      } catch (const ValidationError& e) {
        throw ValidationError(t.source(), row.line, e.constraint());
      }
    } else {
      throw ValidationError(t.source(), row.line, "unknown sector '" + sector + "'");
    }
  }
  return rows;
}

void FillMbti(std::vector<ScoreRow>& rows, double tau) {
  for (auto& r : rows) {
    for (Task t : {Task::kGeneration, Task::kUnderstanding}) {
      auto& slot = t == Task::kGeneration ? r.gen_mbti : r.und_mbti;
      if (slot) continue;
      const auto& ifs = r.scores[static_cast<std::size_t>(DimensionOf(t, Pillar::kIfs))];
      const auto& rfs = r.scores[static_cast<std::size_t>(DimensionOf(t, Pillar::kRfs))];
      const auto& bis = r.scores[static_cast<std::size_t>(DimensionOf(t, Pillar::kBis))];
      if (ifs && rfs && bis) slot = Diagnose(*ifs, *rfs, *bis, tau);
    }
  }
}

Leaderboard RenderLeaderboard(std::vector<ScoreRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    if (a.iris.has_value() != b.iris.has_value()) return a.iris.has_value();
    if (a.iris && b.iris && *a.iris != *b.iris) return *a.iris > *b.iris;
    return a.model_id < b.model_id;
  });

  // Seven numeric columns: the six dimensions in board order, then IRIS.
  auto cell = [](const ScoreRow& r, std::size_t col) -> std::optional<double> {
    if (col < kDimensionCount) return r.scores[static_cast<std::size_t>(kBoardOrder[col])];
    return r.iris;
  };
  constexpr std::size_t kColumns = kDimensionCount + 1;
  std::array<std::optional<double>, kColumns> best{};
  std::array<std::optional<double>, kColumns> worst{};
  for (std::size_t c = 0; c < kColumns; ++c) {
    std::size_t n = 0;
    for (const auto& r : rows) {
      auto v = cell(r, c);
      if (!v) continue;
      ++n;
      if (!best[c] || *v > *best[c]) best[c] = v;
      if (!worst[c] || *v < *worst[c]) worst[c] = v;
    }
    if (n < 2 || *best[c] == *worst[c]) {
      best[c].reset();
      worst[c].reset();
    }
  }

  auto mbti = [](const std::optional<MbtiCode>& m) {
    return m ? fmt::format("{} ({})", m->code(), m->archetype_name()) : std::string("--");
  };

  Leaderboard out;
  out.markdown =
      "| Model | Und IFS | Und RFS | Und BIS | Gen IFS | Gen RFS | Gen BIS | IRIS Score | Gen MBTI "
      "| Und MBTI |\n"
      "|---|---:|---:|---:|---:|---:|---:|---:|---|---|\n";
  out.csv = Line({"model_id", "und_ifs", "und_rfs", "und_bis", "gen_ifs", "gen_rfs", "gen_bis",
                  "iris", "gen_mbti", "und_mbti"});
  for (const auto& r : rows) {
    out.markdown += "| " + r.model_id + " |";
    std::vector<std::string> fields{r.model_id};
    for (std::size_t c = 0; c < kColumns; ++c) {
      auto v = cell(r, c);
      if (!v) {
        out.markdown += " -- |";
        fields.emplace_back();
        continue;
      }
      std::string text = fmt::format("{:.2f}", *v);
      if (best[c] && *v == *best[c]) text += "†";
      if (worst[c] && *v == *worst[c]) text += "‡";
      out.markdown += " " + text + " |";
      fields.push_back(Num(*v));
    }
    out.markdown += " " + mbti(r.gen_mbti) + " | " + mbti(r.und_mbti) + " |\n";
    fields.push_back(r.gen_mbti ? r.gen_mbti->code() : "");
    fields.push_back(r.und_mbti ? r.und_mbti->code() : "");
    out.csv += Line(fields);
  }
  out.markdown += "\n† best in column, ‡ worst in column.\n";
  return out;
}

std::string ExportFairnessSpace(const std::vector<IrisResult>& results) {
  return DeviationsCsv(results);
}

std::map<std::string, std::vector<DeviationVector>> ImportFairnessSpace(std::string_view text,
                                                                        const std::string& source) {
  csv::Table t(csv::Parse(text, source), source);
  const auto cm = t.RequireColumn("model_id");
  const auto cd = t.RequireColumn("dimension");
  const auto cn = t.RequireColumn("metric");
  const auto cu = t.RequireColumn("u");
  std::map<std::string, std::vector<DeviationVector>> out;
  for (const auto& row : t.rows()) {
    auto& list = out[csv::Trim(row.fields[cm])];
    const Dimension d = RequireDimension(t, row, cd);
    auto it = std::find_if(list.begin(), list.end(),
                           [&](const DeviationVector& v) { return v.dimension == d; });
    if (it == list.end()) {
      list.push_back({d, {}});
      it = list.end() - 1;
    }
    it->entries.push_back({csv::Trim(row.fields[cn]), RequireNumber(t, row, cu, "u")});
  }
  return out;
}

}  // namespace iris
