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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "iris/config.hpp"
#include "iris/csv.hpp"
#include "iris/error.hpp"
#include "iris/extract.hpp"
#include "iris/ground_truth.hpp"
#include "iris/ingest.hpp"
#include "iris/log.hpp"
#include "iris/report.hpp"
#include "iris/scoring.hpp"
#include "iris/stats.hpp"

namespace iris::cli {
namespace fs = std::filesystem;
namespace {

struct CommonOptions {
  std::string config;
};

struct InputOptions {
  std::string gen_records;
  std::string und_records;
  std::string tournament;
  std::string ground_truth_us;
  std::string ground_truth_eu;
  std::string aliases;
  std::string magnitudes;
  std::string region = "both";
};

void AddInputFlags(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("--gen-records", o.gen_records, "Generation records (CSV or JSON lines)");
  cmd->add_option("--und-records", o.und_records, "Understanding records (CSV or JSON lines)");
  cmd->add_option("--tournament", o.tournament, "Tournament tallies CSV");
  cmd->add_option("--ground-truth-us", o.ground_truth_us, "US labour statistics CSV");
  cmd->add_option("--ground-truth-eu", o.ground_truth_eu, "EU labour statistics CSV");
  cmd->add_option("--aliases", o.aliases, "Answer alias table CSV");
  cmd->add_option("--magnitudes", o.magnitudes,
                  "Precomputed magnitudes CSV (model_id,dimension,magnitude)");
  cmd->add_option("--region", o.region, "us, eu or both")
      ->check(CLI::IsMember({"us", "eu", "both", "US", "EU", "BOTH"}));
}

HyperParams LoadHyperParams(const CommonOptions& c) {
  auto path = ResolveConfigPath(c.config.empty() ? std::nullopt
                                                 : std::optional<fs::path>(c.config));
  return path ? LoadConfig(*path) : HyperParams{};
}

fs::path BundledOr(const std::string& given, std::string_view bundled) {
  if (!given.empty()) return given;
  return DataDirectory() / bundled;
}

struct LoadedInputs {
  EvaluationInputs eval;
  std::optional<GroundTruthTable> us;
  std::optional<GroundTruthTable> eu;
  std::vector<ModelInput> magnitudes;
  RegionSelection region = RegionSelection::kBoth;
};

LoadedInputs LoadInputs(const InputOptions& o) {
  if (o.gen_records.empty() && o.und_records.empty() && o.tournament.empty() &&
      o.magnitudes.empty()) {
    throw ValidationError(
        "no inputs: give --gen-records, --und-records, --tournament or --magnitudes");
  }
  LoadedInputs in;
  in.region = *ParseRegionSelection(o.region);
  AliasTable aliases;
  const fs::path alias_path = BundledOr(o.aliases, "aliases_default.csv");
  if (!o.aliases.empty() || fs::exists(alias_path)) aliases = AliasTable::FromFile(alias_path);
  ParseOptions po;
  po.aliases = &aliases;

  if (!o.gen_records.empty()) in.eval.generation = ParseGenerationRecords(fs::path(o.gen_records), po);
  if (!o.und_records.empty()) {
    in.eval.understanding = ParseUnderstandingRecords(fs::path(o.und_records), po);
  }
  if (!o.tournament.empty()) in.eval.tournament = ParseTournament(fs::path(o.tournament));
  const bool needs_truth = !o.gen_records.empty() || !o.und_records.empty() || !o.tournament.empty();
  if (needs_truth && in.region != RegionSelection::kEU) {
    in.us = LoadGroundTruth(BundledOr(o.ground_truth_us, "ground_truth_us.csv"), Region::kUS);
    in.eval.us = &*in.us;
  }
  if (needs_truth && in.region != RegionSelection::kUS) {
    in.eu = LoadGroundTruth(BundledOr(o.ground_truth_eu, "ground_truth_eu.csv"), Region::kEU);
    in.eval.eu = &*in.eu;
  }
  if (!o.magnitudes.empty()) in.magnitudes = LoadMagnitudes(o.magnitudes);
  return in;
}

std::vector<ModelInput> BuildModelInputs(const LoadedInputs& in, const HyperParams& hp) {
  auto models = ExtractGranular(in.eval, hp, in.region);
  for (const auto& m : in.magnitudes) {
    auto it = std::find_if(models.begin(), models.end(),
                           [&](const ModelInput& x) { return x.model_id == m.model_id; });
    if (it == models.end()) {
      models.push_back(m);
      continue;
    }
    for (const auto& [d, mag] : m.magnitudes) it->magnitudes[d] = mag;
  }
  return models;
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError(path.string(), 0, "cannot write file");
  f << text;
}

std::string Fixed(double v) { return fmt::format("{:.6f}", v); }

// Score rows from --run or --scores.
std::vector<ScoreRow> LoadScoreRows(const std::string& run, const std::string& scores, double tau) {
  std::vector<ScoreRow> rows;
  if (!run.empty()) {
    rows = ScoreRowsFrom(LoadRun(run).results);
  } else if (!scores.empty()) {
    rows = ReadScoreRows(scores);
  } else {
    throw ValidationError("give --run or --scores");
  }
  FillMbti(rows, tau);
  return rows;
}

// ---------------------------------------------------------------------------

int CmdScore(const CommonOptions& c, const InputOptions& o, const std::string& out_dir,
             std::string run_id, bool overwrite, std::ostream& out) {
  const HyperParams hp = LoadHyperParams(c);
  const auto in = LoadInputs(o);
  auto models = BuildModelInputs(in, hp);
  if (run_id.empty()) run_id = fs::path(out_dir).filename().string();
  RunArchive archive = BuildArchive(run_id, std::move(models), hp);
  SaveRun(archive, out_dir, overwrite);

  for (const auto& r : archive.results) {
    if (!r.score) {
      fmt::print(out, "notice: model '{}' has {} of 6 dimensions; no overall IRIS score\n",
                 r.model_id, r.dimensions.size());
    }
  }
  out << RenderLeaderboard(ScoreRowsFrom(archive.results)).markdown;
  fmt::print(out, "run written to {}\n", out_dir);
  return kOk;
}

int CmdMetrics(const CommonOptions& c, const InputOptions& o, const std::string& out_file,
               std::ostream& out) {
  const HyperParams hp = LoadHyperParams(c);
  const auto in = LoadInputs(o);
  const auto models = BuildModelInputs(in, hp);
  const std::string text = GranularCsv(models);
  if (out_file.empty()) {
    out << text;
  } else {
    WriteFile(out_file, text);
  }
  return kOk;
}

int CmdMbti(const CommonOptions& c, std::optional<double> ifs, std::optional<double> rfs,
            std::optional<double> bis, std::optional<double> tau_flag, const std::string& run,
            const std::string& scores, bool medians, std::ostream& out) {
  const HyperParams hp = LoadHyperParams(c);
  const double tau = tau_flag.value_or(hp.tau);
  if (ifs || rfs || bis) {
    if (!ifs || !rfs || !bis) throw ValidationError("--ifs, --rfs and --bis go together");
    const auto code = Diagnose(*ifs, *rfs, *bis, tau);
    fmt::print(out, "{} {}\n", code.code(), code.archetype_name());
    return kOk;
  }
  auto rows = LoadScoreRows(run, scores, tau);
  const auto recorded = rows;
  for (auto& r : rows) r.gen_mbti = r.und_mbti = std::nullopt;
  FillMbti(rows, tau);
  out << "model_id,gen_mbti,gen_archetype,und_mbti,und_archetype\n";
  for (const auto& r : rows) {
    csv::WriteRow(out, {r.model_id, r.gen_mbti ? r.gen_mbti->code() : "",
                        r.gen_mbti ? std::string(r.gen_mbti->archetype_name()) : "",
                        r.und_mbti ? r.und_mbti->code() : "",
                        r.und_mbti ? std::string(r.und_mbti->archetype_name()) : ""});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto note = [&](std::string_view task, const auto& was, const auto& now) {
      if (was && now && was->code() != now->code()) {
        fmt::print(out, "note: {} {} recorded {} but scores give {}\n", rows[i].model_id, task,
                   was->code(), now->code());
      }
    };
    note("gen", recorded[i].gen_mbti, rows[i].gen_mbti);
    note("und", recorded[i].und_mbti, rows[i].und_mbti);
  }
  if (medians) {
    for (Dimension d : kDimensions) {
      std::vector<double> v;
      for (const auto& r : rows) {
        if (auto s = r.scores[static_cast<std::size_t>(d)]) v.push_back(*s);
      }
      if (!v.empty()) fmt::print(out, "median {} score: {:.2f}\n", ToString(d), Median(v));
    }
  }
  return kOk;
}

void PrintMatrix(std::ostream& out, const CorrelationMatrix& m) {
  fmt::print(out, "{} correlation matrix\n",
             m.kind == CorrelationKind::kPearson ? "pearson" : "spearman");
  out << "dimension";
  for (const auto& l : m.labels) out << "," << l;
  out << "\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << m.labels[i];
    for (double v : m.values[i]) out << "," << Fixed(v);
    out << "\n";
  }
}

int CmdValidate(const std::string& run, const std::string& scores, const std::string& granular,
                const std::string& groups, std::ostream& out) {
  std::vector<ScoreRow> rows;
  std::vector<ModelInput> inputs;
  if (!run.empty()) {
    auto archive = LoadRun(run);
    rows = ScoreRowsFrom(archive.results);
    inputs = archive.inputs;
  } else if (!scores.empty()) {
    rows = ReadScoreRows(scores);
  }
  if (!granular.empty()) {
    std::ifstream f(granular, std::ios::binary);
    if (!f) throw ValidationError(granular, 0, "cannot open file");
    std::ostringstream ss;
    ss << f.rdbuf();
    inputs = ParseModelInputs(ss.str(), {}, granular, {});
  }
  if (rows.empty() && inputs.empty()) throw ValidationError("give --run, --scores or --granular");
  const std::size_t model_count = std::max(rows.size(), inputs.size());
  if (model_count < 2) {
    out << "validation skipped: at least two models are required\n";
    return kOk;
  }

  for (Dimension d : kDimensions) {
    std::vector<std::string> names;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> values;
    for (const auto& m : inputs) {
      auto it = m.granular.find(d);
      if (it == m.granular.end()) continue;
      std::vector<std::string> these;
      std::vector<double> vals;
      for (const auto& e : it->second.entries) {
        these.push_back(e.name);
        vals.push_back(e.value);
      }
      if (names.empty()) names = these;
      if (these != names) continue;
      ids.push_back(m.model_id);
      values.push_back(std::move(vals));
    }
    if (ids.size() < 2 || names.size() < 2) continue;
    try {
      const double alpha = CronbachAlpha(ScoreMatrix(ids, names, values));
      fmt::print(out, "cronbach_alpha {} ({} models x {} metrics): {}\n", ToString(d), ids.size(),
                 names.size(), Fixed(alpha));
    } catch (const ComputationError& e) {
      fmt::print(out, "cronbach_alpha {}: undefined ({})\n", ToString(d), e.what());
    }
  }

  std::vector<IrisResult> complete;
  for (const auto& r : rows) {
    if (std::all_of(r.scores.begin(), r.scores.end(), [](const auto& s) { return s.has_value(); })) {
      IrisResult ir;
      ir.model_id = r.model_id;
      for (Dimension d : kDimensions) {
        ir.dimensions[d] = {d, 0.0, *r.scores[static_cast<std::size_t>(d)]};
      }
      complete.push_back(std::move(ir));
    }
  }
  if (complete.size() >= 3) {
    const auto matrix = DimensionScoreMatrix(complete);
    fmt::print(out, "models with all six dimension scores: {}\n", complete.size());
    PrintMatrix(out, DimensionCorrelationMatrix(matrix, CorrelationKind::kPearson));
    PrintMatrix(out, DimensionCorrelationMatrix(matrix, CorrelationKind::kSpearman));
  } else if (!rows.empty()) {
    out << "correlation matrix skipped: fewer than three models with all six scores\n";
  }

  if (!groups.empty()) {
    csv::Table t = csv::Table::FromFile(groups);
    const auto cm = t.RequireColumn("model_id");
    const auto cg = t.RequireColumn("group");
    std::map<std::string, std::vector<double>> by_group;
    std::vector<std::string> order;
    for (const auto& row : t.rows()) {
      const std::string id = csv::Trim(row.fields[cm]);
      const std::string g = csv::Trim(row.fields[cg]);
      auto it = std::find_if(rows.begin(), rows.end(), [&](const ScoreRow& r) { return r.model_id == id; });
      if (it == rows.end()) throw ValidationError(t.source(), row.line, "unknown model '" + id + "'");
      if (!it->iris) throw ValidationError(t.source(), row.line, "model '" + id + "' has no IRIS score");
      if (!by_group.contains(g)) order.push_back(g);
      by_group[g].push_back(*it->iris);
    }
    if (order.size() != 2) {
      throw ValidationError(t.source(), 0,
                            fmt::format("Welch's test needs exactly two groups, found {}", order.size()));
    }
    const auto w = WelchTTest(by_group[order[0]], by_group[order[1]]);
    fmt::print(out, "welch {} (n={}) vs {} (n={}): t={} df={} p={}\n", order[0],
               by_group[order[0]].size(), order[1], by_group[order[1]].size(), Fixed(w.t),
               Fixed(w.df), Fixed(w.p_two_sided));
  }
  return kOk;
}

int CmdSensitivity(const CommonOptions& c, const std::string& run, double fraction,
                   const std::string& out_file, std::ostream& out) {
  if (run.empty()) throw ValidationError("--run is required");
  auto archive = LoadRun(run);
  HyperParams hp = archive.config;
  if (!c.config.empty()) hp = LoadHyperParams(c);
  SensitivityReport rep;
  rep.loo = LooSensitivity(archive.inputs, hp);
  rep.perturbations = WeightPerturbation(archive.inputs, hp, DimensionPerturbations(fraction));
  const std::string text = SensitivityCsv(rep);
  WriteFile(out_file.empty() ? fs::path(run) / "sensitivity.csv" : fs::path(out_file), text);
  out << "Sub-Metric Removed | Spearman's rho | p-value\n";
  for (const auto& e : rep.loo) fmt::print(out, "{} | {:.4f} | {:.4g}\n", e.removed, e.rho, e.p_value);
  for (const auto& e : rep.perturbations) {
    fmt::print(out, "{} | {:.4f} | {:.4g}\n", e.label, e.rho, e.p_value);
  }
  const auto min_it = std::min_element(rep.loo.begin(), rep.loo.end(),
                                       [](const auto& a, const auto& b) { return a.rho < b.rho; });
  if (min_it != rep.loo.end()) fmt::print(out, "minimum LOO rho: {:.4f} ({})\n", min_it->rho, min_it->removed);
  return kOk;
}

int CmdCalibrate(const CommonOptions& c, const std::string& run, const std::string& magnitudes,
                 std::optional<double> target_flag, const std::string& out_file, std::ostream& out) {
  HyperParams hp = LoadHyperParams(c);
  const double target = target_flag.value_or(hp.calibration_target);
  std::vector<IrisResult> results;
  if (!run.empty()) {
    results = LoadRun(run).results;
  } else if (!magnitudes.empty()) {
    results = ScoreCohort(LoadMagnitudes(magnitudes), hp).models;
  } else {
    throw ValidationError("give --run or --magnitudes");
  }
  for (Dimension d : kDimensions) {
    std::vector<double> mags;
    for (const auto& r : results) {
      if (auto it = r.dimensions.find(d); it != r.dimensions.end()) mags.push_back(it->second.magnitude);
    }
    if (mags.empty()) continue;
    const double median = Median(mags);
    hp.For(d).s = Calibrate(median, hp.For(d).k, target);
    fmt::print(out, "{}: median magnitude {} over {} models, K={} -> S={}\n", ToString(d),
               Fixed(median), mags.size(), csv::FormatDouble(hp.For(d).k), Fixed(hp.For(d).s));
  }
  std::vector<double> totals;
  for (const auto& r : results) {
    if (r.d_tot) totals.push_back(*r.d_tot);
  }
  if (!totals.empty()) {
    const double median = Median(totals);
    hp.s_tot = Calibrate(median, hp.k_tot, target);
    fmt::print(out, "overall: median D_tot {} over {} models, K={} -> S={}\n", Fixed(median),
               totals.size(), csv::FormatDouble(hp.k_tot), Fixed(*hp.s_tot));
  }
  if (!out_file.empty()) WriteFile(out_file, WriteConfig(hp));
  return kOk;
}

int CmdReport(const CommonOptions& c, const std::string& run, const std::string& scores,
              const std::string& csv_out, const std::string& space_out, std::ostream& out) {
  const HyperParams hp = LoadHyperParams(c);
  auto rows = LoadScoreRows(run, scores, hp.tau);
  const auto board = RenderLeaderboard(rows);
  out << board.markdown;
  if (!csv_out.empty()) WriteFile(csv_out, board.csv);
  if (!space_out.empty()) {
    if (run.empty()) throw ValidationError("--export-space needs --run");
    WriteFile(space_out, ExportFairnessSpace(LoadRun(run).results));
  }
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness evaluation for unified multimodal models", "iris"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--config", common.config, "Hyperparameter file (default: $IRIS_CONFIG)");

  InputOptions score_in;
  std::string score_out;
  std::string run_id;
  bool overwrite = false;
  auto* score = app.add_subcommand("score", "Compute metrics, scores and MBTI codes; save a run");
  AddInputFlags(score, score_in);
  score->add_option("--out", score_out, "Run directory to create")->required();
  score->add_option("--run-id", run_id, "Run identifier (default: directory name)");
  score->add_flag("--overwrite", overwrite, "Replace an existing run directory");
  score->add_option("--config", common.config, "Hyperparameter file");

  InputOptions metrics_in;
  std::string metrics_out;
  auto* metrics = app.add_subcommand("metrics", "Dump granular metric values without scoring");
  AddInputFlags(metrics, metrics_in);
  metrics->add_option("--out", metrics_out, "Output CSV (default: stdout)");
  metrics->add_option("--config", common.config, "Hyperparameter file");

  std::optional<double> ifs, rfs, bis, tau;
  std::string mbti_run, mbti_scores;
  bool medians = false;
  auto* mbti = app.add_subcommand("mbti", "Diagnose personality codes");
  mbti->add_option("--ifs", ifs, "Ideal fairness score");
  mbti->add_option("--rfs", rfs, "Real-world fidelity score");
  mbti->add_option("--bis", bis, "Steerability score");
  mbti->add_option("--tau", tau, "Threshold (default from config)");
  mbti->add_option("--run", mbti_run, "Run directory");
  mbti->add_option("--scores", mbti_scores, "scores.csv file");
  mbti->add_flag("--medians", medians, "Print cohort median scores as candidate thresholds");
  mbti->add_option("--config", common.config, "Hyperparameter file");

  std::string val_run, val_scores, val_granular, val_groups;
  auto* validate = app.add_subcommand("validate", "Internal consistency, correlations, Welch test");
  validate->add_option("--run", val_run, "Run directory");
  validate->add_option("--scores", val_scores, "scores.csv file");
  validate->add_option("--granular", val_granular, "granular.csv file");
  validate->add_option("--groups", val_groups, "Architecture grouping CSV (model_id,group)");

  std::string sens_run, sens_out;
  double fraction = 0.1;
  auto* sensitivity = app.add_subcommand("sensitivity", "Leave-one-out and weight perturbation");
  sensitivity->add_option("--run", sens_run, "Run directory")->required();
  sensitivity->add_option("--fraction", fraction, "Weight perturbation fraction")
      ->check(CLI::Range(0.0, 1.0));
  sensitivity->add_option("--out", sens_out, "Output CSV (default: <run>/sensitivity.csv)");
  sensitivity->add_option("--config", common.config, "Hyperparameter file");

  std::string cal_run, cal_mag, cal_out;
  std::optional<double> target;
  auto* calibrate = app.add_subcommand("calibrate", "Solve S so the cohort median scores the target");
  calibrate->add_option("--run", cal_run, "Run directory");
  calibrate->add_option("--magnitudes", cal_mag, "Magnitudes CSV");
  calibrate->add_option("--target", target, "Target score for the median (default 60)");
  calibrate->add_option("--out", cal_out, "Write the calibrated config here");
  calibrate->add_option("--config", common.config, "Hyperparameter file");

  std::string rep_run, rep_scores, rep_csv, rep_space;
  auto* report = app.add_subcommand("report", "Render the leaderboard");
  report->add_option("--run", rep_run, "Run directory");
  report->add_option("--scores", rep_scores, "scores.csv file");
  report->add_option("--csv", rep_csv, "Also write the leaderboard as CSV");
  report->add_option("--export-space", rep_space, "Write (model, metric, u) triples");
  report->add_option("--config", common.config, "Hyperparameter file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationFailure;
  }

  auto previous = SetWarningHandler([&err](std::string_view m) { err << "warning: " << m << "\n"; });
  int code = kOk;
  try {
    if (*score) {
      code = CmdScore(common, score_in, score_out, run_id, overwrite, out);
    } else if (*metrics) {
      code = CmdMetrics(common, metrics_in, metrics_out, out);
    } else if (*mbti) {
      code = CmdMbti(common, ifs, rfs, bis, tau, mbti_run, mbti_scores, medians, out);
    } else if (*validate) {
      code = CmdValidate(val_run, val_scores, val_granular, val_groups, out);
    } else if (*sensitivity) {
      code = CmdSensitivity(common, sens_run, fraction, sens_out, out);
    } else if (*calibrate) {
      code = CmdCalibrate(common, cal_run, cal_mag, target, cal_out, out);
    } else if (*report) {
      code = CmdReport(common, rep_run, rep_scores, rep_csv, rep_space, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    code = kValidationFailure;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << "\n";
    code = kComputationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kComputationFailure;
  }
  SetWarningHandler(std::move(previous));
  return code;
}

}  // namespace iris::cli
