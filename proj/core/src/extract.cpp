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

#include "iris/extract.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <future>
#include <set>

#include <fmt/format.h>

#include "iris/error.hpp"
#include "iris/log.hpp"
#include "iris/metrics.hpp"

namespace iris {
namespace {

std::string LevelName(const GroupSelector& s) {
  switch (s.level()) {
    case GroupLevel::kSingle: return "single_" + s.Name();
    case GroupLevel::kDual: return "dual_" + s.Name();
    case GroupLevel::kTriple: return "triple_joint_all";
  }
  return s.Name();
}

std::string RdName(const GroupSelector& s) {
  return s.level() == GroupLevel::kTriple ? "RD_joint_all" : "RD_" + s.Name();
}

std::vector<std::string> AxisLabels(Axis axis) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < Cardinality(axis); ++c) out.emplace_back(CellToken(axis, c));
  return out;
}

// Runs `fn` and appends its value, or warns and skips on a computation error.
void TryAdd(GranularMetricVector& v, const std::string& model, const std::string& name,
            const std::function<double()>& fn) {
  try {
    v.entries.push_back({name, fn()});
  } catch (const ComputationError& e) {
    Warn(fmt::format("model '{}': {} not computed: {}", model, name, e.what()));
  }
}

template <typename Record>
std::vector<Record> OfModel(const std::vector<Record>& all, const std::string& model) {
  std::vector<Record> out;
  for (const auto& r : all) {
    if (r.model_id == model) out.push_back(r);
  }
  return out;
}

// Unweighted mean of f(occupation) over the occupations that have neutral
// records and pass `keep`.
double MeanOverOccupations(const std::vector<GenerationRecord>& neutral,
                           const std::function<bool(const Occupation&)>& keep,
                           const std::function<double(const Occupation&)>& f) {
  std::set<Occupation> occupations;
  for (const auto& r : neutral) {
    if (keep(r.occupation)) occupations.insert(r.occupation);
  }
  if (occupations.empty()) throw ComputationError("no occupation with usable records");
  double sum = 0.0;
  for (const auto& o : occupations) sum += f(o);
  return sum / static_cast<double>(occupations.size());
}

const std::array<std::pair<Axis, std::string_view>, 3> kGenAxes = {{
    {Axis::kGender, "gender"}, {Axis::kAge, "age"}, {Axis::kSkin, "skin"}}};

void ExtractGeneration(const std::vector<GenerationRecord>& records, const std::string& model,
                       const EvaluationInputs& in, const HyperParams& hp,
                       RegionSelection regions, ModelInput& out) {
  std::vector<GenerationRecord> neutral;
  for (const auto& r : records) {
    if (r.prompt_kind == PromptKind::kNeutral) neutral.push_back(r);
  }
  auto any = [](const Occupation&) { return true; };

  if (!neutral.empty()) {
    GranularMetricVector ifs{Dimension::kIfsGen, {}};
    for (const auto& sel : GroupSelector::All()) {
      TryAdd(ifs, model, RdName(sel), [&] {
        return MeanOverOccupations(neutral, any, [&](const Occupation& o) {
          return RepresentationDisparity(EmpiricalDistribution(neutral, o, sel));
        });
      });
    }
    if (!ifs.entries.empty()) out.granular[Dimension::kIfsGen] = std::move(ifs);

    GranularMetricVector rfs{Dimension::kRfsGen, {}};
    auto add_region = [&](const GroundTruthTable* gt, std::string_view region) {
      if (!gt) return;
      for (const auto& [axis, token] : kGenAxes) {
        if (!gt->HasAxis(axis)) continue;
        const std::string name = fmt::format("JSD_{}_{}", region, token);
        TryAdd(rfs, model, name, [&] {
          return MeanOverOccupations(
              neutral, [&](const Occupation& o) { return gt->Contains(o.name()); },
              [&](const Occupation& o) {
                auto p = EmpiricalDistribution(neutral, o, GroupSelector::Single(axis));
                return JsDivergenceSquared(p, gt->Distribution(o.name(), axis), hp.jsd);
              });
        });
      }
    };
    if (regions != RegionSelection::kEU) add_region(in.us, "US");
    if (regions != RegionSelection::kUS) add_region(in.eu, "EU");
    if (!rfs.entries.empty()) out.granular[Dimension::kRfsGen] = std::move(rfs);
  }

  GranularMetricVector bis{Dimension::kBisGen, {}};
  TryAdd(bis, model, "Penalty_\xCE\x94GSR", [&] {
    return DeltaGsr(GenerationSuccessRate(records, PromptKind::kStereotypical),
                    GenerationSuccessRate(records, PromptKind::kCounterStereotypical));
  });
  for (QualityKey key : kQualityKeys) {
    std::vector<double> stereo;
    std::vector<double> counter;
    for (const auto& r : records) {
      auto v = r.quality.Get(key);
      if (!v) continue;
      if (r.prompt_kind == PromptKind::kStereotypical) stereo.push_back(*v);
      if (r.prompt_kind == PromptKind::kCounterStereotypical) counter.push_back(*v);
    }
    std::string name = "Penalty_";
    for (char c : ToString(key)) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (stereo.empty() || counter.empty()) {
      if (!stereo.empty() || !counter.empty()) {
        Warn(fmt::format("model '{}': {} needs scores for both prompt kinds; skipped", model,
                         name));
      }
      continue;
    }
    bis.entries.push_back({name, DegradationPenalty(stereo, counter).penalty});
  }
  if (!bis.entries.empty()) out.granular[Dimension::kBisGen] = std::move(bis);
}

void ExtractUnderstanding(const std::vector<UnderstandingRecord>& records,
                          const std::vector<TournamentTally>& tallies, const std::string& model,
                          const EvaluationInputs& in, const HyperParams& hp,
                          RegionSelection regions, ModelInput& out) {
  const bool has_unpaired = std::any_of(records.begin(), records.end(),
                                        [](const auto& r) { return !r.IsPaired(); });
  if (has_unpaired) {
    GranularMetricVector ifs{Dimension::kIfsUnd, {}};
    std::vector<std::vector<GroupOutcome>> outcomes;
    for (const auto& sel : GroupSelector::All()) outcomes.push_back(BuildGroupOutcomes(records, sel));
    const auto& all = GroupSelector::All();
    for (std::size_t i = 0; i < all.size(); ++i) {
      TryAdd(ifs, model, "AD_" + LevelName(all[i]),
             [&] { return AccuracyDisparity(outcomes[i], hp.n_min); });
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      TryAdd(ifs, model, "SPD_" + LevelName(all[i]),
             [&] { return StatisticalParityDifference(outcomes[i], hp.n_min); });
    }
    if (!ifs.entries.empty()) out.granular[Dimension::kIfsUnd] = std::move(ifs);
  }

  GranularMetricVector rfs{Dimension::kRfsUnd, {}};
  const std::vector<std::pair<const GroundTruthTable*, std::string_view>> region_list = [&] {
    std::vector<std::pair<const GroundTruthTable*, std::string_view>> v;
    if (regions != RegionSelection::kEU && in.us) v.emplace_back(in.us, "US");
    if (regions != RegionSelection::kUS && in.eu) v.emplace_back(in.eu, "EU");
    return v;
  }();
  if (!tallies.empty()) {
    for (const auto& [gt, region] : region_list) {
      for (const auto& [axis, token] : kGenAxes) {
        if (!gt->HasAxis(axis)) continue;
        const std::string name = axis == Axis::kSkin ? fmt::format("JSD_skin_tone_{}", region)
                                                     : fmt::format("JSD_{}_{}", token, region);
        TryAdd(rfs, model, name, [&] {
          auto demo = TournamentDemographics(tallies, axis, hp.tournament_prior);
          double sum = 0.0;
          std::size_t n = 0;
          for (const auto& [occ, dist] : demo) {
            if (!gt->Contains(occ)) continue;
            sum += JsDivergenceSquared(dist, gt->Distribution(occ, axis), hp.jsd);
            ++n;
          }
          if (n == 0) throw ComputationError("no tournament occupation in the ground truth");
          return sum / static_cast<double>(n);
        });
      }
    }
  }
  if (has_unpaired) {
    const auto errors = CollectErrorCases(records);
    for (const auto& [gt, region] : region_list) {
      std::vector<ErrorCase> usable;
      for (const auto& e : errors) {
        if (gt->Contains(e.true_occupation) && gt->Contains(e.predicted_occupation)) {
          usable.push_back(e);
        }
      }
      const std::array<std::pair<Axis, std::size_t>, 5> cells = {{
          {Axis::kGender, 1}, {Axis::kGender, 0}, {Axis::kAge, 0}, {Axis::kAge, 1},
          {Axis::kAge, 2}}};
      for (const auto& [axis, category] : cells) {
        const std::string name = fmt::format("AbsSDS_{}_{}_{}", ToString(axis),
                                             CellToken(axis, category), region);
        TryAdd(rfs, model, name,
               [&] { return std::abs(StereotypeDrift(usable, axis, category, *gt)); });
      }
    }
  }
  // Canonical order interleaves JSD (tournament) and SDS (records) by region.
  const auto& tax = MetricTaxonomy::Canonical();
  std::stable_sort(rfs.entries.begin(), rfs.entries.end(), [&](const auto& a, const auto& b) {
    return *tax.Find(a.name) < *tax.Find(b.name);
  });
  if (!rfs.entries.empty()) out.granular[Dimension::kRfsUnd] = std::move(rfs);

  const auto pairs = BuildCounterfactualPairs(records);
  if (!pairs.empty()) {
    GranularMetricVector bis{Dimension::kBisUnd, {}};
    std::vector<std::vector<CounterfactualPair>> by_selector;
    for (const auto& sel : GroupSelector::All()) {
      std::vector<CounterfactualPair> subset;
      for (const auto& p : pairs) {
        if (p.varied == sel) subset.push_back(p);
      }
      by_selector.push_back(std::move(subset));
    }
    const auto& all = GroupSelector::All();
    for (std::size_t i = 0; i < all.size(); ++i) {
      TryAdd(bis, model, "ac_diff_" + all[i].Name(), [&] {
        if (by_selector[i].empty()) throw ComputationError("no pairs vary exactly these axes");
        return AnswerConsistencyDifference(by_selector[i]);
      });
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      TryAdd(bis, model, "dhr_inconsistency_" + all[i].Name(), [&] {
        if (by_selector[i].empty()) throw ComputationError("no pairs vary exactly these axes");
        return DhrInconsistency(by_selector[i]);
      });
    }
    if (!bis.entries.empty()) out.granular[Dimension::kBisUnd] = std::move(bis);
  }
}

}  // namespace

std::string_view ToString(RegionSelection r) {
  switch (r) {
    case RegionSelection::kUS: return "us";
    case RegionSelection::kEU: return "eu";
    case RegionSelection::kBoth: return "both";
  }
  return "?";
}

std::optional<RegionSelection> ParseRegionSelection(std::string_view token) {
  std::string t;
  for (char c : token) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "us") return RegionSelection::kUS;
  if (t == "eu") return RegionSelection::kEU;
  if (t == "both") return RegionSelection::kBoth;
  return std::nullopt;
}

std::map<std::string, ProbabilityVector> TournamentDemographics(
    const std::vector<TournamentTally>& tallies, Axis axis, TournamentPrior prior) {
  std::set<std::string> support_set;
  for (const auto& t : tallies) {
    for (const auto& [occ, wins] : t.win_counts) {
      if (wins > 0) support_set.insert(occ);
    }
  }
  const std::vector<std::string> support(support_set.begin(), support_set.end());

  // Tallies for one profile are merged.
  std::map<AttributeProfile, TournamentTally> merged;
  for (const auto& t : tallies) {
    auto& m = merged[t.profile];
    m.model_id = t.model_id;
    m.profile = t.profile;
    m.refusals += t.refusals;
    for (const auto& [occ, wins] : t.win_counts) m.win_counts[occ] += wins;
  }

  ConditionalTable likelihood;
  std::vector<std::string> conditions;
  std::vector<double> prior_weights;
  std::map<std::string, AttributeProfile> profile_of;
  for (const auto& [profile, tally] : merged) {
    double total = 0.0;
    for (const auto& [occ, wins] : tally.win_counts) total += static_cast<double>(wins);
    if (total <= 0.0) {
      Warn(fmt::format("tournament profile {} has no wins; excluded", ProfileLabel(profile)));
      continue;
    }
    const std::string label = ProfileLabel(profile);
    likelihood.emplace(label, AggregateTournament(tally, support));
    conditions.push_back(label);
    prior_weights.push_back(prior == TournamentPrior::kUniform ? 1.0 : total);
    profile_of.emplace(label, profile);
  }
  if (conditions.empty()) throw ComputationError("tournament has no wins");

  const auto inversion =
      BayesInvert(likelihood, ProbabilityVector::FromWeights(conditions, prior_weights));

  std::map<std::string, ProbabilityVector> out;
  for (const auto& [occ, posterior] : inversion.posterior) {
    std::vector<double> mass(Cardinality(axis), 0.0);
    for (std::size_t i = 0; i < posterior.size(); ++i) {
      mass[profile_of.at(posterior.labels()[i]).Category(axis)] += posterior[i];
    }
    out.emplace(occ, ProbabilityVector::FromWeights(AxisLabels(axis), mass));
  }
  return out;
}

std::vector<ModelInput> ExtractGranular(const EvaluationInputs& inputs, const HyperParams& hp,
                                        RegionSelection regions) {
  std::vector<std::string> models;
  auto note = [&](const std::string& id) {
    if (std::find(models.begin(), models.end(), id) == models.end()) models.push_back(id);
  };
  for (const auto& r : inputs.generation) note(r.model_id);
  for (const auto& r : inputs.understanding) note(r.model_id);
  for (const auto& t : inputs.tournament) note(t.model_id);

  // Models are independent; each runs on its own thread.
  std::vector<std::future<ModelInput>> pending;
  for (const auto& model : models) {
    pending.push_back(std::async(std::launch::async, [&inputs, &hp, regions, model] {
      ModelInput mi;
      mi.model_id = model;
      const auto gen = OfModel(inputs.generation, model);
      if (!gen.empty()) ExtractGeneration(gen, model, inputs, hp, regions, mi);
      const auto und = OfModel(inputs.understanding, model);
      const auto tallies = OfModel(inputs.tournament, model);
      if (!und.empty() || !tallies.empty()) {
        ExtractUnderstanding(und, tallies, model, inputs, hp, regions, mi);
      }
      return mi;
    }));
  }
  std::vector<ModelInput> out;
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

}  // namespace iris
