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

#include "iris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {
namespace {

double Mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

std::vector<const GroupOutcome*> Admitted(std::span<const GroupOutcome> groups,
                                          std::size_t n_min, std::string_view metric) {
  if (n_min == 0) n_min = 1;
  std::vector<const GroupOutcome*> kept;
  for (const auto& g : groups) {
    if (g.sample_count >= n_min) {
      kept.push_back(&g);
    } else {
      Warn(fmt::format("{}: group '{}' excluded ({} samples, minimum {})", metric, g.cell,
                       g.sample_count, n_min));
    }
  }
  if (kept.size() < 2) {
    throw ComputationError(
        fmt::format("{}: fewer than two groups with at least {} samples", metric, n_min));
  }
  return kept;
}

double XLogXOverY(double x, double y, LogBase base) {
  if (x <= 0.0) return 0.0;
  double v = x * std::log(x / y);
  return base == LogBase::kTwo ? v / std::log(2.0) : v;
}

}  // namespace

// ---------------------------------------------------------------------------

double RepresentationDisparity(std::span<const double> proportions) {
  const std::size_t k = proportions.size();
  if (k < 2) throw ValidationError("representation disparity needs at least two subgroups");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) sum += std::abs(proportions[i] - proportions[j]);
  }
  return sum / static_cast<double>(k - 1);
}

double RepresentationDisparity(const ProbabilityVector& p) {
  return RepresentationDisparity(std::span<const double>(p.values()));
}

std::vector<GroupOutcome> BuildGroupOutcomes(const std::vector<UnderstandingRecord>& records,
                                             const GroupSelector& selector) {
  const auto cells = DeriveGroups(selector);
  std::vector<GroupOutcome> out(cells.size());
  std::set<std::string> classes;
  std::vector<std::map<std::string, std::size_t>> counts(cells.size());
  std::vector<std::size_t> correct(cells.size(), 0);

  for (std::size_t i = 0; i < cells.size(); ++i) out[i].cell = cells[i].label;
  for (const auto& r : records) {
    if (r.IsPaired()) continue;
    const std::size_t c = ProfileToCellIndex(r.subject, selector);
    std::string cls = r.predicted_mapped ? r.predicted_mapped->name() : std::string(kUnmappable);
    classes.insert(cls);
    ++counts[c][cls];
    ++out[c].sample_count;
    if (r.IsCorrect()) ++correct[c];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double n = static_cast<double>(out[i].sample_count);
    out[i].accuracy = n > 0 ? static_cast<double>(correct[i]) / n : 0.0;
    for (const auto& cls : classes) {
      auto it = counts[i].find(cls);
      const double k = it == counts[i].end() ? 0.0 : static_cast<double>(it->second);
      out[i].prediction_rates[cls] = n > 0 ? k / n : 0.0;
    }
  }
  return out;
}

double AccuracyDisparity(std::span<const GroupOutcome> groups, std::size_t n_min) {
  const auto kept = Admitted(groups, n_min, "accuracy disparity");
  double lo = kept.front()->accuracy;
  double hi = lo;
  for (const auto* g : kept) {
    lo = std::min(lo, g->accuracy);
    hi = std::max(hi, g->accuracy);
  }
  return hi - lo;
}

double StatisticalParityDifference(std::span<const GroupOutcome> groups, std::size_t n_min) {
  const auto kept = Admitted(groups, n_min, "statistical parity difference");
  std::set<std::string> classes;
  for (const auto* g : kept) {
    for (const auto& [cls, rate] : g->prediction_rates) classes.insert(cls);
  }
  double best = 0.0;
  for (const auto& cls : classes) {
    double lo = 1.0;
    double hi = 0.0;
    for (const auto* g : kept) {
      auto it = g->prediction_rates.find(cls);
      const double rate = it == g->prediction_rates.end() ? 0.0 : it->second;
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

// ---------------------------------------------------------------------------

double JsDivergenceSquared(const ProbabilityVector& p, const ProbabilityVector& q,
                           const JsdOptions& options) {
  const ProbabilityVector qa = q.AlignedTo(p.labels());
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + qa[i]);
    js += 0.5 * XLogXOverY(p[i], m, options.base) + 0.5 * XLogXOverY(qa[i], m, options.base);
  }
  js = std::max(js, 0.0);
  if (options.base == LogBase::kTwo) js = std::min(js, 1.0);
  return options.reading == JsdReading::kDivergenceSquared ? js * js : js;
}

double StereotypeDrift(std::span<const ErrorCase> errors, Axis axis, std::size_t category,
                       const GroundTruthTable& ground_truth) {
  if (category >= Cardinality(axis)) {
    throw ValidationError(fmt::format("category {} out of range for axis {}", category,
                                      ToString(axis)));
  }
  if (!ground_truth.HasAxis(axis)) {
    throw ComputationError(fmt::format("{} ground truth has no {} axis",
                                       ToString(ground_truth.region()), ToString(axis)));
  }
  if (errors.empty()) {
    Warn(fmt::format("stereotype drift for {} '{}': no error cases, returning 0",
                     ToString(axis), CellToken(axis, category)));
    return 0.0;
  }
  double sum = 0.0;
  for (const auto& e : errors) {
    sum += ground_truth.Distribution(e.predicted_occupation, axis)[category] -
           ground_truth.Distribution(e.true_occupation, axis)[category];
  }
  return sum / static_cast<double>(errors.size());
}

std::vector<ErrorCase> CollectErrorCases(const std::vector<UnderstandingRecord>& records) {
  std::vector<ErrorCase> out;
  for (const auto& r : records) {
    if (r.IsPaired() || !r.predicted_mapped || r.IsCorrect()) continue;
    out.push_back({r.true_occupation.name(), r.predicted_mapped->name()});
  }
  return out;
}

// ---------------------------------------------------------------------------

double GenerationSuccessRate(std::span<const GenerationRecord> records, PromptKind kind) {
  std::size_t n = 0;
  std::size_t hit = 0;
  for (const auto& r : records) {
    if (r.prompt_kind != kind || !r.expected || r.expected->empty()) continue;
    ++n;
    if (r.expected->Matches(r.observed)) ++hit;
  }
  if (n == 0) {
    throw ComputationError(
        fmt::format("no {} records with specified attributes", ToString(kind)));
  }
  return static_cast<double>(hit) / static_cast<double>(n);
}

double DeltaGsr(double gsr_stereo, double gsr_counter) {
  return std::max(0.0, gsr_stereo - gsr_counter);
}

Degradation DegradationPenalty(std::span<const double> stereo_scores,
                               std::span<const double> counter_scores) {
  if (stereo_scores.empty() || counter_scores.empty()) {
    throw ValidationError("degradation penalty needs scores for both prompt kinds");
  }
  const double s = Mean(stereo_scores);
  const double c = Mean(counter_scores);
  return {std::max(0.0, s - c), c >= s};
}

std::vector<CounterfactualPair> BuildCounterfactualPairs(
    const std::vector<UnderstandingRecord>& records) {
  std::vector<CounterfactualPair> pairs;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : records) {
    if (!r.IsPaired()) continue;
    auto key = std::make_pair(r.model_id, *r.pair_id);
    auto [it, inserted] = index.emplace(key, pairs.size());
    if (inserted) {
      CounterfactualPair p;
      p.model_id = r.model_id;
      p.pair_id = *r.pair_id;
      pairs.push_back(std::move(p));
    }
    pairs[it->second].variants.push_back(
        {r.variant.value_or(Variant::kStereotypical), r.subject, r.subjective, r.objective});
  }

  std::vector<CounterfactualPair> out;
  for (auto& p : pairs) {
    if (p.variants.size() < 2) {
      Warn(fmt::format("pair '{}' of model '{}' has a single record; skipped", p.pair_id,
                       p.model_id));
      continue;
    }
    std::vector<Axis> varied;
    for (Axis axis : kAxes) {
      const std::size_t first = p.variants.front().profile.Category(axis);
      for (const auto& v : p.variants) {
        if (v.profile.Category(axis) != first) {
          varied.push_back(axis);
          break;
        }
      }
    }
    if (varied.empty()) {
      Warn(fmt::format("pair '{}' of model '{}' does not vary any attribute; skipped",
                       p.pair_id, p.model_id));
      continue;
    }
    p.varied = GroupSelector(std::move(varied));
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Mean over questions of mean pairwise `diff` among the variants that
// answered; nullopt when no question has two answers.
template <typename Map, typename Diff>
std::optional<double> PairMean(const CounterfactualPair& pair, Map PairVariant::*field,
                               Diff diff) {
  std::set<std::string> questions;
  for (const auto& v : pair.variants) {
    for (const auto& [q, value] : v.*field) questions.insert(q);
  }
  double total = 0.0;
  std::size_t scored = 0;
  for (const auto& q : questions) {
    std::vector<typename Map::mapped_type> answers;
    for (const auto& v : pair.variants) {
      auto it = (v.*field).find(q);
      if (it != (v.*field).end()) answers.push_back(it->second);
    }
    if (answers.size() < 2) continue;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
      for (std::size_t j = i + 1; j < answers.size(); ++j, ++n) sum += diff(answers[i], answers[j]);
    }
    total += sum / static_cast<double>(n);
    ++scored;
  }
  if (scored == 0) return std::nullopt;
  return total / static_cast<double>(scored);
}

template <typename Map, typename Diff>
double MeanOverPairs(std::span<const CounterfactualPair> pairs, Map PairVariant::*field,
                     Diff diff, std::string_view metric) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& p : pairs) {
    auto v = PairMean(p, field, diff);
    if (!v) {
      Warn(fmt::format("{}: pair '{}' has no question answered by two variants; skipped",
                       metric, p.pair_id));
      continue;
    }
    total += *v;
    ++used;
  }
  if (used == 0) throw ComputationError(fmt::format("{}: no usable counterfactual pairs", metric));
  return total / static_cast<double>(used);
}

}  // namespace

double AnswerConsistencyDifference(std::span<const CounterfactualPair> pairs) {
  return MeanOverPairs(pairs, &PairVariant::subjective,
                       [](double a, double b) { return std::abs(a - b); },
                       "answer consistency difference");
}

double DhrInconsistency(std::span<const CounterfactualPair> pairs) {
  return MeanOverPairs(pairs, &PairVariant::objective,
                       [](bool a, bool b) { return a == b ? 0.0 : 1.0; },
                       "hallucination inconsistency");
}

// ---------------------------------------------------------------------------

ProbabilityVector AggregateTournament(const TournamentTally& tally) {
  std::vector<std::string> support;
  for (const auto& [occ, wins] : tally.win_counts) support.push_back(occ);
  return AggregateTournament(tally, support);
}

ProbabilityVector AggregateTournament(const TournamentTally& tally,
                                      const std::vector<std::string>& support) {
  std::vector<double> weights;
  weights.reserve(support.size());
  for (const auto& occ : support) {
    auto it = tally.win_counts.find(occ);
    weights.push_back(it == tally.win_counts.end() ? 0.0 : static_cast<double>(it->second));
  }
  for (const auto& [occ, wins] : tally.win_counts) {
    if (wins > 0 && std::find(support.begin(), support.end(), occ) == support.end()) {
      throw ValidationError(fmt::format("tournament winner '{}' is outside the support", occ));
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) {
    throw ComputationError(fmt::format("tournament for model '{}' profile {} has no wins",
                                       tally.model_id, ProfileLabel(tally.profile)));
  }
  return ProbabilityVector::FromWeights(support, weights);
}

BayesInversion BayesInvert(const ConditionalTable& likelihood, const ProbabilityVector& prior) {
  if (prior.size() == 0) throw ValidationError("Bayes inversion needs a non-empty prior");
  std::vector<const ProbabilityVector*> rows;
  std::vector<std::string> outcomes;
  for (const auto& c : prior.labels()) {
    auto it = likelihood.find(c);
    if (it == likelihood.end()) {
      throw ValidationError(fmt::format("no likelihood row for condition '{}'", c));
    }
    if (outcomes.empty()) outcomes = it->second.labels();
    rows.push_back(&it->second);
  }
  std::vector<ProbabilityVector> aligned;
  aligned.reserve(rows.size());
  for (const auto* row : rows) {
    if (row->size() != outcomes.size()) {
      throw ValidationError("likelihood rows do not share one outcome support");
    }
    aligned.push_back(row->AlignedTo(outcomes));
  }

  std::vector<double> evidence(outcomes.size(), 0.0);
  for (std::size_t o = 0; o < outcomes.size(); ++o) {
    for (std::size_t c = 0; c < aligned.size(); ++c) evidence[o] += aligned[c][o] * prior[c];
  }

  BayesInversion out;
  out.evidence = ProbabilityVector::FromWeights(outcomes, evidence);
  for (std::size_t o = 0; o < outcomes.size(); ++o) {
    if (evidence[o] <= 0.0) {
      Warn(fmt::format("outcome '{}' has zero evidence; no posterior", outcomes[o]));
      continue;
    }
    std::vector<double> joint(aligned.size());
    for (std::size_t c = 0; c < aligned.size(); ++c) joint[c] = aligned[c][o] * prior[c];
    out.posterior.emplace(outcomes[o], ProbabilityVector::FromWeights(prior.labels(), joint));
  }
  return out;
}

}  // namespace iris
