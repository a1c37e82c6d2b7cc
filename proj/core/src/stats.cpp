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

#include "iris/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "iris/error.hpp"
#include "iris/log.hpp"

namespace iris {
namespace {

double Mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void RequireSameLength(std::span<const double> x, std::span<const double> y, std::size_t min) {
  if (x.size() != y.size()) {
    throw ValidationError(fmt::format("length mismatch ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < min) throw ValidationError(fmt::format("need at least {} observations", min));
}

double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ComputationError("incomplete beta continued fraction did not converge");
}

}  // namespace

// ---------------------------------------------------------------------------

ScoreMatrix::ScoreMatrix(std::vector<std::string> rows, std::vector<std::string> columns,
                         std::vector<std::vector<double>> values)
    : rows_(std::move(rows)), columns_(std::move(columns)), values_(std::move(values)) {
  if (values_.size() != rows_.size()) {
    throw ValidationError(fmt::format("score matrix has {} row names but {} rows", rows_.size(),
                                      values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].size() != columns_.size()) {
      throw ValidationError(fmt::format("score matrix row '{}' has {} values, expected {}",
                                        rows_[i], values_[i].size(), columns_.size()));
    }
    for (double v : values_[i]) {
      if (!std::isfinite(v)) {
        throw ValidationError(fmt::format("score matrix row '{}' has a non-finite value", rows_[i]));
      }
    }
  }
}

std::vector<double> ScoreMatrix::Column(std::size_t column) const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& row : values_) out.push_back(row.at(column));
  return out;
}

std::vector<double> ScoreMatrix::Column(const std::string& name) const {
  auto j = FindColumn(name);
  if (!j) throw ValidationError("no column '" + name + "'");
  return Column(*j);
}

std::optional<std::size_t> ScoreMatrix::FindColumn(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

ScoreMatrix ScoreMatrix::Select(const std::vector<std::string>& columns) const {
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    auto j = FindColumn(c);
    if (!j) throw ValidationError("no column '" + c + "'");
    idx.push_back(*j);
  }
  std::vector<std::vector<double>> values;
  for (const auto& row : values_) {
    std::vector<double> r;
    for (auto j : idx) r.push_back(row[j]);
    values.push_back(std::move(r));
  }
  return ScoreMatrix(rows_, columns, std::move(values));
}

double SampleVariance(std::span<const double> xs) {
  if (xs.size() < 2) throw ValidationError("sample variance needs at least two values");
  const double m = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double CronbachAlpha(const ScoreMatrix& m) {
  const std::size_t k = m.column_count();
  if (k < 2) throw ValidationError("Cronbach's alpha needs at least two items");
  if (m.row_count() < 2) throw ValidationError("Cronbach's alpha needs at least two observations");
  double item_var = 0.0;
  for (std::size_t j = 0; j < k; ++j) item_var += SampleVariance(m.Column(j));
  std::vector<double> totals(m.row_count(), 0.0);
  for (std::size_t i = 0; i < m.row_count(); ++i) {
    for (std::size_t j = 0; j < k; ++j) totals[i] += m.At(i, j);
  }
  const double total_var = SampleVariance(totals);
  if (total_var <= 0.0) throw ComputationError("Cronbach's alpha undefined: zero total variance");
  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - item_var / total_var);
}

double PearsonR(std::span<const double> x, std::span<const double> y) {
  RequireSameLength(x, y, 2);
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw ComputationError("correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double CorrelationPValue(double r, std::size_t n) {
  if (n < 3) throw ValidationError("p-value needs at least three observations");
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  return StudentTTwoSided(t, df);
}

CorrelationTest SpearmanRho(std::span<const double> x, std::span<const double> y) {
  RequireSameLength(x, y, 3);
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double rho = PearsonR(rx, ry);
  return {rho, CorrelationPValue(rho, x.size())};
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoSided(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("t distribution needs df > 0");
  if (std::isnan(t)) throw ValidationError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(0.5 * df, 0.5, df / (df + t * t));
}

double StudentTCdf(double t, double df) {
  const double tail = 0.5 * StudentTTwoSided(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

WelchResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ComputationError("Welch's test needs two values per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = SampleVariance(a) / na;
  const double vb = SampleVariance(b) / nb;
  const double diff = Mean(a) - Mean(b);
  const double se2 = va + vb;
  if (se2 <= 0.0) {
    const double df = na + nb - 2.0;
    if (diff == 0.0) return {0.0, df, 1.0};
    return {std::copysign(std::numeric_limits<double>::infinity(), diff), df, 0.0};
  }
  const double t = diff / std::sqrt(se2);
  const double df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  return {t, df, StudentTTwoSided(t, df)};
}

CorrelationMatrix DimensionCorrelationMatrix(const ScoreMatrix& scores, CorrelationKind kind) {
  CorrelationMatrix out;
  out.kind = kind;
  out.labels = scores.columns();
  const std::size_t k = scores.column_count();
  out.values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto x = scores.Column(i);
      const auto y = scores.Column(j);
      const double r = kind == CorrelationKind::kPearson ? PearsonR(x, y) : SpearmanRho(x, y).rho;
      out.values[i][j] = out.values[j][i] = r;
    }
  }
  return out;
}

ScoreMatrix DimensionScoreMatrix(const std::vector<IrisResult>& results) {
  std::vector<std::string> rows;
  std::vector<std::vector<double>> values;
  for (const auto& r : results) {
    if (r.dimensions.size() != kDimensionCount) continue;
    rows.push_back(r.model_id);
    std::vector<double> row;
    for (Dimension d : kDimensions) row.push_back(r.dimensions.at(d).score);
    values.push_back(std::move(row));
  }
  std::vector<std::string> columns;
  for (Dimension d : kDimensions) columns.emplace_back(ToString(d));
  return ScoreMatrix(std::move(rows), std::move(columns), std::move(values));
}

// ---------------------------------------------------------------------------

std::string Perturbation::Label() const {
  std::string target = dimension ? std::string(ToString(*dimension))
                                 : (metric.empty() ? std::string("all") : metric);
  return fmt::format("{}*{}", target, factor);
}

std::vector<std::vector<double>> CanonicalDeviations(const std::vector<ModelInput>& models,
                                                     const HyperParams& hp) {
  std::vector<std::vector<double>> out;
  for (const auto& m : models) {
    std::vector<double> row;
    for (Dimension d : kDimensions) {
      auto it = m.granular.find(d);
      if (it == m.granular.end() || !it->second.complete()) {
        throw ValidationError(fmt::format("model '{}' lacks complete {} granular values",
                                          m.model_id, ToString(d)));
      }
      for (const auto& e : Normalize(it->second, hp).entries) row.push_back(e.value);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> WeightedOverallScores(const std::vector<std::vector<double>>& deviations,
                                          std::span<const double> weights,
                                          const HyperParams& hp) {
  std::vector<double> totals;
  for (const auto& row : deviations) {
    if (row.size() != weights.size()) throw ValidationError("weight count does not match entries");
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) sum += (weights[i] * row[i]) * (weights[i] * row[i]);
    totals.push_back(std::sqrt(sum));
  }
  const double s_tot = hp.s_tot ? *hp.s_tot : Calibrate(Median(totals), hp.k_tot, hp.calibration_target);
  std::vector<double> scores;
  for (double d : totals) scores.push_back(DecayScore(d, hp.k_tot, s_tot));
  return scores;
}

namespace {

// Spearman agreement that stays defined when a score vector is all ties:
// identical rankings agree fully, a collapsed ranking shares no order.
CorrelationTest RankAgreement(std::span<const double> baseline, std::span<const double> other,
                              std::string_view label) {
  if (AverageRanks(baseline) == AverageRanks(other)) return {1.0, 0.0};
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(baseline) || constant(other)) {
    Warn(fmt::format("{}: every model tied, rank correlation set to 0", label));
    return {0.0, 1.0};
  }
  return SpearmanRho(baseline, other);
}

}  // namespace

std::vector<LooEntry> LooSensitivity(const std::vector<ModelInput>& models, const HyperParams& hp) {
  if (models.size() < 3) throw ValidationError("sensitivity analysis needs at least three models");
  const auto dev = CanonicalDeviations(models, hp);
  const auto& metrics = MetricTaxonomy::Canonical().metrics();
  std::vector<double> weights(metrics.size(), 1.0);
  const auto baseline = WeightedOverallScores(dev, weights, hp);
  std::vector<LooEntry> out;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    weights[i] = 0.0;
    const auto t = RankAgreement(baseline, WeightedOverallScores(dev, weights, hp),
                                 metrics[i].name);
    weights[i] = 1.0;
    out.push_back({metrics[i].name, t.rho, t.p_value});
  }
  return out;
}

std::vector<PerturbationEntry> WeightPerturbation(const std::vector<ModelInput>& models,
                                                  const HyperParams& hp,
                                                  const std::vector<Perturbation>& perturbations) {
  if (models.size() < 3) throw ValidationError("sensitivity analysis needs at least three models");
  const auto dev = CanonicalDeviations(models, hp);
  const auto& taxonomy = MetricTaxonomy::Canonical();
  const std::vector<double> ones(taxonomy.size(), 1.0);
  const auto baseline = WeightedOverallScores(dev, ones, hp);
  std::vector<PerturbationEntry> out;
  for (const auto& p : perturbations) {
    if (!(p.factor >= 0.0)) throw ValidationError("perturbation factor must be non-negative");
    std::vector<double> w = ones;
    for (std::size_t i = 0; i < taxonomy.size(); ++i) {
      const auto& spec = taxonomy.metrics()[i];
      const bool hit = p.dimension ? spec.dimension == *p.dimension
                                   : (p.metric.empty() || taxonomy.Find(p.metric) == i);
      if (hit) w[i] = p.factor;
    }
    if (!p.dimension && !p.metric.empty() && !taxonomy.Find(p.metric)) {
      throw ValidationError("unknown metric '" + p.metric + "' in perturbation");
    }
    const auto t = RankAgreement(baseline, WeightedOverallScores(dev, w, hp), p.Label());
    out.push_back({p.Label(), t.rho, t.p_value});
  }
  return out;
}

std::vector<Perturbation> DimensionPerturbations(double fraction) {
  std::vector<Perturbation> out;
  for (Dimension d : kDimensions) {
    out.push_back({d, {}, 1.0 + fraction});
    out.push_back({d, {}, 1.0 - fraction});
  }
  return out;
}

}  // namespace iris
