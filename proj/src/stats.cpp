/*
 * Copyright 2026 The motif-shap Authors.
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

#include "motif_shap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "motif_shap/error.hpp"
#include "motif_shap/numeric.hpp"
#include "motif_shap/parallel.hpp"
#include "motif_shap/random.hpp"

namespace motif_shap {

double KolmogorovQ(double lambda) {
  if (lambda < 1e-3) return 1.0;
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(a * k * k);
    sum += term;
    if (std::fabs(term) <= 1e-16 * std::fabs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult KolmogorovSmirnov(std::span<const double> a,
                           std::span<const double> b) {
  Require(!a.empty() && !b.empty(), ErrorKind::kInvalidArgument,
          "Kolmogorov-Smirnov needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Step both empirical CDFs past each distinct value before comparing.
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                              static_cast<double>(j) / ny));
  }
  const double ne = nx * ny / (nx + ny);
  const double root = std::sqrt(ne);
  return {d, KolmogorovQ((root + 0.12 + 0.11 / root) * d)};
}

SeparabilityReport Separability(const LabeledDataset& d,
                                const SeparabilityOptions& options) {
  std::vector<std::size_t> rows[2];
  for (std::size_t i = 0; i < d.size(); ++i) rows[d.label(i)].push_back(i);
  if (options.max_graphs_per_class) {
    RandomStream rng(options.seed, Stream::kSubsample);
    for (auto& r : rows) {
      if (r.size() <= *options.max_graphs_per_class) continue;
      rng.Shuffle(r);
      r.resize(*options.max_graphs_per_class);
      std::sort(r.begin(), r.end());
    }
  }
  Require(rows[0].size() >= 2 && rows[1].size() >= 2,
          ErrorKind::kInvalidArgument,
          "separability needs at least two graphs per class");
  std::vector<std::size_t> all;
  all.insert(all.end(), rows[0].begin(), rows[0].end());
  all.insert(all.end(), rows[1].begin(), rows[1].end());
  std::sort(all.begin(), all.end());

  // Row i of the upper triangle holds the pairs (all[i], all[j > i]).
  std::vector<std::vector<double>> distances(all.size());
  ParallelFor(all.size(), options.threads, [&](std::size_t begin,
                                               std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      distances[i].reserve(all.size() - i - 1);
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        distances[i].push_back(JaccardDistance(d.graph(all[i]), d.graph(all[j])));
      }
    }
  });
  std::vector<double> intra;
  std::vector<double> inter;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double dist = distances[i][j - i - 1];
      (d.label(all[i]) == d.label(all[j]) ? intra : inter).push_back(dist);
    }
  }
  const KsResult ks = KolmogorovSmirnov(intra, inter);
  return {ks.statistic, ks.p_value, intra.size(), inter.size()};
}

Matrix ExpectedScores(const InjectionMatrix& injections,
                      std::span<const Motif> motifs,
                      std::span<const double> rho) {
  Require(motifs.size() == rho.size(), ErrorKind::kInvalidArgument,
          "need one perturbation probability per motif");
  Matrix out;
  out.reserve(injections.size());
  for (const auto& row : injections) {
    Require(row.size() == motifs.size(), ErrorKind::kInvalidArgument,
            "injection matrix has " + std::to_string(row.size()) +
                " columns for " + std::to_string(motifs.size()) + " motifs");
    std::vector<double> scores(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      Require(motifs[j].class_sign().has_value(), ErrorKind::kInvalidArgument,
              "motif " + std::to_string(motifs[j].id()) + " has no class");
      scores[j] = row[j] * *motifs[j].class_sign() * rho[j];
    }
    out.push_back(std::move(scores));
  }
  return out;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  Require(x.size() == y.size(), ErrorKind::kInvalidArgument,
          "correlation inputs differ in length");
  Require(x.size() >= 2, ErrorKind::kInvalidArgument,
          "correlation needs at least two points");
  CompensatedSum sx;
  CompensatedSum sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.Add(x[i]);
    sy.Add(y[i]);
  }
  const double mx = sx.value() / static_cast<double>(x.size());
  const double my = sy.value() / static_cast<double>(y.size());
  CompensatedSum sxy;
  CompensatedSum sxx;
  CompensatedSum syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.Add(dx * dy);
    sxx.Add(dx * dx);
    syy.Add(dy * dy);
  }
  Require(sxx.value() > 0.0 && syy.value() > 0.0,
          ErrorKind::kUndefinedCorrelation,
          "correlation is undefined for a constant input");
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> FractionalRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Ranks are 1-based; a tie group shares the mean of its positions.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  Require(x.size() == y.size(), ErrorKind::kInvalidArgument,
          "correlation inputs differ in length");
  const std::vector<double> rx = FractionalRanks(x);
  const std::vector<double> ry = FractionalRanks(y);
  return Pearson(rx, ry);
}

std::vector<GlobalRankEntry> GlobalRanking(
    std::span<const Explanation> explanations) {
  Require(!explanations.empty(), ErrorKind::kInvalidArgument,
          "global ranking needs at least one explanation");
  const auto& ids = explanations.front().motif_ids;
  std::vector<CompensatedSum> abs_sum(ids.size());
  std::vector<CompensatedSum> sum(ids.size());
  for (const Explanation& ex : explanations) {
    Require(ex.motif_ids == ids && ex.scores.size() == ids.size(),
            ErrorKind::kInvalidArgument,
            "explanations do not share a motif set");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      abs_sum[k].Add(std::fabs(ex.scores[k]));
      sum[k].Add(ex.scores[k]);
    }
  }
  const double count = static_cast<double>(explanations.size());
  std::vector<GlobalRankEntry> out(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out[k] = {ids[k], abs_sum[k].value() / count, sum[k].value() / count};
  }
  std::sort(out.begin(), out.end(), [](const GlobalRankEntry& a,
                                       const GlobalRankEntry& b) {
    if (a.mean_abs_score != b.mean_abs_score) {
      return a.mean_abs_score > b.mean_abs_score;
    }
    return a.motif_id < b.motif_id;
  });
  return out;
}

double Quantile(std::vector<double> values, double q) {
  Require(!values.empty(), ErrorKind::kInvalidArgument,
          "quantile of an empty sample");
  Require(q >= 0.0 && q <= 1.0, ErrorKind::kInvalidArgument,
          "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary Summarize(std::span<const double> values) {
  Require(!values.empty(), ErrorKind::kInvalidArgument,
          "summary of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  Summary s;
  s.count = v.size();
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  s.q1 = Quantile(v, 0.25);
  s.median = Quantile(v, 0.5);
  s.q3 = Quantile(v, 0.75);
  CompensatedSum total;
  for (double x : v) total.Add(x);
  s.mean = total.value() / static_cast<double>(v.size());
  return s;
}

std::vector<DepthCorrelation> ApproximationCorrelations(
    const LabeledDataset& d, BlackBox& b, std::span<const Motif> motifs,
    const MaskingStrategy& strategy, const ExplainOptions& options) {
  const std::size_t m = motifs.size();
  std::vector<std::vector<Explanation>> sweeps(d.size());
  auto sweep_one = [&](std::size_t i, const ExplainOptions& opts) {
    sweeps[i] = DepthSweep(d.graph(i), b, motifs, strategy, opts);
  };
  const std::size_t workers =
      options.threads == 0 ? DefaultWorkerCount() : options.threads;
  if (b.concurrency_safe() && workers > 1) {
    ExplainOptions inner = options;
    inner.threads = 1;
    ParallelFor(d.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) sweep_one(i, inner);
    });
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) sweep_one(i, options);
  }

  std::vector<DepthCorrelation> out(m);
  for (std::size_t depth = 1; depth <= m; ++depth) {
    DepthCorrelation& dc = out[depth - 1];
    dc.depth = depth;
    for (const auto& sweep : sweeps) {
      try {
        dc.pearson.push_back(Pearson(sweep[depth - 1].scores, sweep.back().scores));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kUndefinedCorrelation) throw;
        ++dc.undefined;
      }
    }
  }
  return out;
}

}  // namespace motif_shap
