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

#ifndef MOTIF_SHAP_STATS_HPP_
#define MOTIF_SHAP_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "motif_shap/graph.hpp"
#include "motif_shap/shapley.hpp"
#include "motif_shap/synthgen.hpp"

namespace motif_shap {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov survival function Q(λ) = 2 Σ_{k>=1} (-1)^{k-1} exp(-2 k² λ²).
double KolmogorovQ(double lambda);

// Two-sample statistic D = sup |F_a - F_b| with the asymptotic p-value
// Q((√m + 0.12 + 0.11/√m) D), m = n_a n_b / (n_a + n_b). Both samples must be
// nonempty.
KsResult KolmogorovSmirnov(std::span<const double> a, std::span<const double> b);

struct SeparabilityReport {
  double ks_statistic = 0.0;
  double p_value = 1.0;
  std::size_t intra_count = 0;
  std::size_t inter_count = 0;
};

struct SeparabilityOptions {
  // Subsample each class to at most this many graphs (seeded).
  std::optional<std::size_t> max_graphs_per_class;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

// KS comparison of intra-class and inter-class pairwise Jaccard distances.
// Needs at least two graphs per class.
SeparabilityReport Separability(const LabeledDataset& d,
                                const SeparabilityOptions& options = {});

// Entry (i, j) = I[i][j] * sign(M_j) * rho[j]. Every motif needs a class sign.
Matrix ExpectedScores(const InjectionMatrix& injections,
                      std::span<const Motif> motifs,
                      std::span<const double> rho);

// Sample Pearson coefficient. Throws kInvalidArgument on length mismatch or
// fewer than two points and kUndefinedCorrelation on zero variance.
double Pearson(std::span<const double> x, std::span<const double> y);
// Pearson of fractional ranks (ties share their average rank).
double Spearman(std::span<const double> x, std::span<const double> y);
std::vector<double> FractionalRanks(std::span<const double> values);

struct GlobalRankEntry {
  std::int64_t motif_id = 0;
  double mean_abs_score = 0.0;
  double mean_score = 0.0;
};

// Mean |xi| per motif across explanations, descending, ties by motif id.
// All explanations must share the motif list.
std::vector<GlobalRankEntry> GlobalRanking(std::span<const Explanation> explanations);

struct Summary {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Linear-interpolation quantile of a sample; q in [0, 1].
double Quantile(std::vector<double> values, double q);
Summary Summarize(std::span<const double> values);

struct DepthCorrelation {
  std::size_t depth = 0;
  // Pearson(depth-d scores, exact scores) per graph with defined correlation.
  std::vector<double> pearson;
  // Graphs skipped because either score vector had zero variance.
  std::size_t undefined = 0;
};

// Per-graph Pearson correlation between every depth 1..|M| and the exact
// scores, all derived from a single exact lattice per graph.
std::vector<DepthCorrelation> ApproximationCorrelations(
    const LabeledDataset& d, BlackBox& b, std::span<const Motif> motifs,
    const MaskingStrategy& strategy, const ExplainOptions& options = {});

}  // namespace motif_shap

#endif  // MOTIF_SHAP_STATS_HPP_
