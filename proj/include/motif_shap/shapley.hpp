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

// Motif explanation scores over the coalition lattice.
//
// For a graph G, black-box B and motifs M, the score of motif i is
//
//   xi_i = sum_{S ⊆ M \ {i}} w(|S|) * (B(G_S) - B(G_{S ∪ {i}}))
//
// where G_S is G with the motifs in S masked. Lattice nodes are identified by
// the bitmask of masked motifs; bit k stands for motifs[k].

#ifndef MOTIF_SHAP_SHAPLEY_HPP_
#define MOTIF_SHAP_SHAPLEY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "motif_shap/blackbox.hpp"
#include "motif_shap/graph.hpp"
#include "motif_shap/masking.hpp"

namespace motif_shap {

enum class Weighting {
  // |S|! (|M| - |S| - 1)! / |M|!, the Shapley kernel.
  kClassic,
  // 1 / ((|M| + 1) * C(|M| + 1, |S|)).
  kPaperInverse,
  // C(|M| + 1, |S|).
  kPaperDirect,
};

std::string_view WeightingName(Weighting w);
// "classic", "paper" (inverse coefficient) or "paper-direct".
Weighting ParseWeighting(std::string_view name);

// Weight of a marginal term whose masked set has `masked` motifs.
double CoalitionWeight(Weighting w, std::size_t n_motifs, std::size_t masked);

// Distinct black-box evaluations needed: 2^n for the exact lattice (nullopt),
// sum_{k=0..d} C(n, k) for depth d. Saturates at UINT64_MAX.
std::uint64_t QueryBudget(std::size_t n_motifs,
                          std::optional<std::size_t> depth);

struct ExplainOptions {
  Weighting weighting = Weighting::kClassic;
  // Largest motif count accepted by ExactExplain. Depth-limited runs are held
  // to the same number of evaluations, 2^exact_limit.
  std::size_t exact_limit = 20;
  // 0 selects DefaultWorkerCount(). Only concurrency-safe black-boxes are
  // queried from several threads.
  std::size_t threads = 0;
  // Coalitions are materialized and evaluated in chunks of this size.
  std::size_t batch_size = 4096;
  // Evaluate each distinct masked graph once even when several coalitions
  // produce it. Off by default so that query counts equal QueryBudget.
  bool dedup_masked_graphs = false;
  // Depth-limited runs only: rescale scores so they sum to B(G) - B(G_M).
  // Costs one extra evaluation when B(G) is not already on the lattice.
  bool rescale = false;
};

struct Explanation {
  std::string graph;
  std::vector<std::int64_t> motif_ids;
  std::vector<double> scores;
  MaskKind mask = MaskKind::kToggle;
  Weighting weighting = Weighting::kClassic;
  // nullopt for the exact lattice.
  std::optional<std::size_t> depth;
  std::uint64_t query_count = 0;
  // B(G), when it was evaluated.
  std::optional<double> full_value;
  // B(G_M), the fully masked terminal node.
  double masked_value = 0.0;
};

// Memoized black-box values of a set of lattice nodes.
class CoalitionLattice {
 public:
  CoalitionLattice(const Graph& g, std::span<const Motif> motifs,
                   const MaskingStrategy& strategy);

  // The graph with the motifs of `masked` masked.
  Graph MaskedGraph(std::uint64_t masked) const;

  // Evaluates every node of `masks` that is not yet known. Returns the number
  // of black-box queries issued.
  std::uint64_t Evaluate(BlackBox& b, std::span<const std::uint64_t> masks,
                         const ExplainOptions& options);

  bool Has(std::uint64_t masked) const;
  double Value(std::uint64_t masked) const;
  std::size_t size() const { return values_.size(); }
  std::size_t n_motifs() const { return motifs_.size(); }

 private:
  const Graph& graph_;
  std::span<const Motif> motifs_;
  const MaskingStrategy& strategy_;
  std::vector<std::pair<std::uint64_t, double>> values_;  // sorted by mask
  // Content hash -> (masked graph, value), filled only when deduplicating.
  std::unordered_map<std::uint64_t, std::vector<std::pair<Graph, double>>>
      seen_;
};

// Every lattice node whose masked set has at least n - depth motifs, in
// ascending bitmask order. Requires n <= 63.
std::vector<std::uint64_t> LatticeNodes(std::size_t n_motifs,
                                        std::size_t depth);

// Exact scores over the full lattice. Throws kLatticeTooLarge when
// motifs.size() exceeds options.exact_limit.
Explanation ExactExplain(const Graph& g, BlackBox& b,
                         std::span<const Motif> motifs,
                         const MaskingStrategy& strategy,
                         const ExplainOptions& options = {});

// Keeps only the marginal terms whose masked set S has |S| >= |M| - depth,
// i.e. the lattice edges within `depth` of the fully masked node. depth ==
// |M| reproduces ExactExplain exactly. Throws kInvalidArgument unless
// 1 <= depth <= |M|.
Explanation ApproxExplain(const Graph& g, BlackBox& b,
                          std::span<const Motif> motifs,
                          const MaskingStrategy& strategy, std::size_t depth,
                          const ExplainOptions& options = {});

// Explains every graph of `d`; depth nullopt means exact. Graphs are spread
// over workers when the black-box is concurrency-safe. Output follows the
// dataset order and graph ids are the indices.
std::vector<Explanation> ExplainDataset(const LabeledDataset& d, BlackBox& b,
                                        std::span<const Motif> motifs,
                                        const MaskingStrategy& strategy,
                                        std::optional<std::size_t> depth,
                                        const ExplainOptions& options = {});

// Scores at every depth 1..|M| from one exact lattice; element d-1 holds
// depth d and equals ApproxExplain at that depth (the last one equals
// ExactExplain). Each element reports QueryBudget(|M|, d) as its query count,
// while the lattice itself is evaluated 2^|M| times in total.
std::vector<Explanation> DepthSweep(const Graph& g, BlackBox& b,
                                    std::span<const Motif> motifs,
                                    const MaskingStrategy& strategy,
                                    const ExplainOptions& options = {});

namespace internal {
// Depth-limited scores computed from unmasked-set enumeration, which does not
// need a 64-bit coalition mask. ApproxExplain uses it above 63 motifs.
Explanation SparseApproxExplain(const Graph& g, BlackBox& b,
                                std::span<const Motif> motifs,
                                const MaskingStrategy& strategy,
                                std::size_t depth,
                                const ExplainOptions& options);
}  // namespace internal

}  // namespace motif_shap

#endif  // MOTIF_SHAP_SHAPLEY_HPP_
