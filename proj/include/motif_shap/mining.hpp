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

// Frequent connected motif mining and discriminative motif selection.

#ifndef MOTIF_SHAP_MINING_HPP_
#define MOTIF_SHAP_MINING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "motif_shap/graph.hpp"

namespace motif_shap {

// One bit per graph of a dataset.
class GraphBitset {
 public:
  GraphBitset() = default;
  explicit GraphBitset(std::size_t size)
      : size_(size), words_((size + 63) / 64, 0) {}

  void Set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool Test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  std::size_t Count() const;
  GraphBitset And(const GraphBitset& other) const;
  std::size_t size() const { return size_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct MinerConfig {
  std::size_t support = 25;
  // Largest motif size in edges; at least 2.
  std::size_t max_size = 3;
  // When set, support is counted over graphs with this label only.
  std::optional<int> label = std::nullopt;
  // 0 selects DefaultWorkerCount().
  std::size_t threads = 0;
};

// Every connected edge set with 2 <= |m| <= max_size and support >= s.
// Growth starts from frequent two-edge motifs and extends a motif by a
// frequent two-edge motif that shares exactly one edge with it; by anti-
// monotonicity of support this reaches every frequent connected edge set.
// Output is sorted by size, then by edge list, with ids 0, 1, ...
// Throws kInvalidArgument when s is 0 or exceeds the number of counted graphs
// or when max_size < 2.
std::vector<Motif> Mine(const LabeledDataset& d, const MinerConfig& config);

// |log2((supp_0(m) + 1) / (supp_1(m) + 1))|. Throws kInvalidArgument unless
// both labels occur in `d`.
double CrossSupport(std::span<const Edge> m, const LabeledDataset& d);

struct RankerConfig {
  // Minimum Jaccard distance to every already accepted motif.
  double distance_threshold = 0.5;
  // Minimum motif size in edges.
  std::size_t size_threshold = 3;
  std::size_t k = 10;
};

struct RankedMotif {
  Motif motif;
  double cross_support;
};

// Sorts by cross-support (descending; ties by larger size, then by edge
// list) and greedily accepts motifs of at least size_threshold edges whose
// Jaccard distance to all accepted motifs is >= distance_threshold. Stops
// after k acceptances.
std::vector<RankedMotif> RankAndSelect(std::span<const Motif> motifs,
                                       const LabeledDataset& d,
                                       const RankerConfig& config);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_MINING_HPP_
