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

// Graphs over a fixed, shared node universe. Node i denotes the same entity in
// every graph of a dataset, so subgraph matching reduces to matching edge ids.

#ifndef MOTIF_SHAP_GRAPH_HPP_
#define MOTIF_SHAP_GRAPH_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace motif_shap {

using NodeId = std::uint32_t;

// Undirected edge in canonical orientation (u < v).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  // Canonicalizes the orientation; throws kInvalidArgument on self-loops.
  static Edge Make(NodeId a, NodeId b);

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Sorted, duplicate-free list of canonical edges.
using EdgeList = std::vector<Edge>;

// Sorts and deduplicates in place.
void Canonicalize(EdgeList& edges);
bool IsCanonical(std::span<const Edge> edges);

EdgeList EdgeUnion(std::span<const Edge> a, std::span<const Edge> b);
EdgeList EdgeIntersection(std::span<const Edge> a, std::span<const Edge> b);
EdgeList EdgeDifference(std::span<const Edge> a, std::span<const Edge> b);
EdgeList EdgeSymmetricDifference(std::span<const Edge> a,
                                 std::span<const Edge> b);
bool IsSubset(std::span<const Edge> sub, std::span<const Edge> super);
std::size_t IntersectionSize(std::span<const Edge> a, std::span<const Edge> b);

// Number of unordered node pairs, n(n-1)/2.
std::size_t PairCount(std::size_t n);
// Position of `e` in the row-major enumeration of all node pairs of K_n.
std::size_t PairIndex(std::size_t n, Edge e);
Edge PairAt(std::size_t n, std::size_t index);

class Graph {
 public:
  Graph() = default;
  // Unweighted graph. Edges are canonicalized; out-of-range endpoints throw.
  Graph(std::size_t n, EdgeList edges);
  // Weighted graph; `weights[i]` belongs to `edges[i]` before sorting.
  // Duplicate edges must agree on their weight.
  Graph(std::size_t n, EdgeList edges, std::vector<double> weights);

  std::size_t n() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool weighted() const { return !weights_.empty(); }
  // Empty for unweighted graphs.
  std::span<const double> weights() const { return weights_; }
  double weight_at(std::size_t i) const {
    return weights_.empty() ? 1.0 : weights_[i];
  }

  bool Contains(Edge e) const;
  // 0 when absent, 1 when present in an unweighted graph.
  double Weight(Edge e) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  EdgeList edges_;
  std::vector<double> weights_;
};

class Motif {
 public:
  // Throws kInvalidArgument unless `edges` is nonempty and connected.
  Motif(std::int64_t id, EdgeList edges,
        std::optional<int> class_sign = std::nullopt);

  std::int64_t id() const { return id_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  // -1 (predictive of class 0), +1 (class 1), or unset.
  std::optional<int> class_sign() const { return class_sign_; }
  NodeId max_node() const;

  friend bool operator==(const Motif&, const Motif&) = default;

 private:
  std::int64_t id_;
  EdgeList edges_;
  std::optional<int> class_sign_;
};

// Maps a class label {0,1} to a class sign {-1,+1}.
inline int ClassSign(int label) { return label == 1 ? 1 : -1; }

// I[i][k]: +1 motif k injected into graph i, -1 removed, 0 untouched.
using InjectionMatrix = std::vector<std::vector<int>>;

class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(std::size_t n, std::vector<Graph> graphs,
                 std::vector<int> labels,
                 std::optional<InjectionMatrix> injections = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t size() const { return graphs_.size(); }
  bool empty() const { return graphs_.empty(); }
  const std::vector<Graph>& graphs() const { return graphs_; }
  const Graph& graph(std::size_t i) const { return graphs_.at(i); }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_.at(i); }
  const std::optional<InjectionMatrix>& injections() const {
    return injections_;
  }
  std::size_t CountLabel(int label) const;

 private:
  std::size_t n_ = 0;
  std::vector<Graph> graphs_;
  std::vector<int> labels_;
  std::optional<InjectionMatrix> injections_;
};

// 1 - |A ∩ B| / |A ∪ B|; 0 when both edge sets are empty.
double JaccardDistance(std::span<const Edge> a, std::span<const Edge> b);
double JaccardDistance(const Graph& a, const Graph& b);

// Fraction of graphs in `d` that contain `e`.
double EdgeFrequency(const LabeledDataset& d, Edge e);

// Number of graphs (optionally only those with `label_filter`) whose edge set
// contains every edge of `m`.
std::size_t Support(std::span<const Edge> m, const LabeledDataset& d,
                    std::optional<int> label_filter = std::nullopt);

// True iff the edges form a single connected component on their incident
// nodes. The empty set is not connected.
bool IsConnected(std::span<const Edge> edges);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_GRAPH_HPP_
