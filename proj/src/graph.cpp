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

#include "motif_shap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "motif_shap/error.hpp"

namespace motif_shap {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUniverseMismatch:
      return "universe-mismatch";
    case ErrorKind::kEmptyDataset:
      return "empty-dataset";
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kConfiguration:
      return "configuration";
    case ErrorKind::kLatticeTooLarge:
      return "lattice-too-large";
    case ErrorKind::kFormat:
      return "input-format";
    case ErrorKind::kTransport:
      return "query-transport";
    case ErrorKind::kDegenerateTraining:
      return "degenerate-training";
    case ErrorKind::kUndefinedCorrelation:
      return "undefined-correlation";
  }
  return "unknown";
}

Edge Edge::Make(NodeId a, NodeId b) {
  Require(a != b, ErrorKind::kInvalidArgument,
          "self-loop on node " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

void Canonicalize(EdgeList& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool IsCanonical(std::span<const Edge> edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u >= edges[i].v) return false;
    if (i > 0 && !(edges[i - 1] < edges[i])) return false;
  }
  return true;
}

EdgeList EdgeUnion(std::span<const Edge> a, std::span<const Edge> b) {
  EdgeList out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

EdgeList EdgeIntersection(std::span<const Edge> a, std::span<const Edge> b) {
  EdgeList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

EdgeList EdgeDifference(std::span<const Edge> a, std::span<const Edge> b) {
  EdgeList out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

EdgeList EdgeSymmetricDifference(std::span<const Edge> a,
                                 std::span<const Edge> b) {
  EdgeList out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

bool IsSubset(std::span<const Edge> sub, std::span<const Edge> super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

std::size_t IntersectionSize(std::span<const Edge> a,
                             std::span<const Edge> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

std::size_t PairCount(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::size_t PairIndex(std::size_t n, Edge e) {
  const std::size_t u = e.u;
  return u * n - u * (u + 1) / 2 + (e.v - u - 1);
}

Edge PairAt(std::size_t n, std::size_t index) {
  std::size_t u = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++u;
    --row;
  }
  return Edge{static_cast<NodeId>(u), static_cast<NodeId>(u + 1 + index)};
}

namespace {

void CheckInUniverse(std::size_t n, std::span<const Edge> edges) {
  for (const Edge& e : edges) {
    Require(e.u < e.v, ErrorKind::kInvalidArgument,
            "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                ") is not in canonical orientation");
    Require(e.v < n, ErrorKind::kUniverseMismatch,
            "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                ") outside a universe of " + std::to_string(n) + " nodes");
  }
}

}  // namespace

Graph::Graph(std::size_t n, EdgeList edges) : n_(n), edges_(std::move(edges)) {
  Canonicalize(edges_);
  CheckInUniverse(n_, edges_);
}

Graph::Graph(std::size_t n, EdgeList edges, std::vector<double> weights)
    : n_(n) {
  Require(edges.size() == weights.size(), ErrorKind::kInvalidArgument,
          "edge and weight lists differ in length");
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return edges[a] < edges[b];
  });
  edges_.reserve(edges.size());
  weights_.reserve(edges.size());
  for (std::size_t i : order) {
    const double w = weights[i];
    Require(std::isfinite(w) && w >= 0.0 && w <= 1.0,
            ErrorKind::kInvalidArgument,
            "edge weight " + std::to_string(w) + " outside [0, 1]");
    if (!edges_.empty() && edges_.back() == edges[i]) {
      Require(weights_.back() == w, ErrorKind::kInvalidArgument,
              "duplicate edge with conflicting weights");
      continue;
    }
    edges_.push_back(edges[i]);
    weights_.push_back(w);
  }
  CheckInUniverse(n_, edges_);
}

bool Graph::Contains(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

double Graph::Weight(Edge e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return 0.0;
  return weight_at(static_cast<std::size_t>(it - edges_.begin()));
}

Motif::Motif(std::int64_t id, EdgeList edges, std::optional<int> class_sign)
    : id_(id), edges_(std::move(edges)), class_sign_(class_sign) {
  Canonicalize(edges_);
  Require(!edges_.empty(), ErrorKind::kInvalidArgument,
          "motif " + std::to_string(id_) + " has no edges");
  Require(IsConnected(edges_), ErrorKind::kInvalidArgument,
          "motif " + std::to_string(id_) + " is not connected");
  Require(!class_sign_ || *class_sign_ == 1 || *class_sign_ == -1,
          ErrorKind::kInvalidArgument, "motif class sign must be -1 or +1");
}

NodeId Motif::max_node() const {
  NodeId m = 0;
  for (const Edge& e : edges_) m = std::max(m, e.v);
  return m;
}

LabeledDataset::LabeledDataset(std::size_t n, std::vector<Graph> graphs,
                               std::vector<int> labels,
                               std::optional<InjectionMatrix> injections)
    : n_(n),
      graphs_(std::move(graphs)),
      labels_(std::move(labels)),
      injections_(std::move(injections)) {
  Require(graphs_.size() == labels_.size(), ErrorKind::kInvalidArgument,
          "dataset has " + std::to_string(graphs_.size()) + " graphs but " +
              std::to_string(labels_.size()) + " labels");
  for (const Graph& g : graphs_) {
    Require(g.n() == n_, ErrorKind::kUniverseMismatch,
            "graph over " + std::to_string(g.n()) +
                " nodes in a dataset over " + std::to_string(n_));
  }
  for (int label : labels_) {
    Require(label == 0 || label == 1, ErrorKind::kInvalidArgument,
            "labels must be 0 or 1");
  }
  if (injections_) {
    Require(injections_->size() == graphs_.size(),
            ErrorKind::kInvalidArgument,
            "injection matrix row count differs from graph count");
    const std::size_t cols =
        injections_->empty() ? 0 : injections_->front().size();
    for (const auto& row : *injections_) {
      Require(row.size() == cols, ErrorKind::kInvalidArgument,
              "ragged injection matrix");
      for (int v : row) {
        Require(v >= -1 && v <= 1, ErrorKind::kInvalidArgument,
                "injection entries must be -1, 0 or +1");
      }
    }
  }
}

std::size_t LabeledDataset::CountLabel(int label) const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), label));
}

double JaccardDistance(std::span<const Edge> a, std::span<const Edge> b) {
  const std::size_t inter = IntersectionSize(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double JaccardDistance(const Graph& a, const Graph& b) {
  Require(a.n() == b.n(), ErrorKind::kUniverseMismatch,
          "Jaccard distance between graphs over different universes");
  return JaccardDistance(a.edges(), b.edges());
}

double EdgeFrequency(const LabeledDataset& d, Edge e) {
  Require(!d.empty(), ErrorKind::kEmptyDataset,
          "edge frequency over an empty dataset");
  std::size_t hits = 0;
  for (const Graph& g : d.graphs()) hits += g.Contains(e) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(d.size());
}

std::size_t Support(std::span<const Edge> m, const LabeledDataset& d,
                    std::optional<int> label_filter) {
  for (const Edge& e : m) {
    Require(e.v < d.n(), ErrorKind::kUniverseMismatch,
            "motif edge outside the dataset universe");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (label_filter && d.label(i) != *label_filter) continue;
    if (IsSubset(m, d.graph(i).edges())) ++count;
  }
  return count;
}

bool IsConnected(std::span<const Edge> edges) {
  if (edges.empty()) return false;
  // Union-find over the incident nodes only.
  std::unordered_map<NodeId, NodeId> parent;
  auto find = [&](NodeId x) {
    NodeId root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      NodeId next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  };
  for (const Edge& e : edges) {
    parent.try_emplace(e.u, e.u);
    parent.try_emplace(e.v, e.v);
  }
  std::size_t components = parent.size();
  for (const Edge& e : edges) {
    NodeId a = find(e.u);
    NodeId b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace motif_shap
