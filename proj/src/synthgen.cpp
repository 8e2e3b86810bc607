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

#include "motif_shap/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "motif_shap/error.hpp"
#include "motif_shap/parallel.hpp"

namespace motif_shap {

Graph ErdosRenyi(std::size_t n, double density, RandomStream& rng) {
  Require(density > 0.0 && density < 1.0, ErrorKind::kInvalidArgument,
          "density must lie in (0, 1)");
  EdgeList edges;
  const std::size_t pairs = PairCount(n);
  edges.reserve(static_cast<std::size_t>(density * pairs * 1.2) + 8);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.NextUniform() < density) edges.push_back(Edge{u, v});
    }
  }
  return Graph(n, std::move(edges));
}

std::vector<Motif> SampleMotifs(std::size_t n, std::size_t n_motifs,
                                std::size_t motif_edges, std::uint64_t seed,
                                bool disjoint) {
  Require(motif_edges >= 1, ErrorKind::kInvalidArgument,
          "motifs need at least one edge");
  Require(n >= 2, ErrorKind::kInvalidArgument, "need at least two nodes");
  if (disjoint) {
    Require(n_motifs * (motif_edges + 1) <= n, ErrorKind::kInvalidArgument,
            std::to_string(n_motifs) + " node-disjoint motifs of " +
                std::to_string(motif_edges) + " edges do not fit in " +
                std::to_string(n) + " nodes");
  } else {
    Require(motif_edges <= PairCount(n), ErrorKind::kInvalidArgument,
            "motif larger than the complete graph");
  }
  RandomStream rng(seed, Stream::kMotifSampling);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.Shuffle(perm);

  std::vector<Motif> motifs;
  motifs.reserve(n_motifs);
  for (std::size_t k = 0; k < n_motifs; ++k) {
    std::vector<NodeId> pool;
    if (disjoint) {
      pool.assign(perm.begin() + static_cast<std::ptrdiff_t>(k * (motif_edges + 1)),
                  perm.begin() + static_cast<std::ptrdiff_t>((k + 1) * (motif_edges + 1)));
    } else {
      pool = perm;
      rng.Shuffle(pool);
    }
    std::vector<NodeId> visited{pool.front()};
    EdgeList chosen;
    while (chosen.size() < motif_edges) {
      // Candidate edges join a visited node to any other pool node.
      std::vector<Edge> candidates;
      for (NodeId a : visited) {
        for (NodeId b : pool) {
          if (a == b) continue;
          const Edge e = Edge::Make(a, b);
          if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) continue;
          // Edges between two visited nodes appear twice; keep one copy.
          const bool b_visited =
              std::find(visited.begin(), visited.end(), b) != visited.end();
          if (b_visited && a > b) continue;
          candidates.push_back(e);
        }
      }
      Require(!candidates.empty(), ErrorKind::kInvalidArgument,
              "motif growth ran out of candidate edges");
      const Edge pick = candidates[rng.NextBelow(candidates.size())];
      chosen.push_back(pick);
      for (NodeId x : {pick.u, pick.v}) {
        if (std::find(visited.begin(), visited.end(), x) == visited.end()) {
          visited.push_back(x);
        }
      }
    }
    motifs.emplace_back(static_cast<std::int64_t>(k), std::move(chosen),
                        k % 2 == 1 ? 1 : -1);
  }
  return motifs;
}

Matrix IdentityMatrix(std::size_t size) {
  Matrix m(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) m[i][i] = 1.0;
  return m;
}

Matrix CorrelationFromEntries(std::size_t size,
                              const std::vector<CorrelationEntry>& entries) {
  Matrix m = IdentityMatrix(size);
  for (const CorrelationEntry& e : entries) {
    Require(e.i < size && e.j < size, ErrorKind::kInvalidArgument,
            "correlation entry index out of range");
    Require(e.value >= 0.0 && e.value <= 1.0, ErrorKind::kInvalidArgument,
            "correlation entries must lie in [0, 1]");
    if (e.i == e.j) continue;
    m[e.i][e.j] = e.value;
    m[e.j][e.i] = e.value;
  }
  return m;
}

namespace {

void Validate(const SynthConfig& c, std::size_t n_motifs) {
  Require(c.n >= 2, ErrorKind::kInvalidArgument, "need at least two nodes");
  Require(c.n_graphs >= 2 && c.n_graphs % 2 == 0, ErrorKind::kInvalidArgument,
          "graph count must be even and positive for balanced classes");
  Require(c.density > 0.0 && c.density < 1.0, ErrorKind::kInvalidArgument,
          "density must lie in (0, 1)");
  Require(c.rho.size() == n_motifs, ErrorKind::kInvalidArgument,
          "need one perturbation probability per motif (" +
              std::to_string(n_motifs) + "), got " +
              std::to_string(c.rho.size()));
  for (double r : c.rho) {
    Require(r >= 0.0 && r <= 1.0, ErrorKind::kInvalidArgument,
            "perturbation probabilities must lie in [0, 1]");
  }
  if (!c.correlation.empty()) {
    Require(c.correlation.size() == n_motifs, ErrorKind::kInvalidArgument,
            "correlation matrix must be n_motifs x n_motifs");
    for (std::size_t i = 0; i < n_motifs; ++i) {
      Require(c.correlation[i].size() == n_motifs,
              ErrorKind::kInvalidArgument,
              "correlation matrix must be n_motifs x n_motifs");
      Require(c.correlation[i][i] == 1.0, ErrorKind::kInvalidArgument,
              "correlation matrix diagonal must be 1");
      for (double v : c.correlation[i]) {
        Require(v >= 0.0 && v <= 1.0, ErrorKind::kInvalidArgument,
                "correlation entries must lie in [0, 1]");
      }
    }
  }
}

}  // namespace

SynthResult Generate(const SynthConfig& config) {
  std::vector<Motif> motifs;
  if (config.motifs.empty()) {
    motifs = SampleMotifs(config.n, config.n_motifs, config.motif_edges,
                          config.seed, config.disjoint_motifs);
  } else {
    for (std::size_t k = 0; k < config.motifs.size(); ++k) {
      const Motif& m = config.motifs[k];
      Require(m.max_node() < config.n, ErrorKind::kInvalidArgument,
              "motif outside the node universe");
      motifs.emplace_back(m.id(), EdgeList(m.edges().begin(), m.edges().end()),
                          k % 2 == 1 ? 1 : -1);
    }
  }
  const std::size_t n_motifs = motifs.size();
  Validate(config, n_motifs);
  const Matrix corr =
      config.correlation.empty() ? IdentityMatrix(n_motifs) : config.correlation;

  Matrix r(config.n_graphs, std::vector<double>(n_motifs));
  RandomStream r_stream(config.seed, Stream::kInjection);
  for (auto& row : r) {
    for (double& x : row) x = r_stream.NextUniform();
  }

  std::vector<Graph> graphs(config.n_graphs);
  InjectionMatrix injections(config.n_graphs, std::vector<int>(n_motifs, 0));
  ParallelFor(config.n_graphs, 0, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      RandomStream rng(config.seed, Stream::kErdosRenyi,
                       static_cast<std::uint32_t>(j));
      Graph g = ErdosRenyi(config.n, config.density, rng);
      EdgeList edges(g.edges().begin(), g.edges().end());
      for (std::size_t k = 0; k < n_motifs; ++k) {
        double dot = 0.0;
        for (std::size_t l = 0; l < n_motifs; ++l) dot += corr[k][l] * r[j][l];
        if (dot > config.rho[k]) continue;
        if (j % 2 == k % 2) {
          edges = EdgeUnion(edges, motifs[k].edges());
          injections[j][k] = 1;
        } else {
          edges = EdgeDifference(edges, motifs[k].edges());
          injections[j][k] = -1;
        }
      }
      graphs[j] = Graph(config.n, std::move(edges));
    }
  });

  std::vector<int> labels(config.n_graphs);
  for (std::size_t j = 0; j < config.n_graphs; ++j) labels[j] = static_cast<int>(j % 2);

  SynthResult out;
  out.effective_rates.assign(n_motifs, 0.0);
  for (const auto& row : injections) {
    for (std::size_t k = 0; k < n_motifs; ++k) {
      if (row[k] != 0) out.effective_rates[k] += 1.0;
    }
  }
  for (double& rate : out.effective_rates) rate /= static_cast<double>(config.n_graphs);
  out.injections = injections;
  out.dataset = LabeledDataset(config.n, std::move(graphs), std::move(labels),
                               std::move(injections));
  out.motifs = std::move(motifs);
  return out;
}

}  // namespace motif_shap
