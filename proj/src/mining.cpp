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

#include "motif_shap/mining.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "motif_shap/error.hpp"
#include "motif_shap/parallel.hpp"

namespace motif_shap {

std::size_t GraphBitset::Count() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

GraphBitset GraphBitset::And(const GraphBitset& other) const {
  GraphBitset out(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.words_[i] = words_[i] & other.words_[i];
  }
  return out;
}

namespace {

struct Candidate {
  EdgeList edges;
  GraphBitset occurrences;
};

bool CanonicalLess(const EdgeList& a, const EdgeList& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::vector<Motif> Mine(const LabeledDataset& d, const MinerConfig& config) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!config.label || d.label(i) == *config.label) rows.push_back(i);
  }
  Require(config.support >= 1 && config.support <= rows.size(),
          ErrorKind::kInvalidArgument,
          "support threshold " + std::to_string(config.support) +
              " outside [1, " + std::to_string(rows.size()) + "]");
  Require(config.max_size >= 2, ErrorKind::kInvalidArgument,
          "max motif size must be at least 2 edges");

  // Occurrence bitset of every edge that appears at all.
  std::map<Edge, GraphBitset> occurrences;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const Edge& e : d.graph(rows[r]).edges()) {
      auto [it, inserted] = occurrences.try_emplace(e, rows.size());
      it->second.Set(r);
    }
  }
  std::map<Edge, GraphBitset> frequent;
  for (auto& [e, bits] : occurrences) {
    if (bits.Count() >= config.support) frequent.emplace(e, std::move(bits));
  }

  // Two-edge motifs: frequent edges sharing a node, jointly frequent.
  std::map<NodeId, std::vector<Edge>> incident;
  for (const auto& [e, bits] : frequent) {
    incident[e.u].push_back(e);
    incident[e.v].push_back(e);
  }
  std::map<Edge, std::vector<Edge>> partners;
  std::vector<Candidate> level;
  for (const auto& [node, edges] : incident) {
    for (std::size_t a = 0; a < edges.size(); ++a) {
      for (std::size_t b = a + 1; b < edges.size(); ++b) {
        GraphBitset both = frequent.at(edges[a]).And(frequent.at(edges[b]));
        if (both.Count() < config.support) continue;
        partners[edges[a]].push_back(edges[b]);
        partners[edges[b]].push_back(edges[a]);
        EdgeList pair{edges[a], edges[b]};
        Canonicalize(pair);
        level.push_back({std::move(pair), std::move(both)});
      }
    }
  }
  std::sort(level.begin(), level.end(), [](const Candidate& a,
                                           const Candidate& b) {
    return a.edges < b.edges;
  });

  std::vector<EdgeList> mined;
  for (const Candidate& c : level) mined.push_back(c.edges);

  for (std::size_t size = 3; size <= config.max_size && !level.empty(); ++size) {
    std::vector<Candidate> next;
    std::mutex mu;
    ParallelFor(level.size(), config.threads, [&](std::size_t begin,
                                                  std::size_t end) {
      std::vector<Candidate> local;
      for (std::size_t i = begin; i < end; ++i) {
        const Candidate& m = level[i];
        for (const Edge& f : m.edges) {
          auto it = partners.find(f);
          if (it == partners.end()) continue;
          for (const Edge& e : it->second) {
            if (std::binary_search(m.edges.begin(), m.edges.end(), e)) continue;
            GraphBitset bits = m.occurrences.And(frequent.at(e));
            if (bits.Count() < config.support) continue;
            EdgeList grown = m.edges;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), e), e);
            local.push_back({std::move(grown), std::move(bits)});
          }
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      for (Candidate& c : local) next.push_back(std::move(c));
    });
    std::sort(next.begin(), next.end(), [](const Candidate& a,
                                           const Candidate& b) {
      return a.edges < b.edges;
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const Candidate& a, const Candidate& b) {
                             return a.edges == b.edges;
                           }),
               next.end());
    for (const Candidate& c : next) mined.push_back(c.edges);
    level = std::move(next);
  }

  std::sort(mined.begin(), mined.end(), CanonicalLess);
  std::vector<Motif> out;
  out.reserve(mined.size());
  for (std::size_t i = 0; i < mined.size(); ++i) {
    out.emplace_back(static_cast<std::int64_t>(i), std::move(mined[i]));
  }
  return out;
}

double CrossSupport(std::span<const Edge> m, const LabeledDataset& d) {
  Require(d.CountLabel(0) > 0 && d.CountLabel(1) > 0,
          ErrorKind::kInvalidArgument,
          "cross-support needs graphs of both classes");
  const double s0 = static_cast<double>(Support(m, d, 0));
  const double s1 = static_cast<double>(Support(m, d, 1));
  return std::fabs(std::log2((s0 + 1.0) / (s1 + 1.0)));
}

std::vector<RankedMotif> RankAndSelect(std::span<const Motif> motifs,
                                       const LabeledDataset& d,
                                       const RankerConfig& config) {
  Require(config.k >= 1, ErrorKind::kInvalidArgument,
          "output size must be at least 1");
  Require(config.distance_threshold >= 0.0 && config.distance_threshold <= 1.0,
          ErrorKind::kInvalidArgument,
          "distance threshold must lie in [0, 1]");
  std::vector<RankedMotif> ranked;
  ranked.reserve(motifs.size());
  for (const Motif& m : motifs) ranked.push_back({m, CrossSupport(m.edges(), d)});
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedMotif& a, const RankedMotif& b) {
              if (a.cross_support != b.cross_support) {
                return a.cross_support > b.cross_support;
              }
              if (a.motif.size() != b.motif.size()) {
                return a.motif.size() > b.motif.size();
              }
              const auto ea = a.motif.edges();
              const auto eb = b.motif.edges();
              return std::lexicographical_compare(ea.begin(), ea.end(),
                                                  eb.begin(), eb.end());
            });

  std::vector<RankedMotif> selected;
  for (RankedMotif& candidate : ranked) {
    if (selected.size() >= config.k) break;
    if (candidate.motif.size() < config.size_threshold) continue;
    double min_distance = std::numeric_limits<double>::infinity();
    for (const RankedMotif& s : selected) {
      min_distance = std::min(
          min_distance,
          JaccardDistance(candidate.motif.edges(), s.motif.edges()));
    }
    if (min_distance >= config.distance_threshold) {
      selected.push_back(std::move(candidate));
    }
  }
  return selected;
}

}  // namespace motif_shap
