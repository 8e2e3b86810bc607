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

#include "motif_shap/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "motif_shap/error.hpp"
#include "motif_shap/numeric.hpp"
#include "motif_shap/parallel.hpp"

namespace motif_shap {

double Binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t j = 1; j <= k; ++j) {
    c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  }
  return c;
}

std::string_view WeightingName(Weighting w) {
  switch (w) {
    case Weighting::kClassic:
      return "classic";
    case Weighting::kPaperInverse:
      return "paper";
    case Weighting::kPaperDirect:
      return "paper-direct";
  }
  return "unknown";
}

Weighting ParseWeighting(std::string_view name) {
  if (name == "classic") return Weighting::kClassic;
  if (name == "paper") return Weighting::kPaperInverse;
  if (name == "paper-direct") return Weighting::kPaperDirect;
  Fail(ErrorKind::kInvalidArgument,
       "unknown weighting scheme '" + std::string(name) + "'");
}

double CoalitionWeight(Weighting w, std::size_t n_motifs, std::size_t masked) {
  Require(masked < n_motifs, ErrorKind::kInvalidArgument,
          "masked set must leave the explained motif out");
  switch (w) {
    case Weighting::kClassic:
      return 1.0 / (static_cast<double>(n_motifs) *
                    Binomial(n_motifs - 1, masked));
    case Weighting::kPaperInverse:
      return 1.0 / (static_cast<double>(n_motifs + 1) *
                    Binomial(n_motifs + 1, masked));
    case Weighting::kPaperDirect:
      return Binomial(n_motifs + 1, masked);
  }
  return 0.0;
}

std::uint64_t QueryBudget(std::size_t n_motifs,
                          std::optional<std::size_t> depth) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (!depth) {
    return n_motifs >= 64 ? kMax : std::uint64_t{1} << n_motifs;
  }
  const std::size_t d = std::min(*depth, n_motifs);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k <= d; ++k) {
    // C(n, k) built incrementally in integers; bail out on overflow.
    unsigned __int128 c = 1;
    for (std::size_t j = 1; j <= k; ++j) {
      c = c * (n_motifs - k + j) / j;
      if (c > kMax) return kMax;
    }
    if (total > kMax - static_cast<std::uint64_t>(c)) return kMax;
    total += static_cast<std::uint64_t>(c);
  }
  return total;
}

namespace {

std::uint64_t HashGraph(const Graph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(g.n());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    mix((static_cast<std::uint64_t>(g.edges()[i].u) << 32) | g.edges()[i].v);
    mix(std::bit_cast<std::uint64_t>(g.weight_at(i)));
  }
  return h;
}

std::size_t WorkerCount(const ExplainOptions& options) {
  return options.threads == 0 ? DefaultWorkerCount() : options.threads;
}

// Evaluates `graphs` into `values`, fanning out only over concurrency-safe
// black-boxes.
void EvaluateGraphs(BlackBox& b, std::span<const Graph> graphs,
                    std::span<double> values, std::size_t workers) {
  if (b.concurrency_safe() && workers > 1 && graphs.size() > 1) {
    ParallelFor(graphs.size(), workers, [&](std::size_t begin,
                                            std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) values[i] = b.Evaluate(graphs[i]);
    });
    return;
  }
  std::vector<double> out = b.EvaluateBatch(graphs);
  Require(out.size() == graphs.size(), ErrorKind::kTransport,
          "black-box returned a batch of the wrong size");
  std::copy(out.begin(), out.end(), values.begin());
}

}  // namespace

CoalitionLattice::CoalitionLattice(const Graph& g,
                                   std::span<const Motif> motifs,
                                   const MaskingStrategy& strategy)
    : graph_(g), motifs_(motifs), strategy_(strategy) {
  Require(motifs.size() <= 63, ErrorKind::kLatticeTooLarge,
          "coalition bitmasks hold at most 63 motifs");
  for (const Motif& m : motifs) {
    Require(m.max_node() < g.n(), ErrorKind::kUniverseMismatch,
            "motif " + std::to_string(m.id()) +
                " lies outside the graph universe");
  }
}

Graph CoalitionLattice::MaskedGraph(std::uint64_t masked) const {
  EdgeList motif_union;
  for (std::size_t k = 0; k < motifs_.size(); ++k) {
    if ((masked >> k) & 1) motif_union = EdgeUnion(motif_union, motifs_[k].edges());
  }
  return strategy_.MaskUnion(graph_, motif_union);
}

bool CoalitionLattice::Has(std::uint64_t masked) const {
  auto it = std::lower_bound(
      values_.begin(), values_.end(), masked,
      [](const auto& entry, std::uint64_t m) { return entry.first < m; });
  return it != values_.end() && it->first == masked;
}

double CoalitionLattice::Value(std::uint64_t masked) const {
  auto it = std::lower_bound(
      values_.begin(), values_.end(), masked,
      [](const auto& entry, std::uint64_t m) { return entry.first < m; });
  Require(it != values_.end() && it->first == masked,
          ErrorKind::kInvalidArgument, "lattice node was never evaluated");
  return it->second;
}

std::uint64_t CoalitionLattice::Evaluate(BlackBox& b,
                                         std::span<const std::uint64_t> masks,
                                         const ExplainOptions& options) {
  std::vector<std::uint64_t> todo;
  for (std::uint64_t m : masks) {
    if (!Has(m)) todo.push_back(m);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

  const std::size_t workers = WorkerCount(options);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  std::uint64_t queries = 0;
  std::vector<std::pair<std::uint64_t, double>> fresh;
  fresh.reserve(todo.size());

  for (std::size_t start = 0; start < todo.size(); start += batch) {
    const std::size_t count = std::min(batch, todo.size() - start);
    std::vector<Graph> graphs(count);
    ParallelFor(count, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        graphs[i] = MaskedGraph(todo[start + i]);
      }
    });
    std::vector<double> values(count, 0.0);

    if (!options.dedup_masked_graphs) {
      EvaluateGraphs(b, graphs, values, workers);
      queries += count;
    } else {
      // Resolve each graph to a previously seen value or to a slot in the
      // list of distinct graphs still to be queried.
      std::vector<Graph> unique;
      std::vector<std::uint64_t> unique_hash;
      std::vector<std::ptrdiff_t> slot(count, -1);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t h = HashGraph(graphs[i]);
        bool resolved = false;
        if (auto it = seen_.find(h); it != seen_.end()) {
          for (const auto& [seen_graph, seen_value] : it->second) {
            if (seen_graph == graphs[i]) {
              values[i] = seen_value;
              resolved = true;
              break;
            }
          }
        }
        if (resolved) continue;
        for (std::size_t u = 0; u < unique.size(); ++u) {
          if (unique_hash[u] == h && unique[u] == graphs[i]) {
            slot[i] = static_cast<std::ptrdiff_t>(u);
            break;
          }
        }
        if (slot[i] < 0) {
          slot[i] = static_cast<std::ptrdiff_t>(unique.size());
          unique.push_back(graphs[i]);
          unique_hash.push_back(h);
        }
      }
      std::vector<double> unique_values(unique.size(), 0.0);
      EvaluateGraphs(b, unique, unique_values, workers);
      queries += unique.size();
      for (std::size_t i = 0; i < count; ++i) {
        if (slot[i] >= 0) values[i] = unique_values[slot[i]];
      }
      for (std::size_t u = 0; u < unique.size(); ++u) {
        seen_[unique_hash[u]].emplace_back(std::move(unique[u]),
                                           unique_values[u]);
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      fresh.emplace_back(todo[start + i], values[i]);
    }
  }

  std::vector<std::pair<std::uint64_t, double>> merged;
  merged.reserve(values_.size() + fresh.size());
  std::merge(values_.begin(), values_.end(), fresh.begin(), fresh.end(),
             std::back_inserter(merged),
             [](const auto& a, const auto& c) { return a.first < c.first; });
  values_ = std::move(merged);
  return queries;
}

std::vector<std::uint64_t> LatticeNodes(std::size_t n_motifs,
                                        std::size_t depth) {
  Require(n_motifs <= 63, ErrorKind::kLatticeTooLarge,
          "coalition bitmasks hold at most 63 motifs");
  depth = std::min(depth, n_motifs);
  const std::uint64_t full =
      n_motifs == 0 ? 0 : (~std::uint64_t{0} >> (64 - n_motifs));
  std::vector<std::uint64_t> nodes;
  if (depth == n_motifs) {
    nodes.resize(std::size_t{1} << n_motifs);
    for (std::uint64_t m = 0; m < nodes.size(); ++m) nodes[m] = m;
    return nodes;
  }
  // Enumerate the unmasked sets of size <= depth with Gosper's hack.
  for (std::size_t k = 0; k <= depth; ++k) {
    if (k == 0) {
      nodes.push_back(full);
      continue;
    }
    std::uint64_t unmasked = (std::uint64_t{1} << k) - 1;
    while (unmasked <= full) {
      nodes.push_back(full ^ unmasked);
      const std::uint64_t c = unmasked & (~unmasked + 1);
      const std::uint64_t r = unmasked + c;
      if (r == 0 || r > full) break;
      unmasked = (((r ^ unmasked) >> 2) / c) | r;
    }
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

namespace {

// Position of `mask` in ascending `nodes`; a dense lattice is its own index.
std::size_t NodeIndex(std::span<const std::uint64_t> nodes, std::uint64_t mask) {
  if (nodes.size() > mask && nodes[mask] == mask) return static_cast<std::size_t>(mask);
  return static_cast<std::size_t>(
      std::lower_bound(nodes.begin(), nodes.end(), mask) - nodes.begin());
}

// Sums, for each motif i, the weighted marginals over masked sets S that
// exclude i and have |S| >= m - depth, visiting S in ascending order.
std::vector<double> ScoresFromLattice(std::span<const std::uint64_t> nodes,
                                      std::span<const double> values,
                                      std::size_t m, std::size_t depth,
                                      const ExplainOptions& options) {
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = CoalitionWeight(options.weighting, m, s);
  }
  const std::size_t min_masked = m - std::min(depth, m);
  std::vector<double> scores(m, 0.0);
  ParallelFor(m, WorkerCount(options), [&](std::size_t begin,
                                           std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      CompensatedSum acc;
      for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
        const std::uint64_t masked = nodes[idx];
        if (masked & bit) continue;
        const auto size = static_cast<std::size_t>(std::popcount(masked));
        if (size < min_masked) continue;
        acc.Add(weight[size] *
                (values[idx] - values[NodeIndex(nodes, masked | bit)]));
      }
      scores[i] = acc.value();
    }
  });
  return scores;
}

Explanation Skeleton(std::span<const Motif> motifs,
                     const MaskingStrategy& strategy,
                     const ExplainOptions& options,
                     std::optional<std::size_t> depth) {
  Explanation ex;
  for (const Motif& m : motifs) ex.motif_ids.push_back(m.id());
  ex.mask = strategy.kind();
  ex.weighting = options.weighting;
  ex.depth = depth;
  return ex;
}

// Shared by the exact and depth-limited paths so that depth == |M| sums the
// very same terms in the very same order.
Explanation LatticeExplain(const Graph& g, BlackBox& b,
                           std::span<const Motif> motifs,
                           const MaskingStrategy& strategy, std::size_t depth,
                           const ExplainOptions& options,
                           std::optional<std::size_t> reported_depth) {
  const std::size_t m = motifs.size();
  const std::vector<std::uint64_t> nodes = LatticeNodes(m, depth);
  CoalitionLattice lattice(g, motifs, strategy);
  Explanation ex = Skeleton(motifs, strategy, options, reported_depth);
  ex.query_count = lattice.Evaluate(b, nodes, options);

  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = lattice.Value(nodes[i]);
  ex.scores = ScoresFromLattice(nodes, values, m, depth, options);

  const std::uint64_t full = m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m));
  ex.masked_value = values[NodeIndex(nodes, full)];
  if (lattice.Has(0)) ex.full_value = lattice.Value(0);

  if (reported_depth && options.rescale && depth < m) {
    if (!lattice.Has(0)) {
      const std::uint64_t zero = 0;
      ex.query_count += lattice.Evaluate(b, std::span(&zero, 1), options);
    }
    ex.full_value = lattice.Value(0);
    CompensatedSum total;
    for (double s : ex.scores) total.Add(s);
    if (total.value() != 0.0) {
      const double factor = (*ex.full_value - ex.masked_value) / total.value();
      for (double& s : ex.scores) s *= factor;
    }
  }
  return ex;
}

}  // namespace

Explanation ExactExplain(const Graph& g, BlackBox& b,
                         std::span<const Motif> motifs,
                         const MaskingStrategy& strategy,
                         const ExplainOptions& options) {
  Require(motifs.size() <= options.exact_limit, ErrorKind::kLatticeTooLarge,
          "exact explanation of " + std::to_string(motifs.size()) +
              " motifs exceeds the limit of " +
              std::to_string(options.exact_limit) +
              "; use a depth-limited approximation or raise the limit");
  return LatticeExplain(g, b, motifs, strategy, motifs.size(), options,
                        std::nullopt);
}

Explanation ApproxExplain(const Graph& g, BlackBox& b,
                          std::span<const Motif> motifs,
                          const MaskingStrategy& strategy, std::size_t depth,
                          const ExplainOptions& options) {
  Require(depth >= 1 && depth <= motifs.size(), ErrorKind::kInvalidArgument,
          "depth " + std::to_string(depth) + " outside [1, " +
              std::to_string(motifs.size()) + "]");
  const std::uint64_t cap =
      options.exact_limit >= 63 ? std::numeric_limits<std::uint64_t>::max()
                                : std::uint64_t{1} << options.exact_limit;
  Require(QueryBudget(motifs.size(), depth) <= cap,
          ErrorKind::kLatticeTooLarge,
          "depth-" + std::to_string(depth) + " lattice over " +
              std::to_string(motifs.size()) + " motifs needs more than 2^" +
              std::to_string(options.exact_limit) + " evaluations");
  if (motifs.size() > 63) {
    return internal::SparseApproxExplain(g, b, motifs, strategy, depth,
                                         options);
  }
  return LatticeExplain(g, b, motifs, strategy, depth, options, depth);
}

std::vector<Explanation> DepthSweep(const Graph& g, BlackBox& b,
                                    std::span<const Motif> motifs,
                                    const MaskingStrategy& strategy,
                                    const ExplainOptions& options) {
  const std::size_t m = motifs.size();
  Require(m >= 1, ErrorKind::kInvalidArgument, "depth sweep needs motifs");
  Require(m <= options.exact_limit, ErrorKind::kLatticeTooLarge,
          "depth sweep of " + std::to_string(m) +
              " motifs exceeds the exact limit of " +
              std::to_string(options.exact_limit));
  const std::vector<std::uint64_t> nodes = LatticeNodes(m, m);
  CoalitionLattice lattice(g, motifs, strategy);
  lattice.Evaluate(b, nodes, options);
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = lattice.Value(nodes[i]);

  std::vector<Explanation> out;
  out.reserve(m);
  for (std::size_t d = 1; d <= m; ++d) {
    Explanation ex = Skeleton(motifs, strategy, options,
                              d == m ? std::nullopt : std::optional(d));
    ex.scores = ScoresFromLattice(nodes, values, m, d, options);
    ex.query_count = QueryBudget(m, ex.depth);
    ex.full_value = values.front();
    ex.masked_value = values.back();
    out.push_back(std::move(ex));
  }
  return out;
}

namespace internal {

Explanation SparseApproxExplain(const Graph& g, BlackBox& b,
                                std::span<const Motif> motifs,
                                const MaskingStrategy& strategy,
                                std::size_t depth,
                                const ExplainOptions& options) {
  const std::size_t m = motifs.size();
  Require(depth >= 1 && depth <= m, ErrorKind::kInvalidArgument,
          "depth outside [1, |M|]");
  for (const Motif& motif : motifs) {
    Require(motif.max_node() < g.n(), ErrorKind::kUniverseMismatch,
            "motif " + std::to_string(motif.id()) +
                " lies outside the graph universe");
  }
  Explanation ex = Skeleton(motifs, strategy, options, depth);

  // Unmasked sets of size 0..depth, by size then lexicographically.
  std::vector<std::vector<std::uint32_t>> coalitions;
  for (std::size_t k = 0; k <= depth; ++k) {
    std::vector<std::uint32_t> pick(k);
    for (std::size_t j = 0; j < k; ++j) pick[j] = static_cast<std::uint32_t>(j);
    for (;;) {
      coalitions.push_back(pick);
      std::size_t j = k;
      while (j > 0 && pick[j - 1] == m - k + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t t = j; t < k; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  const bool need_full = options.rescale && depth < m;
  if (need_full) {
    std::vector<std::uint32_t> all(m);
    for (std::size_t j = 0; j < m; ++j) all[j] = static_cast<std::uint32_t>(j);
    coalitions.push_back(std::move(all));
  }

  const std::size_t workers = WorkerCount(options);
  std::vector<double> values(coalitions.size(), 0.0);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t start = 0; start < coalitions.size(); start += batch) {
    const std::size_t count = std::min(batch, coalitions.size() - start);
    std::vector<Graph> graphs(count);
    ParallelFor(count, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& unmasked = coalitions[start + i];
        EdgeList motif_union;
        std::size_t next = 0;
        for (std::size_t k = 0; k < m; ++k) {
          if (next < unmasked.size() && unmasked[next] == k) {
            ++next;
            continue;
          }
          motif_union = EdgeUnion(motif_union, motifs[k].edges());
        }
        graphs[i] = strategy.MaskUnion(g, motif_union);
      }
    });
    EvaluateGraphs(b, graphs, std::span(values).subspan(start, count),
                   workers);
    ex.query_count += count;
  }

  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < coalitions.size(); ++i) index[coalitions[i]] = i;

  std::vector<CompensatedSum> acc(m);
  for (std::size_t c = 0; c < coalitions.size(); ++c) {
    const auto& unmasked = coalitions[c];
    if (unmasked.empty() || unmasked.size() > depth) continue;
    const double w =
        CoalitionWeight(options.weighting, m, m - unmasked.size());
    for (std::size_t j = 0; j < unmasked.size(); ++j) {
      std::vector<std::uint32_t> smaller = unmasked;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(j));
      acc[unmasked[j]].Add(w * (values[c] - values[index.at(smaller)]));
    }
  }
  ex.scores.resize(m);
  for (std::size_t i = 0; i < m; ++i) ex.scores[i] = acc[i].value();
  ex.masked_value = values[0];
  if (depth == m) ex.full_value = values[coalitions.size() - 1];
  if (need_full) {
    ex.full_value = values.back();
  }
  if (options.rescale && ex.full_value) {
    CompensatedSum total;
    for (double s : ex.scores) total.Add(s);
    if (total.value() != 0.0) {
      const double factor = (*ex.full_value - ex.masked_value) / total.value();
      for (double& s : ex.scores) s *= factor;
    }
  }
  return ex;
}

}  // namespace internal

std::vector<Explanation> ExplainDataset(const LabeledDataset& d, BlackBox& b,
                                        std::span<const Motif> motifs,
                                        const MaskingStrategy& strategy,
                                        std::optional<std::size_t> depth,
                                        const ExplainOptions& options) {
  std::vector<Explanation> out(d.size());
  auto explain_one = [&](std::size_t i, const ExplainOptions& opts) {
    out[i] = depth ? ApproxExplain(d.graph(i), b, motifs, strategy, *depth, opts)
                   : ExactExplain(d.graph(i), b, motifs, strategy, opts);
    out[i].graph = std::to_string(i);
  };
  if (b.concurrency_safe() && WorkerCount(options) > 1 && d.size() > 1) {
    ExplainOptions inner = options;
    inner.threads = 1;
    ParallelFor(d.size(), WorkerCount(options),
                [&](std::size_t begin, std::size_t end) {
                  for (std::size_t i = begin; i < end; ++i) explain_one(i, inner);
                });
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) explain_one(i, options);
  }
  return out;
}

}  // namespace motif_shap
