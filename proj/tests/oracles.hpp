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

// Reference implementations used only by tests. They follow textbook
// definitions and share no code with the library paths they check.

#ifndef MOTIF_SHAP_TESTS_ORACLES_HPP_
#define MOTIF_SHAP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <unordered_map>
#include <vector>

#include "motif_shap/blackbox.hpp"
#include "motif_shap/graph.hpp"
#include "motif_shap/masking.hpp"

namespace motif_shap::testing {

// Shapley values as the average, over all |M|! orders of un-masking the
// motifs (starting from everything masked), of each motif's marginal change
// B(G with i un-masked) - B(G with i still masked).
inline std::vector<double> PermutationShapley(const Graph& g, BlackBox& b,
                                              const std::vector<Motif>& motifs,
                                              const MaskingStrategy& strategy) {
  const std::size_t m = motifs.size();
  std::unordered_map<std::uint32_t, double> memo;
  auto value = [&](std::uint32_t masked) {
    auto it = memo.find(masked);
    if (it != memo.end()) return it->second;
    std::vector<Motif> subset;
    for (std::size_t k = 0; k < m; ++k) {
      if ((masked >> k) & 1) subset.push_back(motifs[k]);
    }
    const double v = b.Evaluate(strategy.Mask(g, subset));
    memo.emplace(masked, v);
    return v;
  };
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> total(m, 0.0);
  double permutations = 0.0;
  do {
    std::uint32_t masked = (m == 32) ? ~0u : ((1u << m) - 1);
    for (std::size_t i : order) {
      const std::uint32_t after = masked & ~(1u << i);
      total[i] += value(after) - value(masked);
      masked = after;
    }
    permutations += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& t : total) t /= permutations;
  return total;
}

// Exhaustive enumeration of frequent connected edge sets built from the
// frequent single edges. Returns canonical edge lists sorted by size, then
// lexicographically.
inline std::vector<EdgeList> BruteForceMine(const LabeledDataset& d,
                                            std::size_t support,
                                            std::size_t max_size) {
  std::set<Edge> all;
  for (const Graph& g : d.graphs()) all.insert(g.edges().begin(), g.edges().end());
  std::vector<Edge> frequent;
  for (const Edge& e : all) {
    const Edge single[] = {e};
    if (Support(single, d) >= support) frequent.push_back(e);
  }
  std::vector<EdgeList> out;
  const std::size_t f = frequent.size();
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << f); ++subset) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(subset));
    if (size < 2 || size > max_size) continue;
    EdgeList edges;
    for (std::size_t k = 0; k < f; ++k) {
      if ((subset >> k) & 1) edges.push_back(frequent[k]);
    }
    if (!IsConnected(edges)) continue;
    if (Support(edges, d) < support) continue;
    out.push_back(edges);
  }
  std::sort(out.begin(), out.end(), [](const EdgeList& a, const EdgeList& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// sup_x |F_a(x) - F_b(x)| evaluated at every sample point.
inline double BruteForceKs(const std::vector<double>& a,
                           const std::vector<double>& b) {
  auto cdf = [](const std::vector<double>& s, double x) {
    double c = 0;
    for (double v : s) c += v <= x ? 1 : 0;
    return c / static_cast<double>(s.size());
  };
  double d = 0;
  for (const auto* sample : {&a, &b}) {
    for (double x : *sample) d = std::max(d, std::fabs(cdf(a, x) - cdf(b, x)));
  }
  return d;
}

}  // namespace motif_shap::testing

#endif  // MOTIF_SHAP_TESTS_ORACLES_HPP_
