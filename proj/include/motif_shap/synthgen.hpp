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

// Synthetic labelled datasets with controlled motif injection.
//
// Graph j starts as an Erdős–Rényi graph and gets label j mod 2. Motif k
// is predictive of class k mod 2. With R a fixed matrix of uniform draws, the
// motif is applied to graph j whenever C_k · R_j <= rho(k): its edges are
// added when j and k share parity and removed otherwise. Motifs are applied
// in ascending k.
//
// Randomness: RandomStream(seed, kErdosRenyi, j) draws graph j's edges in
// PairIndex order; RandomStream(seed, kInjection) draws R row by row;
// RandomStream(seed, kMotifSampling) drives SampleMotifs.

#ifndef MOTIF_SHAP_SYNTHGEN_HPP_
#define MOTIF_SHAP_SYNTHGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "motif_shap/graph.hpp"
#include "motif_shap/random.hpp"

namespace motif_shap {

using Matrix = std::vector<std::vector<double>>;

struct SynthConfig {
  std::size_t n = 100;
  // Must be even so both classes get n_graphs / 2 graphs.
  std::size_t n_graphs = 200;
  double density = 0.2;
  // Explicit motifs; when empty, n_motifs motifs of motif_edges edges are
  // sampled with SampleMotifs.
  std::vector<Motif> motifs;
  std::size_t n_motifs = 6;
  std::size_t motif_edges = 10;
  bool disjoint_motifs = true;
  std::vector<double> rho;
  // Empty means identity.
  Matrix correlation;
  std::uint64_t seed = 0;
};

struct SynthResult {
  LabeledDataset dataset;
  // Class signs follow index parity (odd -> +1).
  std::vector<Motif> motifs;
  InjectionMatrix injections;
  // Fraction of graphs in which each motif was applied.
  std::vector<double> effective_rates;
};

// Throws kInvalidArgument on an invalid configuration.
SynthResult Generate(const SynthConfig& config);

// Each edge of K_n is kept independently with probability `density`.
Graph ErdosRenyi(std::size_t n, double density, RandomStream& rng);

// Connected motifs of exactly `motif_edges` edges grown by random edge
// expansion. In disjoint mode motif k lives on its own block of
// motif_edges + 1 nodes of a random node permutation, which requires
// n_motifs * (motif_edges + 1) <= n.
std::vector<Motif> SampleMotifs(std::size_t n, std::size_t n_motifs,
                                std::size_t motif_edges, std::uint64_t seed,
                                bool disjoint = true);

Matrix IdentityMatrix(std::size_t size);

struct CorrelationEntry {
  std::size_t i;
  std::size_t j;
  double value;
};
// Symmetric completion of sparse entries over an identity diagonal.
Matrix CorrelationFromEntries(std::size_t size,
                              const std::vector<CorrelationEntry>& entries);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_SYNTHGEN_HPP_
