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

#ifndef MOTIF_SHAP_MASKING_HPP_
#define MOTIF_SHAP_MASKING_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motif_shap/graph.hpp"

namespace motif_shap {

enum class MaskKind { kRemove, kAverage, kToggle };

std::string_view MaskKindName(MaskKind kind);
// Accepts "remove", "average" and "toggle".
MaskKind ParseMaskKind(std::string_view name);

// Per-pair edge frequencies of a background dataset.
class EdgeFrequencyTable {
 public:
  explicit EdgeFrequencyTable(const LabeledDataset& background);

  std::size_t n() const { return n_; }
  double Frequency(Edge e) const { return frequencies_[PairIndex(n_, e)]; }

 private:
  std::size_t n_;
  std::vector<double> frequencies_;
};

// Produces the masked graph G_S. Masking a set of motifs always acts on the
// union of their edge sets, so overlapping motifs are never toggled twice.
class MaskingStrategy {
 public:
  static MaskingStrategy Remove();
  static MaskingStrategy Toggle();
  // Throws kConfiguration when the background is empty.
  static MaskingStrategy Average(const LabeledDataset& background);
  // Throws kConfiguration for kAverage, which needs a background.
  static MaskingStrategy Of(MaskKind kind);

  MaskKind kind() const { return kind_; }

  // `motif_union` must be canonical.
  Graph MaskUnion(const Graph& g, std::span<const Edge> motif_union) const;
  Graph Mask(const Graph& g, std::span<const Motif> motifs) const;

 private:
  explicit MaskingStrategy(MaskKind kind) : kind_(kind) {}

  MaskKind kind_;
  std::shared_ptr<const EdgeFrequencyTable> background_;
};

EdgeList MotifUnion(std::span<const Motif> motifs);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_MASKING_HPP_
