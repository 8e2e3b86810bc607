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

#include "motif_shap/masking.hpp"

#include <string>
#include <utility>

#include "motif_shap/error.hpp"

namespace motif_shap {

std::string_view MaskKindName(MaskKind kind) {
  switch (kind) {
    case MaskKind::kRemove:
      return "remove";
    case MaskKind::kAverage:
      return "average";
    case MaskKind::kToggle:
      return "toggle";
  }
  return "unknown";
}

MaskKind ParseMaskKind(std::string_view name) {
  if (name == "remove") return MaskKind::kRemove;
  if (name == "average") return MaskKind::kAverage;
  if (name == "toggle") return MaskKind::kToggle;
  Fail(ErrorKind::kInvalidArgument,
       "unknown masking strategy '" + std::string(name) + "'");
}

EdgeFrequencyTable::EdgeFrequencyTable(const LabeledDataset& background)
    : n_(background.n()), frequencies_(PairCount(background.n()), 0.0) {
  Require(!background.empty(), ErrorKind::kConfiguration,
          "average masking needs a nonempty background dataset");
  for (const Graph& g : background.graphs()) {
    for (const Edge& e : g.edges()) frequencies_[PairIndex(n_, e)] += 1.0;
  }
  const double count = static_cast<double>(background.size());
  for (double& f : frequencies_) f /= count;
}

MaskingStrategy MaskingStrategy::Remove() {
  return MaskingStrategy(MaskKind::kRemove);
}

MaskingStrategy MaskingStrategy::Toggle() {
  return MaskingStrategy(MaskKind::kToggle);
}

MaskingStrategy MaskingStrategy::Average(const LabeledDataset& background) {
  Require(!background.empty(), ErrorKind::kConfiguration,
          "average masking needs a nonempty background dataset");
  MaskingStrategy s(MaskKind::kAverage);
  s.background_ = std::make_shared<const EdgeFrequencyTable>(background);
  return s;
}

MaskingStrategy MaskingStrategy::Of(MaskKind kind) {
  switch (kind) {
    case MaskKind::kRemove:
      return Remove();
    case MaskKind::kToggle:
      return Toggle();
    case MaskKind::kAverage:
      break;
  }
  Fail(ErrorKind::kConfiguration,
       "average masking requires a background dataset");
}

Graph MaskingStrategy::MaskUnion(const Graph& g,
                                 std::span<const Edge> motif_union) const {
  if (motif_union.empty()) return g;
  for (const Edge& e : motif_union) {
    Require(e.v < g.n(), ErrorKind::kUniverseMismatch,
            "motif edge outside the graph universe");
  }
  switch (kind_) {
    case MaskKind::kRemove: {
      if (!g.weighted()) return Graph(g.n(), EdgeDifference(g.edges(), motif_union));
      EdgeList edges;
      std::vector<double> weights;
      std::size_t j = 0;
      for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const Edge e = g.edges()[i];
        while (j < motif_union.size() && motif_union[j] < e) ++j;
        if (j < motif_union.size() && motif_union[j] == e) continue;
        edges.push_back(e);
        weights.push_back(g.weight_at(i));
      }
      return Graph(g.n(), std::move(edges), std::move(weights));
    }
    case MaskKind::kToggle: {
      if (!g.weighted()) {
        return Graph(g.n(), EdgeSymmetricDifference(g.edges(), motif_union));
      }
      // Edges outside the union keep their weight; toggled-in edges get 1.
      EdgeList edges;
      std::vector<double> weights;
      auto ig = g.edges().begin();
      auto im = motif_union.begin();
      while (ig != g.edges().end() || im != motif_union.end()) {
        if (im == motif_union.end() ||
            (ig != g.edges().end() && *ig < *im)) {
          edges.push_back(*ig);
          weights.push_back(
              g.weight_at(static_cast<std::size_t>(ig - g.edges().begin())));
          ++ig;
        } else if (ig != g.edges().end() && *ig == *im) {
          ++ig;
          ++im;
        } else {
          edges.push_back(*im);
          weights.push_back(1.0);
          ++im;
        }
      }
      return Graph(g.n(), std::move(edges), std::move(weights));
    }
    case MaskKind::kAverage: {
      Require(background_ != nullptr && background_->n() == g.n(),
              ErrorKind::kConfiguration,
              "average masking background does not match the graph universe");
      EdgeList edges;
      std::vector<double> weights;
      edges.reserve(g.edge_count() + motif_union.size());
      weights.reserve(edges.capacity());
      auto ig = g.edges().begin();
      auto im = motif_union.begin();
      while (ig != g.edges().end() || im != motif_union.end()) {
        if (im == motif_union.end() ||
            (ig != g.edges().end() && *ig < *im)) {
          edges.push_back(*ig);
          weights.push_back(
              g.weight_at(static_cast<std::size_t>(ig - g.edges().begin())));
          ++ig;
        } else {
          if (ig != g.edges().end() && *ig == *im) ++ig;
          edges.push_back(*im);
          weights.push_back(background_->Frequency(*im));
          ++im;
        }
      }
      return Graph(g.n(), std::move(edges), std::move(weights));
    }
  }
  return g;
}

Graph MaskingStrategy::Mask(const Graph& g,
                            std::span<const Motif> motifs) const {
  return MaskUnion(g, MotifUnion(motifs));
}

EdgeList MotifUnion(std::span<const Motif> motifs) {
  EdgeList out;
  for (const Motif& m : motifs) out = EdgeUnion(out, m.edges());
  return out;
}

}  // namespace motif_shap
