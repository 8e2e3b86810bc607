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

#include <gtest/gtest.h>

#include "motif_shap/error.hpp"
#include "test_util.hpp"

namespace motif_shap {
namespace {

using testing::E;

std::vector<Motif> RandomMotifs(std::size_t n, RandomStream& rng) {
  std::vector<Motif> motifs;
  const std::size_t count = 1 + rng.NextBelow(4);
  for (std::size_t k = 0; k < count; ++k) {
    motifs.push_back(testing::RandomMotif(static_cast<std::int64_t>(k), n,
                                          1 + rng.NextBelow(5), rng));
  }
  return motifs;
}

LabeledDataset Background() {
  return LabeledDataset(4,
                        {Graph(4, E({{0, 1}})), Graph(4, E({{0, 1}, {2, 3}})),
                         Graph(4, E({{0, 1}})), Graph(4, {})},
                        {0, 1, 0, 1});
}

TEST(MaskingTest, EmptyCoalitionLeavesGraphUnchanged) {
  Graph g(4, E({{0, 1}, {1, 2}}));
  for (const auto& s : {MaskingStrategy::Remove(), MaskingStrategy::Toggle(),
                        MaskingStrategy::Average(Background())}) {
    EXPECT_EQ(s.Mask(g, {}), g) << MaskKindName(s.kind());
  }
}

TEST(MaskingTest, ToggleExample) {
  Graph g(3, E({{0, 1}}));
  const Motif m(0, E({{0, 1}, {1, 2}}));
  Graph out = MaskingStrategy::Toggle().Mask(g, std::vector<Motif>{m});
  EXPECT_EQ(testing::ToList(out.edges()), E({{1, 2}}));
  EXPECT_FALSE(out.weighted());
}

TEST(MaskingTest, RemoveExample) {
  Graph g(4, E({{0, 1}, {1, 2}, {2, 3}}));
  const Motif m(0, E({{1, 2}, {1, 3}}));
  EXPECT_EQ(testing::ToList(
                MaskingStrategy::Remove().Mask(g, std::vector<Motif>{m}).edges()),
            E({{0, 1}, {2, 3}}));
}

TEST(MaskingTest, AverageExample) {
  Graph g(4, E({{0, 1}, {1, 2}}));
  const Motif m(0, E({{0, 1}, {0, 2}}));
  Graph out = MaskingStrategy::Average(Background()).Mask(g, std::vector<Motif>{m});
  ASSERT_TRUE(out.weighted());
  EXPECT_EQ(out.Weight(Edge{0, 1}), 0.75);
  EXPECT_TRUE(out.Contains(Edge{0, 2}));  // listed with frequency 0
  EXPECT_EQ(out.Weight(Edge{0, 2}), 0.0);
  EXPECT_EQ(out.Weight(Edge{1, 2}), 1.0);
  EXPECT_EQ(out.edge_count(), 3u);
}

TEST(MaskingTest, AverageNeedsBackground) {
  try {
    MaskingStrategy::Of(MaskKind::kAverage);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfiguration);
  }
  EXPECT_THROW(MaskingStrategy::Average(LabeledDataset(4, {}, {})), Error);
}

TEST(MaskingTest, ParseNames) {
  EXPECT_EQ(ParseMaskKind("toggle"), MaskKind::kToggle);
  EXPECT_EQ(ParseMaskKind("remove"), MaskKind::kRemove);
  EXPECT_EQ(ParseMaskKind("average"), MaskKind::kAverage);
  EXPECT_THROW(ParseMaskKind("zero"), Error);
}

TEST(MaskingTest, AlgebraOnRandomPairs) {
  RandomStream rng(17, Stream::kTesting);
  const auto toggle = MaskingStrategy::Toggle();
  const auto remove = MaskingStrategy::Remove();
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 4 + rng.NextBelow(10);
    Graph g = testing::RandomGraph(n, 0.3, rng);
    std::vector<Motif> s = RandomMotifs(n, rng);
    const EdgeList u = MotifUnion(s);
    EXPECT_EQ(toggle.MaskUnion(toggle.MaskUnion(g, u), u), g);
    Graph once = remove.Mask(g, s);
    EXPECT_EQ(remove.Mask(once, s), once);
  }
}

TEST(MaskingTest, DependsOnlyOnUnionAndPreservesOutside) {
  RandomStream rng(23, Stream::kTesting);
  std::vector<Graph> bg_graphs;
  for (int i = 0; i < 10; ++i) bg_graphs.push_back(testing::RandomGraph(9, 0.4, rng));
  LabeledDataset bg(9, bg_graphs, std::vector<int>(10, 0));
  const std::vector<MaskingStrategy> strategies{
      MaskingStrategy::Remove(), MaskingStrategy::Toggle(),
      MaskingStrategy::Average(bg)};
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = testing::RandomGraph(9, 0.4, rng);
    std::vector<Motif> s = RandomMotifs(9, rng);
    const EdgeList u = MotifUnion(s);
    // A single motif holding the whole union, when it is connected.
    const bool single = IsConnected(u);
    for (const auto& strategy : strategies) {
      Graph out = strategy.Mask(g, s);
      EXPECT_EQ(out, strategy.MaskUnion(g, u));
      if (single) {
        EXPECT_EQ(out, strategy.Mask(g, std::vector<Motif>{Motif(99, u)}));
      }
      for (const Edge& e : g.edges()) {
        if (std::binary_search(u.begin(), u.end(), e)) continue;
        EXPECT_TRUE(out.Contains(e));
        EXPECT_EQ(out.Weight(e), g.Weight(e));
      }
      for (const Edge& e : out.edges()) {
        if (std::binary_search(u.begin(), u.end(), e)) continue;
        EXPECT_TRUE(g.Contains(e));
      }
    }
  }
}

TEST(MaskingTest, WeightedInputKeepsOutsideWeights) {
  Graph g(4, E({{0, 1}, {1, 2}, {2, 3}}), {0.2, 0.4, 0.6});
  const Motif m(0, E({{1, 2}, {1, 3}}));
  Graph toggled = MaskingStrategy::Toggle().Mask(g, std::vector<Motif>{m});
  EXPECT_EQ(testing::ToList(toggled.edges()), E({{0, 1}, {1, 3}, {2, 3}}));
  EXPECT_EQ(toggled.Weight(Edge{0, 1}), 0.2);
  EXPECT_EQ(toggled.Weight(Edge{1, 3}), 1.0);
  EXPECT_EQ(toggled.Weight(Edge{2, 3}), 0.6);
  Graph removed = MaskingStrategy::Remove().Mask(g, std::vector<Motif>{m});
  EXPECT_EQ(removed.Weight(Edge{2, 3}), 0.6);
  EXPECT_FALSE(removed.Contains(Edge{1, 2}));
}

}  // namespace
}  // namespace motif_shap
