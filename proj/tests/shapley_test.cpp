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

#include <gtest/gtest.h>

#include <cmath>

#include "motif_shap/blackbox.hpp"
#include "motif_shap/error.hpp"
#include "motif_shap/numeric.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace motif_shap {
namespace {

using testing::E;

struct Instance {
  Graph graph;
  std::vector<Motif> motifs;
  GroundTruthScorer truth;
};

Instance RandomInstance(std::size_t m, RandomStream& rng) {
  const std::size_t n = 20;
  Graph g = testing::RandomGraph(n, 0.3, rng);
  std::vector<Motif> motifs;
  std::vector<double> u;
  for (std::size_t k = 0; k < m; ++k) {
    motifs.push_back(testing::RandomMotif(static_cast<std::int64_t>(k), n,
                                          1 + rng.NextBelow(5), rng));
    u.push_back(rng.NextUniform());
  }
  GroundTruthScorer truth(n, motifs, u);
  return {std::move(g), std::move(motifs), std::move(truth)};
}

TEST(QueryBudgetTest, Examples) {
  EXPECT_EQ(QueryBudget(8, std::nullopt), 256u);
  EXPECT_EQ(QueryBudget(8, 1), 9u);
  EXPECT_EQ(QueryBudget(5, 2), 16u);
  EXPECT_EQ(QueryBudget(5, 5), 32u);
  EXPECT_EQ(QueryBudget(70, std::nullopt), ~std::uint64_t{0});
}

TEST(WeightTest, ClassicWeightsSumToOne) {
  for (std::size_t m = 1; m <= 12; ++m) {
    CompensatedSum total;
    for (std::size_t s = 0; s < m; ++s) {
      total.Add(Binomial(m - 1, s) * CoalitionWeight(Weighting::kClassic, m, s));
    }
    EXPECT_NEAR(total.value(), 1.0, 1e-12) << m;
  }
  EXPECT_DOUBLE_EQ(CoalitionWeight(Weighting::kPaperInverse, 3, 1), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(CoalitionWeight(Weighting::kPaperDirect, 3, 2), 6.0);
  EXPECT_EQ(ParseWeighting("paper"), Weighting::kPaperInverse);
  EXPECT_THROW(ParseWeighting("banzhaf"), Error);
}

TEST(LatticeNodesTest, DepthLimitedNodes) {
  EXPECT_EQ(LatticeNodes(3, 3), (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(LatticeNodes(3, 1), (std::vector<std::uint64_t>{3, 5, 6, 7}));
  for (std::size_t m = 1; m <= 10; ++m) {
    for (std::size_t d = 0; d <= m; ++d) {
      EXPECT_EQ(LatticeNodes(m, d).size(), QueryBudget(m, d));
    }
  }
}

TEST(ExactExplainTest, SingleMotif) {
  Graph g(4, E({{0, 1}, {1, 2}}));
  std::vector<Motif> motifs{Motif(0, E({{0, 1}}), 1)};
  GroundTruthScorer b(4, motifs, {0.8});
  const auto toggle = MaskingStrategy::Toggle();
  Explanation ex = ExactExplain(g, b, motifs, toggle);
  const double expected = b.Evaluate(g) - b.Evaluate(Graph(4, E({{1, 2}})));
  EXPECT_DOUBLE_EQ(ex.scores[0], expected);
  EXPECT_EQ(ex.query_count, 2u);
  EXPECT_FALSE(ex.depth.has_value());
}

TEST(ExactExplainTest, DummyMotifScoresZero) {
  RandomStream rng(8, Stream::kTesting);
  std::vector<Motif> motifs{Motif(0, E({{0, 1}, {1, 2}}), 1),
                            Motif(1, E({{3, 4}}), -1),
                            Motif(2, E({{5, 6}, {6, 7}}), 1)};
  GroundTruthScorer b(8, motifs, {0.9, 0.4, 0.0});
  for (const auto& s : {MaskingStrategy::Toggle(), MaskingStrategy::Remove()}) {
    for (int trial = 0; trial < 20; ++trial) {
      Explanation ex = ExactExplain(testing::RandomGraph(8, 0.5, rng), b, motifs, s);
      EXPECT_EQ(ex.scores[2], 0.0);
    }
  }
  Explanation ex = ExactExplain(Graph(8, {}), b, motifs, MaskingStrategy::Toggle());
  EXPECT_NE(ex.scores[0], 0.0);
}

TEST(ExactExplainTest, InterchangeableMotifsScoreEqually) {
  std::vector<Motif> motifs{Motif(0, E({{0, 1}, {1, 2}}), 1),
                            Motif(1, E({{3, 4}, {4, 5}}), 1),
                            Motif(2, E({{6, 7}}), -1)};
  GroundTruthScorer b(8, motifs, {0.6, 0.6, 0.3});
  Graph g(8, E({{0, 1}, {3, 4}, {6, 7}, {2, 5}}));
  Explanation ex = ExactExplain(g, b, motifs, MaskingStrategy::Toggle());
  EXPECT_NEAR(ex.scores[0], ex.scores[1], 1e-9);
}

TEST(ExactExplainTest, MatchesPermutationOracleAndIsEfficient) {
  RandomStream rng(31, Stream::kTesting);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.NextBelow(5);
    Instance inst = RandomInstance(m, rng);
    const auto s = trial % 2 ? MaskingStrategy::Toggle() : MaskingStrategy::Remove();
    Explanation ex = ExactExplain(inst.graph, inst.truth, inst.motifs, s);
    const std::vector<double> oracle =
        testing::PermutationShapley(inst.graph, inst.truth, inst.motifs, s);
    double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_NEAR(ex.scores[i], oracle[i], 1e-9);
      total += ex.scores[i];
    }
    ASSERT_TRUE(ex.full_value.has_value());
    EXPECT_NEAR(total, *ex.full_value - ex.masked_value, 1e-9);
    EXPECT_EQ(ex.query_count, std::uint64_t{1} << m);
  }
}

TEST(ExactExplainTest, LimitExceeded) {
  RandomStream rng(2, Stream::kTesting);
  Instance inst = RandomInstance(5, rng);
  ExplainOptions options;
  options.exact_limit = 4;
  try {
    ExactExplain(inst.graph, inst.truth, inst.motifs, MaskingStrategy::Toggle(),
                 options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLatticeTooLarge);
  }
}

TEST(ExactExplainTest, DeterministicAcrossThreadCounts) {
  RandomStream rng(5, Stream::kTesting);
  Instance inst = RandomInstance(9, rng);
  ExplainOptions one;
  one.threads = 1;
  ExplainOptions many;
  many.threads = 8;
  many.batch_size = 7;
  Explanation a = ExactExplain(inst.graph, inst.truth, inst.motifs,
                               MaskingStrategy::Toggle(), one);
  Explanation b = ExactExplain(inst.graph, inst.truth, inst.motifs,
                               MaskingStrategy::Toggle(), many);
  EXPECT_EQ(a.scores, b.scores);
}

TEST(ApproxExplainTest, DepthOneFormula) {
  RandomStream rng(6, Stream::kTesting);
  Instance inst = RandomInstance(6, rng);
  const auto s = MaskingStrategy::Toggle();
  CountingBlackBox counted(inst.truth);
  Explanation ex = ApproxExplain(inst.graph, counted, inst.motifs, s, 1);
  EXPECT_EQ(counted.count(), 7u);
  EXPECT_EQ(ex.query_count, 7u);
  const double all = inst.truth.Evaluate(s.Mask(inst.graph, inst.motifs));
  for (std::size_t i = 0; i < 6; ++i) {
    std::vector<Motif> others;
    for (std::size_t k = 0; k < 6; ++k) {
      if (k != i) others.push_back(inst.motifs[k]);
    }
    const double expected = (inst.truth.Evaluate(s.Mask(inst.graph, others)) - all) / 6.0;
    EXPECT_NEAR(ex.scores[i], expected, 1e-15);
  }
}

TEST(ApproxExplainTest, FullDepthIsExactBitForBit) {
  RandomStream rng(7, Stream::kTesting);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = RandomInstance(2 + rng.NextBelow(7), rng);
    const std::size_t m = inst.motifs.size();
    for (Weighting w : {Weighting::kClassic, Weighting::kPaperInverse}) {
      ExplainOptions options;
      options.weighting = w;
      Explanation exact = ExactExplain(inst.graph, inst.truth, inst.motifs,
                                       MaskingStrategy::Toggle(), options);
      Explanation approx = ApproxExplain(inst.graph, inst.truth, inst.motifs,
                                         MaskingStrategy::Toggle(), m, options);
      EXPECT_EQ(exact.scores, approx.scores);
    }
  }
}

TEST(ApproxExplainTest, QueryCountsMatchBudget) {
  RandomStream rng(9, Stream::kTesting);
  Instance inst = RandomInstance(8, rng);
  for (std::size_t d = 1; d <= 8; ++d) {
    CountingBlackBox counted(inst.truth);
    Explanation ex = ApproxExplain(inst.graph, counted, inst.motifs,
                                   MaskingStrategy::Remove(), d);
    EXPECT_EQ(counted.count(), QueryBudget(8, d));
    EXPECT_EQ(ex.query_count, QueryBudget(8, d));
  }
}

TEST(ApproxExplainTest, DepthOutOfRange) {
  RandomStream rng(10, Stream::kTesting);
  Instance inst = RandomInstance(3, rng);
  for (std::size_t d : {0, 4}) {
    try {
      ApproxExplain(inst.graph, inst.truth, inst.motifs, MaskingStrategy::Toggle(), d);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    }
  }
}

TEST(ApproxExplainTest, RescaleMatchesEfficiencyGap) {
  RandomStream rng(11, Stream::kTesting);
  Instance inst = RandomInstance(6, rng);
  ExplainOptions options;
  options.rescale = true;
  Explanation ex = ApproxExplain(inst.graph, inst.truth, inst.motifs,
                                 MaskingStrategy::Toggle(), 2, options);
  double total = 0;
  for (double s : ex.scores) total += s;
  ASSERT_TRUE(ex.full_value.has_value());
  EXPECT_NEAR(total, *ex.full_value - ex.masked_value, 1e-12);
  EXPECT_EQ(ex.query_count, QueryBudget(6, 2) + 1);
}

TEST(ApproxExplainTest, SparsePathAgreesWithDense) {
  RandomStream rng(12, Stream::kTesting);
  Instance inst = RandomInstance(10, rng);
  for (std::size_t d : {1, 2, 3}) {
    Explanation dense = ApproxExplain(inst.graph, inst.truth, inst.motifs,
                                      MaskingStrategy::Toggle(), d);
    Explanation sparse = internal::SparseApproxExplain(
        inst.graph, inst.truth, inst.motifs, MaskingStrategy::Toggle(), d, {});
    EXPECT_EQ(sparse.query_count, dense.query_count);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_NEAR(sparse.scores[i], dense.scores[i], 1e-14);
    }
  }
}

TEST(ApproxExplainTest, ManyMotifsDepthOne) {
  RandomStream rng(13, Stream::kTesting);
  Instance inst = RandomInstance(70, rng);
  CountingBlackBox counted(inst.truth);
  Explanation ex = ApproxExplain(inst.graph, counted, inst.motifs,
                                 MaskingStrategy::Toggle(), 1);
  EXPECT_EQ(counted.count(), 71u);
  EXPECT_EQ(ex.scores.size(), 70u);
}

TEST(DepthSweepTest, MatchesIndividualRuns) {
  RandomStream rng(14, Stream::kTesting);
  Instance inst = RandomInstance(7, rng);
  const auto s = MaskingStrategy::Remove();
  std::vector<Explanation> sweep = DepthSweep(inst.graph, inst.truth, inst.motifs, s);
  ASSERT_EQ(sweep.size(), 7u);
  for (std::size_t d = 1; d <= 7; ++d) {
    Explanation single = ApproxExplain(inst.graph, inst.truth, inst.motifs, s, d);
    EXPECT_EQ(sweep[d - 1].scores, single.scores);
    EXPECT_EQ(sweep[d - 1].query_count, QueryBudget(7, d));
  }
  EXPECT_FALSE(sweep.back().depth.has_value());
}

TEST(ExplainDatasetTest, MatchesPerGraphCalls) {
  RandomStream rng(15, Stream::kTesting);
  Instance inst = RandomInstance(4, rng);
  std::vector<Graph> graphs;
  for (int i = 0; i < 12; ++i) graphs.push_back(testing::RandomGraph(20, 0.3, rng));
  LabeledDataset d(20, graphs, std::vector<int>(12, 1));
  const auto s = MaskingStrategy::Toggle();
  std::vector<Explanation> all = ExplainDataset(d, inst.truth, inst.motifs, s, std::nullopt);
  ASSERT_EQ(all.size(), 12u);
  for (std::size_t j = 0; j < 12; ++j) {
    EXPECT_EQ(all[j].scores, ExactExplain(graphs[j], inst.truth, inst.motifs, s).scores);
    EXPECT_EQ(all[j].graph, std::to_string(j));
  }
}

TEST(DedupTest, SharedMaskedGraphsQueriedOnce) {
  // Motif 1 is a sub-motif of motif 0, so masking {0} and {0,1} coincide.
  std::vector<Motif> motifs{Motif(0, E({{0, 1}, {1, 2}}), 1),
                            Motif(1, E({{0, 1}}), 1)};
  GroundTruthScorer b(4, motifs, {0.5, 0.5});
  Graph g(4, E({{0, 1}, {1, 2}, {2, 3}}));
  ExplainOptions options;
  options.dedup_masked_graphs = true;
  CountingBlackBox counted(b);
  Explanation deduped = ExactExplain(g, counted, motifs, MaskingStrategy::Remove(), options);
  EXPECT_EQ(counted.count(), 3u);
  EXPECT_EQ(deduped.query_count, 3u);
  Explanation plain = ExactExplain(g, b, motifs, MaskingStrategy::Remove());
  EXPECT_EQ(plain.query_count, 4u);
  EXPECT_EQ(deduped.scores, plain.scores);
}

}  // namespace
}  // namespace motif_shap
