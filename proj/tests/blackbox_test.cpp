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

#include "motif_shap/blackbox.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "motif_shap/error.hpp"
#include "motif_shap/synthgen.hpp"
#include "test_util.hpp"

namespace motif_shap {
namespace {

using testing::E;

GroundTruthScorer TwoMotifScorer(std::vector<double> u) {
  std::vector<Motif> motifs{Motif(0, E({{0, 1}, {1, 2}}), 1),
                            Motif(1, E({{3, 4}, {4, 5}}), -1)};
  return GroundTruthScorer(6, motifs, std::move(u));
}

Graph RandomWeighted(std::size_t n, RandomStream& rng) {
  Graph g = testing::RandomGraph(n, 0.4, rng);
  std::vector<double> w;
  for (std::size_t i = 0; i < g.edge_count(); ++i) w.push_back(rng.NextUniform());
  return Graph(n, testing::ToList(g.edges()), std::move(w));
}

TEST(GroundTruthTest, ZeroImportancesGiveOneHalf) {
  GroundTruthScorer b = TwoMotifScorer({0.0, 0.0});
  RandomStream rng(1, Stream::kTesting);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(b.Evaluate(testing::RandomGraph(6, 0.5, rng)), 0.5);
  }
}

TEST(GroundTruthTest, HandComputedValue) {
  GroundTruthScorer b = TwoMotifScorer({1.0, 0.5});
  // Motif 0 fully present (+1), motif 1 half present (0 contribution).
  Graph g(6, E({{0, 1}, {1, 2}, {3, 4}}));
  EXPECT_DOUBLE_EQ(b.Raw(g), 1.0);
  EXPECT_DOUBLE_EQ(b.Evaluate(g), 1.0 / (1.0 + std::exp(-1.0)));
  EXPECT_DOUBLE_EQ(b.Raw(Graph(6, {})), -1.0 + 0.5);
}

TEST(GroundTruthTest, MonotoneInPositiveMotifOverlap) {
  GroundTruthScorer b = TwoMotifScorer({0.7, 0.3});
  RandomStream rng(2, Stream::kTesting);
  for (int i = 0; i < 200; ++i) {
    Graph g = testing::RandomGraph(6, 0.5, rng);
    Graph more(6, EdgeUnion(testing::ToList(g.edges()), E({{0, 1}})));
    EXPECT_GE(b.Evaluate(more), b.Evaluate(g));
  }
}

TEST(GroundTruthTest, RequiresClassAndMatchingImportances) {
  EXPECT_THROW(GroundTruthScorer(4, {Motif(0, E({{0, 1}}))}, {1.0}), Error);
  EXPECT_THROW(GroundTruthScorer(4, {Motif(0, E({{0, 1}}), 1)}, {}), Error);
  GroundTruthScorer b(4, {Motif(0, E({{0, 1}}), 1)}, {1.0});
  try {
    b.Evaluate(Graph(5, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUniverseMismatch);
  }
}

TEST(BlackBoxTest, OutputsInUnitIntervalAndBatchMatches) {
  RandomStream rng(3, Stream::kTesting);
  GroundTruthScorer truth = TwoMotifScorer({5.0, 9.0});
  std::vector<double> w(PairCount(6));
  for (double& x : w) x = 40.0 * (rng.NextUniform() - 0.5);
  LinearSurrogate linear(6, w, 3.0);
  std::vector<Graph> graphs;
  for (int i = 0; i < 200; ++i) graphs.push_back(RandomWeighted(6, rng));
  for (BlackBox* b : std::vector<BlackBox*>{&truth, &linear}) {
    const std::vector<double> batch = b->EvaluateBatch(graphs);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      const double p = b->Evaluate(graphs[i]);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_EQ(p, batch[i]);
    }
  }
}

LabeledDataset SplitByEdge() {
  std::vector<Graph> graphs;
  std::vector<int> labels;
  RandomStream rng(4, Stream::kTesting);
  for (int i = 0; i < 20; ++i) {
    EdgeList edges = testing::ToList(testing::RandomGraph(6, 0.3, rng).edges());
    const int label = i % 2;
    if (label == 1) {
      edges = EdgeUnion(edges, E({{0, 1}}));
    } else {
      edges = EdgeDifference(edges, E({{0, 1}}));
    }
    graphs.emplace_back(6, edges);
    labels.push_back(label);
  }
  return LabeledDataset(6, graphs, labels);
}

TEST(TrainingTest, SeparableByOneEdge) {
  TrainingConfig config;
  config.learning_rate = 0.5;
  config.epochs = 2000;
  TrainedSurrogate t = TrainLinearSurrogate(SplitByEdge(), config);
  EXPECT_EQ(t.report.train_accuracy, 1.0);
  EXPECT_GT(t.model.weights()[PairIndex(6, Edge{0, 1})], 1.0);
}

TEST(TrainingTest, ZeroEpochsIsUntrained) {
  TrainingConfig config;
  config.epochs = 0;
  TrainedSurrogate t = TrainLinearSurrogate(SplitByEdge(), config);
  for (double w : t.model.weights()) EXPECT_EQ(w, 0.0);
  EXPECT_EQ(t.model.Evaluate(Graph(6, E({{0, 1}}))), 0.5);
}

TEST(TrainingTest, SingleClassIsDegenerate) {
  LabeledDataset d(3, {Graph(3, E({{0, 1}})), Graph(3, {})}, {1, 1});
  try {
    TrainLinearSurrogate(d, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateTraining);
  }
}

TEST(TrainingTest, BitDeterministic) {
  SynthConfig sc;
  sc.n = 30;
  sc.n_graphs = 60;
  sc.n_motifs = 3;
  sc.motif_edges = 5;
  sc.rho = {0.2, 0.6, 1.0};
  sc.seed = 9;
  SynthResult s = Generate(sc);
  TrainingConfig config;
  config.epochs = 50;
  config.validation_fraction = 0.25;
  config.seed = 5;
  TrainedSurrogate a = TrainLinearSurrogate(s.dataset, config);
  TrainedSurrogate b = TrainLinearSurrogate(s.dataset, config);
  ASSERT_EQ(a.model.weights().size(), b.model.weights().size());
  for (std::size_t i = 0; i < a.model.weights().size(); ++i) {
    EXPECT_EQ(a.model.weights()[i], b.model.weights()[i]);
  }
  EXPECT_EQ(a.model.bias(), b.model.bias());
  EXPECT_EQ(a.report.validation_accuracy, b.report.validation_accuracy);
}

TEST(TrainingTest, HeldOutAccuracyOnSyntheticData) {
  SynthConfig sc;
  sc.n = 100;
  sc.n_graphs = 200;
  sc.density = 0.2;
  sc.n_motifs = 6;
  sc.motif_edges = 10;
  sc.rho = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  sc.seed = 1;
  SynthResult s = Generate(sc);
  TrainingConfig config;
  config.validation_fraction = 0.25;
  config.seed = 1;
  TrainedSurrogate t = TrainLinearSurrogate(s.dataset, config);
  ASSERT_TRUE(t.report.validation_accuracy.has_value());
  EXPECT_EQ(t.report.validation_size, 50u);
  EXPECT_GE(*t.report.validation_accuracy, 0.75);
}

TEST(CountingTest, CountsSingleAndBatch) {
  GroundTruthScorer truth = TwoMotifScorer({1.0, 1.0});
  CountingBlackBox counted(truth);
  counted.Evaluate(Graph(6, {}));
  std::vector<Graph> graphs(5, Graph(6, {}));
  counted.EvaluateBatch(graphs);
  EXPECT_EQ(counted.count(), 6u);
  EXPECT_TRUE(counted.concurrency_safe());
}

}  // namespace
}  // namespace motif_shap
