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

#ifndef MOTIF_SHAP_BLACKBOX_HPP_
#define MOTIF_SHAP_BLACKBOX_HPP_

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "motif_shap/graph.hpp"

namespace motif_shap {

// Opaque classifier B: graphs over a fixed universe -> P(class 1) in [0, 1].
// A missing edge has weight 0 and an edge of an unweighted graph weight 1.
class BlackBox {
 public:
  virtual ~BlackBox() = default;

  virtual double Evaluate(const Graph& g) = 0;
  // Must equal element-wise Evaluate. The default loops.
  virtual std::vector<double> EvaluateBatch(std::span<const Graph> graphs);
  // True when Evaluate may be called from several threads at once.
  virtual bool concurrency_safe() const { return false; }
};

double Logistic(double x);

// Deterministic stand-in for a trained classifier whose behaviour is driven by
// a known set of signed motifs:
//   overlap_k = mean edge weight of motif k in g,
//   raw       = sum_k sign_k * (2 overlap_k - 1) * u_k,
//   B(g)      = logistic(steepness * raw).
class GroundTruthScorer final : public BlackBox {
 public:
  static constexpr double kDefaultSteepness = 1.0;

  // Every motif needs a class sign; importances must be >= 0.
  GroundTruthScorer(std::size_t n, std::vector<Motif> motifs,
                    std::vector<double> importances,
                    double steepness = kDefaultSteepness);

  double Evaluate(const Graph& g) override;
  bool concurrency_safe() const override { return true; }

  double Raw(const Graph& g) const;
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  std::vector<Motif> motifs_;
  std::vector<double> importances_;
  double steepness_;
};

struct TrainingConfig {
  double learning_rate = 0.1;
  int epochs = 300;
  double l2 = 0.0;
  // Fraction of graphs held out for validation (shuffled with `seed`).
  double validation_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct TrainingReport {
  double train_accuracy = 0.0;
  std::optional<double> validation_accuracy;
  double final_loss = 0.0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

// Logistic regression on edge-weight features, one per node pair.
class LinearSurrogate final : public BlackBox {
 public:
  // Zero weights and bias: predicts 0.5 everywhere.
  explicit LinearSurrogate(std::size_t n);
  LinearSurrogate(std::size_t n, std::vector<double> weights, double bias);

  double Evaluate(const Graph& g) override;
  bool concurrency_safe() const override { return true; }

  double Logit(const Graph& g) const;
  std::size_t n() const { return n_; }
  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  friend struct LinearSurrogateTrainer;

  std::size_t n_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

struct TrainedSurrogate {
  LinearSurrogate model;
  TrainingReport report;
};

// Full-batch gradient descent on the mean logistic cross-entropy. Throws
// kDegenerateTraining unless both labels occur in the training split.
TrainedSurrogate TrainLinearSurrogate(const LabeledDataset& d,
                                      const TrainingConfig& config);

// Forwards to another black-box and counts every graph it is asked about.
class CountingBlackBox final : public BlackBox {
 public:
  explicit CountingBlackBox(BlackBox& inner) : inner_(inner) {}

  double Evaluate(const Graph& g) override;
  std::vector<double> EvaluateBatch(std::span<const Graph> graphs) override;
  bool concurrency_safe() const override { return inner_.concurrency_safe(); }

  std::uint64_t count() const { return count_.load(); }
  void Reset() { count_ = 0; }

 private:
  BlackBox& inner_;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace motif_shap

#endif  // MOTIF_SHAP_BLACKBOX_HPP_
