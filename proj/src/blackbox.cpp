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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "motif_shap/error.hpp"
#include "motif_shap/random.hpp"

namespace motif_shap {

std::vector<double> BlackBox::EvaluateBatch(std::span<const Graph> graphs) {
  std::vector<double> out;
  out.reserve(graphs.size());
  for (const Graph& g : graphs) out.push_back(Evaluate(g));
  return out;
}

double Logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

GroundTruthScorer::GroundTruthScorer(std::size_t n, std::vector<Motif> motifs,
                                     std::vector<double> importances,
                                     double steepness)
    : n_(n),
      motifs_(std::move(motifs)),
      importances_(std::move(importances)),
      steepness_(steepness) {
  Require(motifs_.size() == importances_.size(), ErrorKind::kInvalidArgument,
          "ground-truth scorer needs one importance per motif");
  Require(steepness_ > 0 && std::isfinite(steepness_),
          ErrorKind::kInvalidArgument, "steepness must be positive");
  for (std::size_t k = 0; k < motifs_.size(); ++k) {
    Require(motifs_[k].class_sign().has_value(), ErrorKind::kInvalidArgument,
            "ground-truth motif " + std::to_string(motifs_[k].id()) +
                " has no class");
    Require(importances_[k] >= 0 && std::isfinite(importances_[k]),
            ErrorKind::kInvalidArgument, "importances must be >= 0");
    Require(motifs_[k].max_node() < n_, ErrorKind::kUniverseMismatch,
            "ground-truth motif outside the universe");
  }
}

double GroundTruthScorer::Raw(const Graph& g) const {
  Require(g.n() == n_, ErrorKind::kUniverseMismatch,
          "graph over " + std::to_string(g.n()) +
              " nodes given to a scorer over " + std::to_string(n_));
  double raw = 0.0;
  for (std::size_t k = 0; k < motifs_.size(); ++k) {
    if (importances_[k] == 0.0) continue;
    double present = 0.0;
    for (const Edge& e : motifs_[k].edges()) present += g.Weight(e);
    const double overlap = present / static_cast<double>(motifs_[k].size());
    raw += *motifs_[k].class_sign() * (2.0 * overlap - 1.0) * importances_[k];
  }
  return raw;
}

double GroundTruthScorer::Evaluate(const Graph& g) {
  return Logistic(steepness_ * Raw(g));
}

LinearSurrogate::LinearSurrogate(std::size_t n)
    : n_(n), weights_(PairCount(n), 0.0) {}

LinearSurrogate::LinearSurrogate(std::size_t n, std::vector<double> weights,
                                 double bias)
    : n_(n), weights_(std::move(weights)), bias_(bias) {
  Require(weights_.size() == PairCount(n_), ErrorKind::kInvalidArgument,
          "linear surrogate needs n(n-1)/2 weights");
}

double LinearSurrogate::Logit(const Graph& g) const {
  Require(g.n() == n_, ErrorKind::kUniverseMismatch,
          "graph over " + std::to_string(g.n()) +
              " nodes given to a surrogate over " + std::to_string(n_));
  double z = bias_;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    z += weights_[PairIndex(n_, g.edges()[i])] * g.weight_at(i);
  }
  return z;
}

double LinearSurrogate::Evaluate(const Graph& g) { return Logistic(Logit(g)); }

struct LinearSurrogateTrainer {
  static void Step(LinearSurrogate& model, const LabeledDataset& d,
                   std::span<const std::size_t> rows,
                   const TrainingConfig& config, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t r : rows) {
      const Graph& g = d.graph(r);
      const double residual = Logistic(model.Logit(g)) - d.label(r);
      for (std::size_t i = 0; i < g.edge_count(); ++i) {
        grad[PairIndex(model.n_, g.edges()[i])] += residual * g.weight_at(i);
      }
      grad_bias += residual;
    }
    const double scale = 1.0 / static_cast<double>(rows.size());
    for (std::size_t j = 0; j < grad.size(); ++j) {
      model.weights_[j] -= config.learning_rate *
                           (grad[j] * scale + config.l2 * model.weights_[j]);
    }
    model.bias_ -= config.learning_rate * grad_bias * scale;
  }
};

namespace {

double Accuracy(const LinearSurrogate& model, const LabeledDataset& d,
                std::span<const std::size_t> rows) {
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    const int predicted = model.Logit(d.graph(r)) >= 0.0 ? 1 : 0;
    correct += predicted == d.label(r) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double MeanLoss(const LinearSurrogate& model, const LabeledDataset& d,
                std::span<const std::size_t> rows) {
  double loss = 0.0;
  for (std::size_t r : rows) {
    const double z = model.Logit(d.graph(r));
    // log(1 + e^z) - y z, evaluated without overflow.
    const double softplus =
        z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += softplus - d.label(r) * z;
  }
  return loss / static_cast<double>(rows.size());
}

}  // namespace

TrainedSurrogate TrainLinearSurrogate(const LabeledDataset& d,
                                      const TrainingConfig& config) {
  Require(!d.empty(), ErrorKind::kEmptyDataset,
          "cannot train on an empty dataset");
  Require(config.epochs >= 0, ErrorKind::kInvalidArgument,
          "epochs must be >= 0");
  Require(config.learning_rate > 0, ErrorKind::kInvalidArgument,
          "learning rate must be positive");
  Require(config.validation_fraction >= 0 && config.validation_fraction < 1,
          ErrorKind::kInvalidArgument,
          "validation fraction must be in [0, 1)");

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  const auto held_out = static_cast<std::size_t>(
      std::floor(config.validation_fraction * static_cast<double>(d.size())));
  if (held_out > 0) {
    RandomStream rng(config.seed, Stream::kTrainSplit);
    rng.Shuffle(order);
  }
  std::span<const std::size_t> validation(order.data(), held_out);
  std::span<const std::size_t> train(order.data() + held_out,
                                     order.size() - held_out);

  bool has0 = false;
  bool has1 = false;
  for (std::size_t r : train) (d.label(r) == 1 ? has1 : has0) = true;
  Require(has0 && has1, ErrorKind::kDegenerateTraining,
          "training split contains a single class");

  TrainedSurrogate out{LinearSurrogate(d.n()), {}};
  std::vector<double> grad(PairCount(d.n()), 0.0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    LinearSurrogateTrainer::Step(out.model, d, train, config, grad);
  }
  out.report.train_size = train.size();
  out.report.validation_size = validation.size();
  out.report.train_accuracy = Accuracy(out.model, d, train);
  out.report.final_loss = MeanLoss(out.model, d, train);
  if (!validation.empty()) {
    out.report.validation_accuracy = Accuracy(out.model, d, validation);
  }
  return out;
}

double CountingBlackBox::Evaluate(const Graph& g) {
  ++count_;
  return inner_.Evaluate(g);
}

std::vector<double> CountingBlackBox::EvaluateBatch(
    std::span<const Graph> graphs) {
  count_ += graphs.size();
  return inner_.EvaluateBatch(graphs);
}

}  // namespace motif_shap
