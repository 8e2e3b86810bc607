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

// JSON artifacts. Edge indices are 0-based; edge lists are written sorted.
//
//   dataset      {"n": N, "graphs": [{"label": 0|1, "edges": [[u, v], ...]}],
//                 "injections": [[1, 0, -1, ...], ...]}          (optional)
//   motifs       {"n": N, "motifs": [{"id": 3, "class": 0|1, "edges": [...],
//                 "rho": 0.4, "cs": 1.5}, ...]}     (class/rho/cs optional)
//   graph        {"n": N, "edges": [[u, v] or [u, v, w], ...]}
//   correlation  {"n_m": K, "entries": [[i, j, c], ...]}

#ifndef MOTIF_SHAP_IO_HPP_
#define MOTIF_SHAP_IO_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "motif_shap/graph.hpp"
#include "motif_shap/shapley.hpp"
#include "motif_shap/synthgen.hpp"

namespace motif_shap {

struct MotifRecord {
  Motif motif;
  // Perturbation probability used to inject the motif, if known.
  std::optional<double> rho;
  // Cross-support score assigned by ranking, if any.
  std::optional<double> cs;
};

struct MotifCollection {
  std::size_t n = 0;
  std::vector<MotifRecord> records;

  std::vector<Motif> motifs() const;
  // Empty when any record lacks rho.
  std::vector<double> rho() const;
};

// All parsers throw kFormat on malformed documents.
LabeledDataset DatasetFromJson(const nlohmann::json& j);
nlohmann::json DatasetToJson(const LabeledDataset& d);

MotifCollection MotifsFromJson(const nlohmann::json& j);
nlohmann::json MotifsToJson(const MotifCollection& motifs);

Graph GraphFromJson(const nlohmann::json& j);
nlohmann::json GraphToJson(const Graph& g);

Matrix CorrelationFromJson(const nlohmann::json& j);

nlohmann::json ExplanationToJson(const Explanation& ex);
Explanation ExplanationFromJson(const nlohmann::json& j);
// A single explanation object or {"explanations": [...]}.
std::vector<Explanation> ExplanationsFromJson(const nlohmann::json& j);

// Throws kFormat when the file is unreadable or not JSON.
nlohmann::json ReadJsonFile(const std::string& path);
std::string ReadTextFile(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::string& path, const std::string& content);
void WriteJsonFile(const std::string& path, const nlohmann::json& j);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_IO_HPP_
