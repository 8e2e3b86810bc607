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

#include "motif_shap/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "motif_shap/error.hpp"

namespace motif_shap {

using nlohmann::json;

namespace {

const json& Field(const json& j, const char* name, const char* what) {
  if (!j.is_object() || !j.contains(name)) {
    Fail(ErrorKind::kFormat,
         std::string(what) + " is missing field \"" + name + "\"");
  }
  return j[name];
}

std::size_t ToSize(const json& j, const char* what) {
  Require(j.is_number_unsigned(), ErrorKind::kFormat,
          std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

// Parses [[u, v], ...] or [[u, v, w], ...]. Weights are collected only when
// `weights` is given; a 3-element edge elsewhere is an error.
EdgeList ParseEdges(const json& j, std::vector<double>* weights,
                    const char* what) {
  Require(j.is_array(), ErrorKind::kFormat,
          std::string(what) + " edges must be an array");
  EdgeList edges;
  edges.reserve(j.size());
  for (const json& e : j) {
    const bool ok = e.is_array() &&
                    (e.size() == 2 || (weights && e.size() == 3)) &&
                    e[0].is_number_unsigned() && e[1].is_number_unsigned() &&
                    (e.size() == 2 || e[2].is_number());
    Require(ok, ErrorKind::kFormat,
            std::string(what) + " edge " + e.dump() + " is not [u, v]" +
                (weights ? " or [u, v, w]" : ""));
    const auto u = e[0].get<std::uint64_t>();
    const auto v = e[1].get<std::uint64_t>();
    Require(u != v, ErrorKind::kFormat,
            std::string(what) + " contains self-loop " + e.dump());
    Require(u <= 0xFFFFFFFFu && v <= 0xFFFFFFFFu, ErrorKind::kFormat,
            "node index too large");
    edges.push_back(Edge::Make(static_cast<NodeId>(u), static_cast<NodeId>(v)));
    if (weights) weights->push_back(e.size() == 3 ? e[2].get<double>() : 1.0);
  }
  return edges;
}

template <typename F>
auto Rethrow(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) throw;
    Fail(ErrorKind::kFormat, std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    Fail(ErrorKind::kFormat, std::string(what) + ": " + e.what());
  }
}

json EdgesToJson(std::span<const Edge> edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.u, e.v});
  return out;
}

}  // namespace

std::vector<Motif> MotifCollection::motifs() const {
  std::vector<Motif> out;
  out.reserve(records.size());
  for (const MotifRecord& r : records) out.push_back(r.motif);
  return out;
}

std::vector<double> MotifCollection::rho() const {
  std::vector<double> out;
  for (const MotifRecord& r : records) {
    if (!r.rho) return {};
    out.push_back(*r.rho);
  }
  return out;
}

LabeledDataset DatasetFromJson(const json& j) {
  return Rethrow("dataset", [&] {
    const std::size_t n = ToSize(Field(j, "n", "dataset"), "dataset n");
    const json& graphs = Field(j, "graphs", "dataset");
    Require(graphs.is_array(), ErrorKind::kFormat,
            "dataset graphs must be an array");
    std::vector<Graph> out;
    std::vector<int> labels;
    out.reserve(graphs.size());
    for (const json& g : graphs) {
      const json& label = Field(g, "label", "graph");
      Require(label.is_number_integer() &&
                  (label.get<int>() == 0 || label.get<int>() == 1),
              ErrorKind::kFormat, "graph label must be 0 or 1");
      labels.push_back(label.get<int>());
      out.emplace_back(n, ParseEdges(Field(g, "edges", "graph"), nullptr,
                                     "graph"));
    }
    std::optional<InjectionMatrix> injections;
    if (j.contains("injections") && !j["injections"].is_null()) {
      injections = j["injections"].get<InjectionMatrix>();
    }
    return LabeledDataset(n, std::move(out), std::move(labels),
                          std::move(injections));
  });
}

json DatasetToJson(const LabeledDataset& d) {
  json graphs = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    graphs.push_back({{"label", d.label(i)},
                      {"edges", EdgesToJson(d.graph(i).edges())}});
  }
  json j;
  j["n"] = d.n();
  j["graphs"] = std::move(graphs);
  if (d.injections()) j["injections"] = *d.injections();
  return j;
}

MotifCollection MotifsFromJson(const json& j) {
  return Rethrow("motif file", [&] {
    MotifCollection out;
    out.n = ToSize(Field(j, "n", "motif file"), "motif file n");
    const json& motifs = Field(j, "motifs", "motif file");
    Require(motifs.is_array(), ErrorKind::kFormat,
            "motif file motifs must be an array");
    for (const json& m : motifs) {
      const json& id = Field(m, "id", "motif");
      Require(id.is_number_integer(), ErrorKind::kFormat,
              "motif id must be an integer");
      std::optional<int> sign;
      if (m.contains("class") && !m["class"].is_null()) {
        const json& c = m["class"];
        Require(c.is_number_integer() &&
                    (c.get<int>() == 0 || c.get<int>() == 1),
                ErrorKind::kFormat, "motif class must be 0 or 1");
        sign = ClassSign(c.get<int>());
      }
      Motif motif(id.get<std::int64_t>(),
                  ParseEdges(Field(m, "edges", "motif"), nullptr, "motif"),
                  sign);
      Require(motif.max_node() < out.n, ErrorKind::kFormat,
              "motif " + std::to_string(motif.id()) +
                  " lies outside the declared universe");
      MotifRecord record{std::move(motif), std::nullopt, std::nullopt};
      if (m.contains("rho") && !m["rho"].is_null()) record.rho = m["rho"].get<double>();
      if (m.contains("cs") && !m["cs"].is_null()) record.cs = m["cs"].get<double>();
      out.records.push_back(std::move(record));
    }
    return out;
  });
}

json MotifsToJson(const MotifCollection& motifs) {
  json list = json::array();
  for (const MotifRecord& r : motifs.records) {
    json m;
    m["id"] = r.motif.id();
    if (r.motif.class_sign()) m["class"] = *r.motif.class_sign() > 0 ? 1 : 0;
    m["edges"] = EdgesToJson(r.motif.edges());
    if (r.rho) m["rho"] = *r.rho;
    if (r.cs) m["cs"] = *r.cs;
    list.push_back(std::move(m));
  }
  json j;
  j["n"] = motifs.n;
  j["motifs"] = std::move(list);
  return j;
}

Graph GraphFromJson(const json& j) {
  return Rethrow("graph", [&] {
    const std::size_t n = ToSize(Field(j, "n", "graph"), "graph n");
    std::vector<double> weights;
    EdgeList edges = ParseEdges(Field(j, "edges", "graph"), &weights, "graph");
    bool weighted = false;
    for (const json& e : j["edges"]) weighted |= e.size() == 3;
    if (!weighted) return Graph(n, std::move(edges));
    return Graph(n, std::move(edges), std::move(weights));
  });
}

json GraphToJson(const Graph& g) {
  json edges = json::array();
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (g.weighted()) {
      edges.push_back({g.edges()[i].u, g.edges()[i].v, g.weight_at(i)});
    } else {
      edges.push_back({g.edges()[i].u, g.edges()[i].v});
    }
  }
  json j;
  j["n"] = g.n();
  j["edges"] = std::move(edges);
  return j;
}

Matrix CorrelationFromJson(const json& j) {
  return Rethrow("correlation file", [&] {
    const std::size_t size =
        ToSize(Field(j, "n_m", "correlation file"), "correlation n_m");
    const json& entries = Field(j, "entries", "correlation file");
    Require(entries.is_array(), ErrorKind::kFormat,
            "correlation entries must be an array");
    std::vector<CorrelationEntry> parsed;
    for (const json& e : entries) {
      Require(e.is_array() && e.size() == 3 && e[0].is_number_unsigned() &&
                  e[1].is_number_unsigned() && e[2].is_number(),
              ErrorKind::kFormat, "correlation entry must be [i, j, c]");
      parsed.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                        e[2].get<double>()});
    }
    return CorrelationFromEntries(size, parsed);
  });
}

json ExplanationToJson(const Explanation& ex) {
  json j;
  const bool numeric = !ex.graph.empty() &&
                       ex.graph.find_first_not_of("0123456789") ==
                           std::string::npos;
  if (numeric) {
    j["graph"] = std::stoll(ex.graph);
  } else {
    j["graph"] = ex.graph;
  }
  if (ex.depth) {
    j["depth"] = *ex.depth;
  } else {
    j["depth"] = "exact";
  }
  j["mask"] = MaskKindName(ex.mask);
  j["weights"] = WeightingName(ex.weighting);
  j["queries"] = ex.query_count;
  json scores = json::array();
  for (std::size_t k = 0; k < ex.scores.size(); ++k) {
    scores.push_back({{"motif", ex.motif_ids[k]}, {"xi", ex.scores[k]}});
  }
  j["scores"] = std::move(scores);
  if (ex.full_value) j["full_value"] = *ex.full_value;
  j["masked_value"] = ex.masked_value;
  return j;
}

Explanation ExplanationFromJson(const json& j) {
  return Rethrow("explanation", [&] {
    Explanation ex;
    const json& graph = Field(j, "graph", "explanation");
    ex.graph = graph.is_string() ? graph.get<std::string>() : graph.dump();
    const json& depth = Field(j, "depth", "explanation");
    if (depth.is_string()) {
      Require(depth.get<std::string>() == "exact", ErrorKind::kFormat,
              "depth must be \"exact\" or an integer");
    } else {
      ex.depth = ToSize(depth, "explanation depth");
    }
    ex.mask = ParseMaskKind(Field(j, "mask", "explanation").get<std::string>());
    ex.weighting =
        ParseWeighting(Field(j, "weights", "explanation").get<std::string>());
    ex.query_count =
        Field(j, "queries", "explanation").get<std::uint64_t>();
    for (const json& s : Field(j, "scores", "explanation")) {
      ex.motif_ids.push_back(Field(s, "motif", "score").get<std::int64_t>());
      ex.scores.push_back(Field(s, "xi", "score").get<double>());
    }
    if (j.contains("full_value")) ex.full_value = j["full_value"].get<double>();
    if (j.contains("masked_value")) ex.masked_value = j["masked_value"].get<double>();
    return ex;
  });
}

std::vector<Explanation> ExplanationsFromJson(const json& j) {
  if (j.is_object() && j.contains("explanations")) {
    std::vector<Explanation> out;
    for (const json& e : j["explanations"]) out.push_back(ExplanationFromJson(e));
    return out;
  }
  return {ExplanationFromJson(j)};
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorKind::kFormat,
          "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json ReadJsonFile(const std::string& path) {
  json j = json::parse(ReadTextFile(path), nullptr, false);
  Require(!j.is_discarded(), ErrorKind::kFormat,
          "'" + path + "' is not valid JSON");
  return j;
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    Require(static_cast<bool>(out), ErrorKind::kConfiguration,
            "cannot write '" + tmp + "'");
    out << content;
    out.flush();
    Require(static_cast<bool>(out), ErrorKind::kConfiguration,
            "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    Fail(ErrorKind::kConfiguration, "cannot move output into '" + path + "'");
  }
}

void WriteJsonFile(const std::string& path, const json& j) {
  WriteFileAtomic(path, j.dump(1) + "\n");
}

}  // namespace motif_shap
