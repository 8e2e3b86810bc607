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

#include <gtest/gtest.h>

#include <filesystem>

#include "motif_shap/error.hpp"
#include "test_util.hpp"

namespace motif_shap {
namespace {

using nlohmann::json;
using testing::E;

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidArgument;
}

TEST(DatasetJsonTest, RoundTripWithInjections) {
  LabeledDataset d(4, {Graph(4, E({{0, 1}})), Graph(4, E({{2, 3}, {1, 2}}))},
                   {0, 1}, InjectionMatrix{{1, 0}, {0, -1}});
  const json j = DatasetToJson(d);
  LabeledDataset back = DatasetFromJson(j);
  EXPECT_EQ(DatasetToJson(back), j);
  ASSERT_TRUE(back.injections().has_value());
  EXPECT_EQ((*back.injections())[1][1], -1);
}

TEST(DatasetJsonTest, DuplicateEdgesDroppedSelfLoopsRejected) {
  LabeledDataset d = DatasetFromJson(json::parse(
      R"({"n": 3, "graphs": [{"label": 0, "edges": [[0, 1], [1, 0]]}]})"));
  EXPECT_EQ(d.graph(0).edge_count(), 1u);
  EXPECT_EQ(KindOf([] {
              DatasetFromJson(json::parse(
                  R"({"n": 3, "graphs": [{"label": 0, "edges": [[1, 1]]}]})"));
            }),
            ErrorKind::kFormat);
}

TEST(DatasetJsonTest, MalformedInputsAreFormatErrors) {
  for (const char* text : {
           R"({"graphs": []})",
           R"({"n": 3, "graphs": [{"label": 2, "edges": []}]})",
           R"({"n": 3, "graphs": [{"label": 0, "edges": [[0, 5]]}]})",
           R"({"n": 3, "graphs": [{"label": 0, "edges": [[0]]}]})",
           R"({"n": -1, "graphs": []})",
           R"({"n": 3, "graphs": [{"label": 0, "edges": []}], "injections": "x"})",
       }) {
    EXPECT_EQ(KindOf([&] { DatasetFromJson(json::parse(text)); }), ErrorKind::kFormat)
        << text;
  }
}

TEST(MotifJsonTest, RoundTripWithOptionalFields) {
  const json j = json::parse(R"({"n": 5, "motifs": [
      {"id": 4, "class": 1, "edges": [[1, 0], [1, 2]], "rho": 0.6},
      {"id": 9, "edges": [[3, 4]], "cs": 1.5}]})");
  MotifCollection c = MotifsFromJson(j);
  ASSERT_EQ(c.records.size(), 2u);
  EXPECT_EQ(*c.records[0].motif.class_sign(), 1);
  EXPECT_FALSE(c.records[1].motif.class_sign().has_value());
  EXPECT_EQ(*c.records[1].cs, 1.5);
  EXPECT_TRUE(c.rho().empty());  // not every record carries rho
  EXPECT_EQ(MotifsToJson(MotifsFromJson(MotifsToJson(c))), MotifsToJson(c));
  EXPECT_EQ(KindOf([] {
              MotifsFromJson(json::parse(
                  R"({"n": 5, "motifs": [{"id": 0, "edges": [[0, 1], [2, 3]]}]})"));
            }),
            ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] {
              MotifsFromJson(json::parse(
                  R"({"n": 2, "motifs": [{"id": 0, "edges": [[0, 4]]}]})"));
            }),
            ErrorKind::kFormat);
}

TEST(GraphJsonTest, WeightedRoundTrip) {
  Graph g = GraphFromJson(json::parse(R"({"n": 4, "edges": [[2, 1, 0.5], [0, 3, 1]]})"));
  EXPECT_TRUE(g.weighted());
  EXPECT_EQ(g.Weight(Edge{1, 2}), 0.5);
  EXPECT_EQ(GraphFromJson(GraphToJson(g)), g);
  EXPECT_EQ(KindOf([] { GraphFromJson(json::parse(R"({"n": 4, "edges": [[0, 1, 3]]})")); }),
            ErrorKind::kFormat);
}

TEST(CorrelationJsonTest, SymmetricCompletion) {
  Matrix m = CorrelationFromJson(json::parse(R"({"n_m": 3, "entries": [[0, 2, 0.5], [1, 1, 0.2]]})"));
  EXPECT_EQ(m[0][2], 0.5);
  EXPECT_EQ(m[2][0], 0.5);
  EXPECT_EQ(m[1][1], 1.0);
  EXPECT_EQ(m[0][1], 0.0);
  EXPECT_EQ(KindOf([] { CorrelationFromJson(json::parse(R"({"n_m": 2, "entries": [[0, 5, 1]]})")); }),
            ErrorKind::kFormat);
}

TEST(ExplanationJsonTest, RoundTrip) {
  Explanation ex;
  ex.graph = "12";
  ex.motif_ids = {3, 8};
  ex.scores = {0.125, -0.0625};
  ex.mask = MaskKind::kRemove;
  ex.weighting = Weighting::kPaperInverse;
  ex.depth = 1;
  ex.query_count = 3;
  ex.masked_value = 0.25;
  const json j = ExplanationToJson(ex);
  EXPECT_EQ(j["graph"], 12);
  EXPECT_EQ(j["depth"], 1);
  EXPECT_EQ(j["mask"], "remove");
  EXPECT_EQ(j["weights"], "paper");
  EXPECT_EQ(j["scores"][1]["motif"], 8);
  Explanation back = ExplanationFromJson(j);
  EXPECT_EQ(back.scores, ex.scores);
  EXPECT_EQ(back.motif_ids, ex.motif_ids);
  EXPECT_EQ(back.depth, ex.depth);
  EXPECT_EQ(back.graph, "12");
  EXPECT_EQ(ExplanationToJson(back), j);

  ex.depth.reset();
  ex.graph = "query.json";
  EXPECT_EQ(ExplanationToJson(ex)["depth"], "exact");
  json many;
  many["explanations"] = {ExplanationToJson(ex), j};
  EXPECT_EQ(ExplanationsFromJson(many).size(), 2u);
  EXPECT_EQ(KindOf([] { ExplanationFromJson(json::parse(R"({"graph": 0})")); }),
            ErrorKind::kFormat);
}

TEST(FileTest, AtomicWriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "motif_shap_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  WriteJsonFile(path, json{{"a", 1}});
  EXPECT_EQ(ReadJsonFile(path)["a"], 1);
  WriteFileAtomic(path, "not json");
  EXPECT_EQ(KindOf([&] { ReadJsonFile(path); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([&] { ReadJsonFile((dir / "missing.json").string()); }),
            ErrorKind::kFormat);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    EXPECT_EQ(entry.path().filename(), "out.json");
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace motif_shap
