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

#include "motif_shap/cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cctype>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "motif_shap/blackbox.hpp"
#include "motif_shap/external_blackbox.hpp"
#include "motif_shap/io.hpp"
#include "motif_shap/masking.hpp"
#include "motif_shap/mining.hpp"
#include "motif_shap/shapley.hpp"
#include "motif_shap/stats.hpp"
#include "motif_shap/synthgen.hpp"

namespace motif_shap::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int ExitCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat:
      return 3;
    case ErrorKind::kTransport:
      return 4;
    default:
      return 2;
  }
}

std::string Sha256Hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    Fail(ErrorKind::kConfiguration, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

namespace {

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Records what a command read and wrote; one manifest file is written next
// to every output once the command has succeeded.
class Manifest {
 public:
  Manifest(std::string subcommand, std::vector<std::string> argv)
      : subcommand_(std::move(subcommand)), argv_(std::move(argv)) {}

  json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  std::string ReadText(const std::string& path) {
    std::string text = ReadTextFile(path);
    inputs_[path] = Sha256Hex(text);
    return text;
  }

  json ReadJson(const std::string& path) {
    json j = json::parse(ReadText(path), nullptr, false);
    Require(!j.is_discarded(), ErrorKind::kFormat,
            "'" + path + "' is not valid JSON");
    return j;
  }

  void Write(const std::string& path, const std::string& content) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) {
      std::error_code ec;
      fs::create_directories(parent, ec);
    }
    WriteFileAtomic(path, content);
    outputs_.emplace_back(path, Sha256Hex(content));
  }

  // Data artifacts are compact; small reports are indented.
  void WriteJson(const std::string& path, const json& j, bool pretty = false) {
    Write(path, (pretty ? j.dump(1) : j.dump()) + "\n");
  }

  void Finish() const {
    if (outputs_.empty()) return;
    json m;
    m["tool"] = "motif-shap";
    m["version"] = kToolVersion;
    m["format"] = kFileFormatVersion;
    m["subcommand"] = subcommand_;
    m["argv"] = argv_;
    m["config"] = config_;
    m["seed"] = seed_ ? json(*seed_) : json(nullptr);
    m["timestamp"] = UtcTimestamp();
    json inputs = json::object();
    for (const auto& [path, digest] : inputs_) inputs[path] = {{"sha256", digest}};
    m["inputs"] = std::move(inputs);
    json outputs = json::object();
    for (const auto& [path, digest] : outputs_) outputs[path] = {{"sha256", digest}};
    m["outputs"] = std::move(outputs);
    for (const auto& [path, digest] : outputs_) {
      WriteFileAtomic(path + ".manifest.json", m.dump(1) + "\n");
    }
  }

 private:
  std::string subcommand_;
  std::vector<std::string> argv_;
  json config_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

std::string Num(double x) { return json(x).dump(); }

// ---------------------------------------------------------------------------
// Black-box selection, shared by explain, eval approx-corr and blackbox-serve.

struct BlackBoxFlags {
  std::string kind = "ground-truth";
  std::string truth_motifs;
  double beta = GroundTruthScorer::kDefaultSteepness;
  std::string train;
  int epochs = 300;
  double lr = 0.1;
  double l2 = 0.0;
  double validation = 0.0;
  std::uint64_t train_seed = 0;
  std::string command;
  int timeout_ms = 30000;
};

void AddBlackBoxFlags(CLI::App* app, BlackBoxFlags& f) {
  app->add_option("--blackbox", f.kind, "ground-truth, linear or external")
      ->check(CLI::IsMember({"ground-truth", "linear", "external"}));
  app->add_option("--truth-motifs", f.truth_motifs,
                  "motifs (with class and rho) scored by the ground-truth model");
  app->add_option("--beta", f.beta, "ground-truth logistic steepness");
  app->add_option("--train", f.train, "dataset the linear surrogate is fit on");
  app->add_option("--epochs", f.epochs, "linear surrogate epochs");
  app->add_option("--lr", f.lr, "linear surrogate learning rate");
  app->add_option("--l2", f.l2, "linear surrogate L2 penalty");
  app->add_option("--validation", f.validation, "held-out fraction");
  app->add_option("--train-seed", f.train_seed, "validation split seed");
  app->add_option("--command", f.command, "external model command line");
  app->add_option("--timeout-ms", f.timeout_ms, "external model reply timeout");
}

std::unique_ptr<BlackBox> MakeBlackBox(const BlackBoxFlags& f,
                                       const std::string& default_motifs,
                                       const std::string& default_dataset,
                                       std::size_t n, Manifest& manifest) {
  json& c = manifest.config()["blackbox"];
  c["kind"] = f.kind;
  if (f.kind == "ground-truth") {
    const std::string path = f.truth_motifs.empty() ? default_motifs : f.truth_motifs;
    Require(!path.empty(), ErrorKind::kConfiguration,
            "the ground-truth black-box needs --truth-motifs");
    MotifCollection truth = MotifsFromJson(manifest.ReadJson(path));
    Require(truth.n == n, ErrorKind::kUniverseMismatch,
            "ground-truth motifs are over a different node universe");
    std::vector<double> importances = truth.rho();
    Require(importances.size() == truth.records.size(), ErrorKind::kConfiguration,
            "ground-truth motifs must all carry \"rho\"");
    for (const MotifRecord& r : truth.records) {
      Require(r.motif.class_sign().has_value(), ErrorKind::kConfiguration,
              "ground-truth motif " + std::to_string(r.motif.id()) +
                  " has no \"class\"");
    }
    c["truth_motifs"] = path;
    c["beta"] = f.beta;
    return std::make_unique<GroundTruthScorer>(n, truth.motifs(),
                                               std::move(importances), f.beta);
  }
  if (f.kind == "linear") {
    const std::string path = f.train.empty() ? default_dataset : f.train;
    Require(!path.empty(), ErrorKind::kConfiguration,
            "the linear black-box needs --train");
    LabeledDataset d = DatasetFromJson(manifest.ReadJson(path));
    Require(d.n() == n, ErrorKind::kUniverseMismatch,
            "training dataset is over a different node universe");
    TrainingConfig config;
    config.learning_rate = f.lr;
    config.epochs = f.epochs;
    config.l2 = f.l2;
    config.validation_fraction = f.validation;
    config.seed = f.train_seed;
    TrainedSurrogate t = TrainLinearSurrogate(d, config);
    c["train"] = path;
    c["epochs"] = f.epochs;
    c["lr"] = f.lr;
    c["l2"] = f.l2;
    c["validation"] = f.validation;
    c["train_seed"] = f.train_seed;
    c["train_accuracy"] = t.report.train_accuracy;
    if (t.report.validation_accuracy) {
      c["validation_accuracy"] = *t.report.validation_accuracy;
    }
    return std::make_unique<LinearSurrogate>(std::move(t.model));
  }
  Require(!f.command.empty(), ErrorKind::kConfiguration,
          "the external black-box needs --command");
  c["command"] = f.command;
  c["timeout_ms"] = f.timeout_ms;
  ExternalOptions options;
  options.timeout = std::chrono::milliseconds(f.timeout_ms);
  return std::make_unique<ExternalBlackBox>(f.command, options);
}

// ---------------------------------------------------------------------------

struct SynthFlags {
  std::size_t nodes = 100;
  std::size_t graphs = 200;
  double density = 0.2;
  std::size_t motifs = 6;
  std::size_t motif_edges = 10;
  std::vector<double> rho;
  std::string corr = "identity";
  std::string motif_set;
  bool overlapping = false;
  std::uint64_t seed = 0;
  std::string out = "dataset.json";
  std::string motifs_out = "motifs.json";
  std::string injections_out = "injections.json";
};

void RunSynth(const SynthFlags& f, Manifest& manifest) {
  SynthConfig config;
  config.n = f.nodes;
  config.n_graphs = f.graphs;
  config.density = f.density;
  config.n_motifs = f.motifs;
  config.motif_edges = f.motif_edges;
  config.disjoint_motifs = !f.overlapping;
  config.rho = f.rho;
  config.seed = f.seed;
  if (!f.motif_set.empty()) {
    MotifCollection given = MotifsFromJson(manifest.ReadJson(f.motif_set));
    Require(given.n == f.nodes, ErrorKind::kUniverseMismatch,
            "motif set is over a different node universe");
    config.motifs = given.motifs();
  }
  const std::size_t n_motifs = config.motifs.empty() ? f.motifs : config.motifs.size();
  if (f.corr != "identity") {
    config.correlation = CorrelationFromJson(manifest.ReadJson(f.corr));
    Require(config.correlation.size() == n_motifs, ErrorKind::kConfiguration,
            "correlation file does not match the motif count");
  }
  SynthResult s = Generate(config);

  json& c = manifest.config();
  c["nodes"] = f.nodes;
  c["graphs"] = f.graphs;
  c["density"] = f.density;
  c["motifs"] = n_motifs;
  c["motif_edges"] = f.motif_edges;
  c["rho"] = f.rho;
  c["corr"] = f.corr;
  c["disjoint"] = !f.overlapping;
  if (!f.motif_set.empty()) c["motif_set"] = f.motif_set;
  manifest.set_seed(f.seed);

  MotifCollection out{f.nodes, {}};
  for (std::size_t k = 0; k < s.motifs.size(); ++k) {
    out.records.push_back({s.motifs[k], f.rho[k], std::nullopt});
  }
  json injections;
  injections["injections"] = s.injections;
  injections["rho"] = f.rho;
  injections["effective_rates"] = s.effective_rates;
  manifest.WriteJson(f.out, DatasetToJson(s.dataset));
  manifest.WriteJson(f.motifs_out, MotifsToJson(out));
  manifest.WriteJson(f.injections_out, injections);
}

struct MineFlags {
  std::string dataset;
  std::size_t support = 25;
  std::size_t max_size = 3;
  std::optional<int> label;
  std::string out = "mined.json";
};

void RunMine(const MineFlags& f, Manifest& manifest) {
  LabeledDataset d = DatasetFromJson(manifest.ReadJson(f.dataset));
  MinerConfig config;
  config.support = f.support;
  config.max_size = f.max_size;
  config.label = f.label;
  std::vector<Motif> mined = Mine(d, config);
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["support"] = f.support;
  manifest.config()["max_size"] = f.max_size;
  manifest.config()["label"] = f.label ? json(*f.label) : json(nullptr);
  MotifCollection out{d.n(), {}};
  for (Motif& m : mined) out.records.push_back({std::move(m), std::nullopt, std::nullopt});
  manifest.WriteJson(f.out, MotifsToJson(out));
}

struct RankFlags {
  std::string dataset;
  std::string motifs;
  double dt = 0.5;
  std::size_t st = 3;
  std::size_t k = 10;
  std::string out = "ranked.json";
};

void RunRank(const RankFlags& f, Manifest& manifest) {
  LabeledDataset d = DatasetFromJson(manifest.ReadJson(f.dataset));
  MotifCollection in = MotifsFromJson(manifest.ReadJson(f.motifs));
  Require(in.n == d.n(), ErrorKind::kUniverseMismatch,
          "motifs and dataset use different node universes");
  RankerConfig config;
  config.distance_threshold = f.dt;
  config.size_threshold = f.st;
  config.k = f.k;
  const std::vector<Motif> motifs = in.motifs();
  std::vector<RankedMotif> ranked = RankAndSelect(motifs, d, config);
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["motifs"] = f.motifs;
  manifest.config()["dt"] = f.dt;
  manifest.config()["st"] = f.st;
  manifest.config()["k"] = f.k;
  MotifCollection out{d.n(), {}};
  for (RankedMotif& r : ranked) {
    std::optional<double> rho;
    for (const MotifRecord& rec : in.records) {
      if (rec.motif.id() == r.motif.id()) rho = rec.rho;
    }
    out.records.push_back({std::move(r.motif), rho, r.cross_support});
  }
  manifest.WriteJson(f.out, MotifsToJson(out));
}

struct ExplainFlags {
  std::string dataset;
  std::string motifs;
  std::string graph = "all";
  std::string mask = "toggle";
  std::string background;
  std::string weights = "classic";
  std::string depth = "exact";
  std::size_t exact_limit = 20;
  std::size_t threads = 0;
  bool dedup = false;
  bool rescale = false;
  std::string out = "explanations.json";
  BlackBoxFlags blackbox;
};

MaskingStrategy MakeStrategy(const std::string& mask, const std::string& background,
                             std::size_t n, Manifest& manifest) {
  const MaskKind kind = ParseMaskKind(mask);
  manifest.config()["mask"] = mask;
  if (kind != MaskKind::kAverage) return MaskingStrategy::Of(kind);
  Require(!background.empty(), ErrorKind::kConfiguration,
          "--mask average requires --background <dataset-file>");
  LabeledDataset bg = DatasetFromJson(manifest.ReadJson(background));
  Require(bg.n() == n, ErrorKind::kUniverseMismatch,
          "background dataset is over a different node universe");
  manifest.config()["background"] = background;
  return MaskingStrategy::Average(bg);
}

std::optional<std::size_t> ParseDepth(const std::string& depth) {
  if (depth == "exact") return std::nullopt;
  Require(!depth.empty() && depth.find_first_not_of("0123456789") == std::string::npos,
          ErrorKind::kInvalidArgument, "--depth must be \"exact\" or a positive integer");
  return static_cast<std::size_t>(std::stoull(depth));
}

ExplainOptions MakeExplainOptions(const std::string& weights, std::size_t exact_limit,
                                  std::size_t threads, bool dedup, bool rescale,
                                  Manifest& manifest) {
  ExplainOptions options;
  options.weighting = ParseWeighting(weights);
  options.exact_limit = exact_limit;
  options.threads = threads;
  options.dedup_masked_graphs = dedup;
  options.rescale = rescale;
  manifest.config()["weights"] = weights;
  manifest.config()["exact_limit"] = exact_limit;
  manifest.config()["dedup"] = dedup;
  manifest.config()["rescale"] = rescale;
  return options;
}

void RunExplain(const ExplainFlags& f, Manifest& manifest) {
  MotifCollection mc = MotifsFromJson(manifest.ReadJson(f.motifs));
  const std::vector<Motif> motifs = mc.motifs();
  std::optional<LabeledDataset> dataset;
  if (!f.dataset.empty()) dataset = DatasetFromJson(manifest.ReadJson(f.dataset));

  // --graph: "all", a row index into --dataset, or a graph file.
  std::optional<Graph> single;
  std::string single_id;
  const bool all = f.graph == "all";
  const bool index = !all && !f.graph.empty() &&
                     f.graph.find_first_not_of("0123456789") == std::string::npos;
  if (all || index) {
    Require(dataset.has_value(), ErrorKind::kConfiguration,
            "--graph " + f.graph + " needs --dataset");
    if (index) {
      const auto row = static_cast<std::size_t>(std::stoull(f.graph));
      Require(row < dataset->size(), ErrorKind::kInvalidArgument,
              "graph index " + f.graph + " out of range");
      single = dataset->graph(row);
      single_id = f.graph;
    }
  } else {
    single = GraphFromJson(manifest.ReadJson(f.graph));
    single_id = f.graph;
  }
  const std::size_t n = single ? single->n() : dataset->n();
  Require(mc.n == n, ErrorKind::kUniverseMismatch,
          "motifs and graphs use different node universes");

  const std::optional<std::size_t> depth = ParseDepth(f.depth);
  manifest.config()["motifs"] = f.motifs;
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["graph"] = f.graph;
  manifest.config()["depth"] = f.depth;
  const MaskingStrategy strategy = MakeStrategy(f.mask, f.background, n, manifest);
  const ExplainOptions options = MakeExplainOptions(
      f.weights, f.exact_limit, f.threads, f.dedup, f.rescale, manifest);
  if (!depth) {
    Require(motifs.size() <= options.exact_limit, ErrorKind::kLatticeTooLarge,
            "exact explanation of " + std::to_string(motifs.size()) +
                " motifs exceeds the limit of " + std::to_string(options.exact_limit) +
                "; use --depth <d> or raise --exact-limit");
  }
  std::unique_ptr<BlackBox> b =
      MakeBlackBox(f.blackbox, f.motifs, f.dataset, n, manifest);

  if (single) {
    Explanation ex = depth ? ApproxExplain(*single, *b, motifs, strategy, *depth, options)
                           : ExactExplain(*single, *b, motifs, strategy, options);
    ex.graph = single_id;
    manifest.WriteJson(f.out, ExplanationToJson(ex));
    return;
  }
  std::vector<Explanation> all_ex =
      ExplainDataset(*dataset, *b, motifs, strategy, depth, options);
  json list = json::array();
  for (const Explanation& ex : all_ex) list.push_back(ExplanationToJson(ex));
  json j;
  j["explanations"] = std::move(list);
  manifest.WriteJson(f.out, j);
}

// ---------------------------------------------------------------------------

struct SeparabilityFlags {
  std::string dataset;
  std::optional<std::size_t> max_per_class;
  std::uint64_t seed = 0;
  std::string out = "separability.json";
  std::string csv;
};

void RunSeparability(const SeparabilityFlags& f, Manifest& manifest) {
  LabeledDataset d = DatasetFromJson(manifest.ReadJson(f.dataset));
  SeparabilityOptions options;
  options.max_graphs_per_class = f.max_per_class;
  options.seed = f.seed;
  SeparabilityReport r = Separability(d, options);
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["max_per_class"] =
      f.max_per_class ? json(*f.max_per_class) : json(nullptr);
  if (f.max_per_class) manifest.set_seed(f.seed);
  json j;
  j["ks_statistic"] = r.ks_statistic;
  j["p_value"] = r.p_value;
  j["intra_count"] = r.intra_count;
  j["inter_count"] = r.inter_count;
  manifest.WriteJson(f.out, j, true);
  if (!f.csv.empty()) {
    manifest.Write(f.csv, "ks_statistic,p_value,intra_count,inter_count\n" +
                              Num(r.ks_statistic) + "," + Num(r.p_value) + "," +
                              std::to_string(r.intra_count) + "," +
                              std::to_string(r.inter_count) + "\n");
  }
}

struct ExpectedFlags {
  std::string dataset;
  std::string motifs;
  std::string injections;
  std::string explanations;
  std::string out = "expected.json";
  std::string csv;
};

std::optional<std::size_t> RowIndex(const std::string& graph) {
  if (graph.empty() || graph.find_first_not_of("0123456789") != std::string::npos) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(std::stoull(graph));
}

void RunExpected(const ExpectedFlags& f, Manifest& manifest) {
  MotifCollection mc = MotifsFromJson(manifest.ReadJson(f.motifs));
  const std::vector<double> rho = mc.rho();
  Require(rho.size() == mc.records.size(), ErrorKind::kConfiguration,
          "expected scores need \"rho\" on every motif");
  InjectionMatrix injections;
  if (!f.injections.empty()) {
    json j = manifest.ReadJson(f.injections);
    Require(j.contains("injections"), ErrorKind::kFormat,
            "injection file lacks \"injections\"");
    injections = j["injections"].get<InjectionMatrix>();
  } else {
    Require(!f.dataset.empty(), ErrorKind::kConfiguration,
            "eval expected needs --dataset or --injections");
    LabeledDataset d = DatasetFromJson(manifest.ReadJson(f.dataset));
    Require(d.injections().has_value(), ErrorKind::kConfiguration,
            "dataset carries no injection record; pass --injections");
    injections = *d.injections();
  }
  const std::vector<Motif> motifs = mc.motifs();
  Matrix table = ExpectedScores(injections, motifs, rho);
  manifest.config()["motifs"] = f.motifs;
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["injections"] = f.injections;
  manifest.config()["explanations"] = f.explanations;

  json j;
  j["expected"] = table;
  std::ostringstream csv;
  if (f.explanations.empty()) {
    csv << "graph,motif,expected\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t k = 0; k < motifs.size(); ++k) {
        csv << i << ',' << motifs[k].id() << ',' << Num(table[i][k]) << '\n';
      }
    }
  } else {
    std::map<std::int64_t, std::size_t> column;
    for (std::size_t k = 0; k < motifs.size(); ++k) column[motifs[k].id()] = k;
    std::vector<double> xs;
    std::vector<double> ys;
    csv << "graph,motif,expected,xi\n";
    for (const Explanation& ex :
         ExplanationsFromJson(manifest.ReadJson(f.explanations))) {
      const std::optional<std::size_t> row = RowIndex(ex.graph);
      Require(row && *row < table.size(), ErrorKind::kFormat,
              "explanation graph '" + ex.graph + "' is not a dataset row");
      for (std::size_t k = 0; k < ex.scores.size(); ++k) {
        auto it = column.find(ex.motif_ids[k]);
        Require(it != column.end(), ErrorKind::kFormat,
                "explanation mentions unknown motif " + std::to_string(ex.motif_ids[k]));
        xs.push_back(ex.scores[k]);
        ys.push_back(table[*row][it->second]);
        csv << *row << ',' << ex.motif_ids[k] << ',' << Num(ys.back()) << ','
            << Num(xs.back()) << '\n';
      }
    }
    j["spearman"] = Spearman(xs, ys);
    j["pearson"] = Pearson(xs, ys);
    j["pairs"] = xs.size();
  }
  manifest.WriteJson(f.out, j);
  if (!f.csv.empty()) manifest.Write(f.csv, csv.str());
}

struct ApproxCorrFlags {
  std::string dataset;
  std::string motifs;
  std::string mask = "toggle";
  std::string background;
  std::string weights = "classic";
  std::size_t exact_limit = 20;
  std::size_t threads = 0;
  std::optional<std::size_t> limit;
  std::string out = "approx_corr.json";
  std::string csv;
  BlackBoxFlags blackbox;
};

json SummaryToJson(const Summary& s) {
  return {{"count", s.count}, {"min", s.min}, {"q1", s.q1}, {"median", s.median},
          {"q3", s.q3},       {"max", s.max}, {"mean", s.mean}};
}

void RunApproxCorr(const ApproxCorrFlags& f, Manifest& manifest) {
  LabeledDataset full = DatasetFromJson(manifest.ReadJson(f.dataset));
  MotifCollection mc = MotifsFromJson(manifest.ReadJson(f.motifs));
  Require(mc.n == full.n(), ErrorKind::kUniverseMismatch,
          "motifs and dataset use different node universes");
  const std::vector<Motif> motifs = mc.motifs();
  LabeledDataset d = full;
  if (f.limit && *f.limit < full.size()) {
    std::vector<Graph> graphs(full.graphs().begin(),
                              full.graphs().begin() + static_cast<std::ptrdiff_t>(*f.limit));
    std::vector<int> labels(full.labels().begin(),
                            full.labels().begin() + static_cast<std::ptrdiff_t>(*f.limit));
    d = LabeledDataset(full.n(), std::move(graphs), std::move(labels));
  }
  manifest.config()["dataset"] = f.dataset;
  manifest.config()["motifs"] = f.motifs;
  manifest.config()["limit"] = f.limit ? json(*f.limit) : json(nullptr);
  const MaskingStrategy strategy = MakeStrategy(f.mask, f.background, d.n(), manifest);
  const ExplainOptions options =
      MakeExplainOptions(f.weights, f.exact_limit, f.threads, false, false, manifest);
  std::unique_ptr<BlackBox> b = MakeBlackBox(f.blackbox, f.motifs, f.dataset, d.n(), manifest);
  std::vector<DepthCorrelation> rows =
      ApproximationCorrelations(d, *b, motifs, strategy, options);

  json depths = json::array();
  std::ostringstream csv;
  csv << "depth,graph,pearson\n";
  for (const DepthCorrelation& dc : rows) {
    json entry;
    entry["depth"] = dc.depth;
    entry["undefined"] = dc.undefined;
    entry["summary"] = dc.pearson.empty() ? json(nullptr) : SummaryToJson(Summarize(dc.pearson));
    depths.push_back(std::move(entry));
    for (std::size_t i = 0; i < dc.pearson.size(); ++i) {
      csv << dc.depth << ',' << i << ',' << Num(dc.pearson[i]) << '\n';
    }
  }
  json j;
  j["motifs"] = motifs.size();
  j["graphs"] = d.size();
  j["depths"] = std::move(depths);
  manifest.WriteJson(f.out, j, true);
  if (!f.csv.empty()) manifest.Write(f.csv, csv.str());
}

struct GlobalFlags {
  std::string explanations;
  std::string motifs;
  std::string out = "global.json";
  std::string csv;
};

void RunGlobal(const GlobalFlags& f, Manifest& manifest) {
  std::vector<Explanation> all = ExplanationsFromJson(manifest.ReadJson(f.explanations));
  std::map<std::int64_t, double> rho;
  if (!f.motifs.empty()) {
    for (const MotifRecord& r : MotifsFromJson(manifest.ReadJson(f.motifs)).records) {
      if (r.rho) rho[r.motif.id()] = *r.rho;
    }
  }
  manifest.config()["explanations"] = f.explanations;
  manifest.config()["motifs"] = f.motifs;
  std::vector<GlobalRankEntry> ranking = GlobalRanking(all);
  json list = json::array();
  std::ostringstream csv;
  csv << "motif,rho,mean_xi,mean_abs_xi\n";
  // The CSV follows motif order; the JSON ranking follows mean |xi|.
  std::vector<GlobalRankEntry> by_motif(ranking);
  const auto& ids = all.front().motif_ids;
  std::sort(by_motif.begin(), by_motif.end(), [&](const auto& a, const auto& b) {
    return std::find(ids.begin(), ids.end(), a.motif_id) <
           std::find(ids.begin(), ids.end(), b.motif_id);
  });
  for (const GlobalRankEntry& e : ranking) {
    json entry{{"motif", e.motif_id}, {"mean_abs_xi", e.mean_abs_score},
               {"mean_xi", e.mean_score}};
    if (auto it = rho.find(e.motif_id); it != rho.end()) entry["rho"] = it->second;
    list.push_back(std::move(entry));
  }
  for (const GlobalRankEntry& e : by_motif) {
    auto it = rho.find(e.motif_id);
    csv << e.motif_id << ',' << (it == rho.end() ? "" : Num(it->second)) << ','
        << Num(e.mean_score) << ',' << Num(e.mean_abs_score) << '\n';
  }
  json j;
  j["graphs"] = all.size();
  j["ranking"] = std::move(list);
  manifest.WriteJson(f.out, j, true);
  if (!f.csv.empty()) manifest.Write(f.csv, csv.str());
}

// ---------------------------------------------------------------------------

struct ServeFlags {
  std::string motifs;
  std::size_t nodes = 0;
  BlackBoxFlags blackbox;
};

int RunServe(const ServeFlags& f, std::istream& in, std::ostream& out) {
  Require(f.blackbox.kind != "external", ErrorKind::kConfiguration,
          "blackbox-serve wraps a built-in model, not an external one");
  // Without a manifest to write, the inputs are only read.
  Manifest scratch("blackbox-serve", {});
  std::size_t n = f.nodes;
  if (n == 0) {
    const std::string path = f.blackbox.kind == "linear"
                                 ? f.blackbox.train
                                 : (f.blackbox.truth_motifs.empty() ? f.motifs
                                                                     : f.blackbox.truth_motifs);
    Require(!path.empty(), ErrorKind::kConfiguration,
            "blackbox-serve needs --truth-motifs or --train");
    n = scratch.ReadJson(path).value("n", std::size_t{0});
  }
  std::unique_ptr<BlackBox> b = MakeBlackBox(f.blackbox, f.motifs, "", n, scratch);
  ServeBlackBox(*b, in, out);
  return 0;
}

// ---------------------------------------------------------------------------

std::vector<std::string> StageArgs(const json& stage) {
  std::vector<std::string> args;
  if (stage.is_array()) {
    for (const json& a : stage) {
      Require(a.is_string(), ErrorKind::kFormat, "pipeline argv entries must be strings");
      args.push_back(a.get<std::string>());
    }
    return args;
  }
  Require(stage.is_object() && stage.contains("command") && stage["command"].is_string(),
          ErrorKind::kFormat, "pipeline stage needs a \"command\"");
  std::istringstream words(stage["command"].get<std::string>());
  for (std::string w; words >> w;) args.push_back(w);
  if (stage.contains("args")) {
    Require(stage["args"].is_object(), ErrorKind::kFormat,
            "pipeline stage \"args\" must be an object");
    for (const auto& [key, value] : stage["args"].items()) {
      const std::string flag = "--" + key;
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back(flag);
      } else if (value.is_array()) {
        std::string joined;
        for (const json& v : value) {
          if (!joined.empty()) joined += ",";
          joined += v.is_string() ? v.get<std::string>() : v.dump();
        }
        args.push_back(flag);
        args.push_back(joined);
      } else if (!value.is_null()) {
        args.push_back(flag);
        args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
  }
  return args;
}

int RunPipeline(const std::string& config_path, const std::string& workdir,
                std::istream& in, std::ostream& out, std::ostream& err) {
  json config = json::parse(ReadTextFile(config_path), nullptr, false);
  Require(!config.is_discarded() && config.is_object(), ErrorKind::kFormat,
          "'" + config_path + "' is not a pipeline configuration");
  const json stages = config.value("stages", json::array());
  Require(stages.is_array(), ErrorKind::kFormat, "pipeline \"stages\" must be an array");
  std::vector<std::vector<std::string>> argvs;
  for (const json& stage : stages) {
    argvs.push_back(StageArgs(stage));
    Require(argvs.back().empty() || argvs.back().front() != "pipeline",
            ErrorKind::kConfiguration, "pipelines cannot nest");
  }

  const fs::path previous = fs::current_path();
  if (!workdir.empty()) {
    fs::create_directories(workdir);
    fs::current_path(workdir);
  }
  int code = 0;
  for (std::size_t i = 0; i < argvs.size() && code == 0; ++i) {
    out << "[" << (i + 1) << "/" << argvs.size() << "]";
    for (const std::string& a : argvs[i]) out << ' ' << a;
    out << std::endl;
    code = Run(argvs[i], in, out, err);
  }
  if (!workdir.empty()) fs::current_path(previous);
  return code;
}

int RunRerun(const std::string& manifest_path, std::istream& in, std::ostream& out,
             std::ostream& err) {
  json m = json::parse(ReadTextFile(manifest_path), nullptr, false);
  Require(!m.is_discarded() && m.contains("argv") && m.contains("outputs"),
          ErrorKind::kFormat, "'" + manifest_path + "' is not a run manifest");
  const auto argv = m["argv"].get<std::vector<std::string>>();
  Require(!argv.empty() && argv.front() != "rerun", ErrorKind::kFormat,
          "manifest has no command to rerun");
  const int code = Run(argv, in, out, err);
  if (code != 0) return code;
  for (const auto& [path, entry] : m["outputs"].items()) {
    const std::string digest = Sha256Hex(ReadTextFile(path));
    Require(digest == entry.value("sha256", ""), ErrorKind::kConfiguration,
            "rerun output '" + path + "' differs from the manifest");
  }
  out << "reproduced " << m["outputs"].size() << " output(s)" << std::endl;
  return 0;
}

void ReportError(std::ostream& err, std::string_view kind, std::string_view detail) {
  err << json{{"error", kind}, {"detail", detail}}.dump() << std::endl;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Motif-based Shapley explanations for graph classifiers", "motif-shap"};
  app.set_version_flag("--version",
                       "motif-shap " + std::string(kToolVersion) + " (file format " +
                           std::to_string(kFileFormatVersion) + ", wire protocol " +
                           std::string(kProtocolVersion) + ")");
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a labelled synthetic dataset");
  synth_cmd->add_option("--nodes", synth.nodes)->capture_default_str();
  synth_cmd->add_option("--graphs", synth.graphs)->capture_default_str();
  synth_cmd->add_option("--density", synth.density)->capture_default_str();
  synth_cmd->add_option("--motifs", synth.motifs, "number of motifs to sample")->capture_default_str();
  synth_cmd->add_option("--motif-edges", synth.motif_edges)->capture_default_str();
  synth_cmd->add_option("--rho", synth.rho, "comma-separated perturbation probabilities")
      ->delimiter(',')
      ->required();
  synth_cmd->add_option("--corr", synth.corr, "correlation file or 'identity'")->capture_default_str();
  synth_cmd->add_option("--motif-set", synth.motif_set, "inject these motifs instead of sampling");
  synth_cmd->add_flag("--overlapping", synth.overlapping, "allow motifs to share nodes");
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out)->capture_default_str();
  synth_cmd->add_option("--motifs-out", synth.motifs_out)->capture_default_str();
  synth_cmd->add_option("--injections-out", synth.injections_out)->capture_default_str();

  MineFlags mine;
  auto* mine_cmd = app.add_subcommand("mine", "mine frequent connected motifs");
  mine_cmd->add_option("--dataset", mine.dataset)->required();
  mine_cmd->add_option("--support", mine.support)->capture_default_str();
  mine_cmd->add_option("--max-size", mine.max_size)->capture_default_str();
  mine_cmd->add_option("--label", mine.label, "mine within one class only");
  mine_cmd->add_option("--out", mine.out)->capture_default_str();

  RankFlags rank;
  auto* rank_cmd = app.add_subcommand("rank", "select diverse discriminative motifs");
  rank_cmd->add_option("--dataset", rank.dataset)->required();
  rank_cmd->add_option("--motifs", rank.motifs)->required();
  rank_cmd->add_option("--dt", rank.dt)->capture_default_str();
  rank_cmd->add_option("--st", rank.st)->capture_default_str();
  rank_cmd->add_option("--k", rank.k)->capture_default_str();
  rank_cmd->add_option("--out", rank.out)->capture_default_str();

  ExplainFlags explain;
  auto* explain_cmd = app.add_subcommand("explain", "motif explanation scores");
  explain_cmd->add_option("--dataset", explain.dataset);
  explain_cmd->add_option("--motifs", explain.motifs)->required();
  explain_cmd->add_option("--graph", explain.graph, "'all', a dataset row, or a graph file")
      ->capture_default_str();
  explain_cmd->add_option("--mask", explain.mask)
      ->check(CLI::IsMember({"remove", "average", "toggle"}))
      ->capture_default_str();
  explain_cmd->add_option("--background", explain.background, "dataset for --mask average");
  explain_cmd->add_option("--weights", explain.weights)
      ->check(CLI::IsMember({"classic", "paper", "paper-direct"}))
      ->capture_default_str();
  explain_cmd->add_option("--depth", explain.depth, "'exact' or a depth >= 1")->capture_default_str();
  explain_cmd->add_option("--exact-limit", explain.exact_limit)->capture_default_str();
  explain_cmd->add_option("--threads", explain.threads);
  explain_cmd->add_flag("--dedup", explain.dedup, "query identical masked graphs once");
  explain_cmd->add_flag("--rescale", explain.rescale, "rescale approximations to the efficiency gap");
  explain_cmd->add_option("--out", explain.out)->capture_default_str();
  AddBlackBoxFlags(explain_cmd, explain.blackbox);

  auto* eval_cmd = app.add_subcommand("eval", "evaluation reports");
  eval_cmd->require_subcommand(1);

  SeparabilityFlags sep;
  auto* sep_cmd = eval_cmd->add_subcommand("separability", "KS test of intra/inter distances");
  sep_cmd->add_option("--dataset", sep.dataset)->required();
  sep_cmd->add_option("--max-per-class", sep.max_per_class);
  sep_cmd->add_option("--seed", sep.seed);
  sep_cmd->add_option("--out", sep.out)->capture_default_str();
  sep_cmd->add_option("--csv", sep.csv);

  ExpectedFlags expected;
  auto* exp_cmd = eval_cmd->add_subcommand("expected", "expected explanation scores");
  exp_cmd->add_option("--dataset", expected.dataset);
  exp_cmd->add_option("--motifs", expected.motifs)->required();
  exp_cmd->add_option("--injections", expected.injections);
  exp_cmd->add_option("--explanations", expected.explanations);
  exp_cmd->add_option("--out", expected.out)->capture_default_str();
  exp_cmd->add_option("--csv", expected.csv);

  ApproxCorrFlags approx;
  auto* approx_cmd = eval_cmd->add_subcommand("approx-corr", "depth vs exact Pearson");
  approx_cmd->add_option("--dataset", approx.dataset)->required();
  approx_cmd->add_option("--motifs", approx.motifs)->required();
  approx_cmd->add_option("--mask", approx.mask)
      ->check(CLI::IsMember({"remove", "average", "toggle"}))
      ->capture_default_str();
  approx_cmd->add_option("--background", approx.background);
  approx_cmd->add_option("--weights", approx.weights)
      ->check(CLI::IsMember({"classic", "paper", "paper-direct"}))
      ->capture_default_str();
  approx_cmd->add_option("--exact-limit", approx.exact_limit)->capture_default_str();
  approx_cmd->add_option("--threads", approx.threads);
  approx_cmd->add_option("--limit", approx.limit, "use the first N graphs");
  approx_cmd->add_option("--out", approx.out)->capture_default_str();
  approx_cmd->add_option("--csv", approx.csv);
  AddBlackBoxFlags(approx_cmd, approx.blackbox);

  GlobalFlags global;
  auto* global_cmd = eval_cmd->add_subcommand("global", "mean |xi| ranking");
  global_cmd->add_option("--explanations", global.explanations)->required();
  global_cmd->add_option("--motifs", global.motifs, "motif file providing rho");
  global_cmd->add_option("--out", global.out)->capture_default_str();
  global_cmd->add_option("--csv", global.csv);

  std::string pipeline_config;
  std::string pipeline_workdir;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run a staged configuration");
  pipeline_cmd->add_option("--config", pipeline_config)->required();
  pipeline_cmd->add_option("--workdir", pipeline_workdir, "run the stages in this directory");

  std::string rerun_manifest;
  auto* rerun_cmd = app.add_subcommand("rerun", "replay a run manifest and check outputs");
  rerun_cmd->add_option("--manifest", rerun_manifest)->required();

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand(
      "blackbox-serve", "serve a built-in model over the line protocol on stdin/stdout");
  serve_cmd->add_option("--motifs", serve.motifs, "ground-truth motif file");
  serve_cmd->add_option("--nodes", serve.nodes, "node universe size");
  AddBlackBoxFlags(serve_cmd, serve.blackbox);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    ReportError(err, "usage", e.what());
    return 2;
  }

  std::string name;
  for (CLI::App* sub = &app; !sub->get_subcommands().empty();) {
    sub = sub->get_subcommands().front();
    name += (name.empty() ? "" : " ") + sub->get_name();
  }
  Manifest manifest(name, args);
  try {
    if (synth_cmd->parsed()) {
      RunSynth(synth, manifest);
    } else if (mine_cmd->parsed()) {
      RunMine(mine, manifest);
    } else if (rank_cmd->parsed()) {
      RunRank(rank, manifest);
    } else if (explain_cmd->parsed()) {
      RunExplain(explain, manifest);
    } else if (sep_cmd->parsed()) {
      RunSeparability(sep, manifest);
    } else if (exp_cmd->parsed()) {
      RunExpected(expected, manifest);
    } else if (approx_cmd->parsed()) {
      RunApproxCorr(approx, manifest);
    } else if (global_cmd->parsed()) {
      RunGlobal(global, manifest);
    } else if (pipeline_cmd->parsed()) {
      return RunPipeline(pipeline_config, pipeline_workdir, in, out, err);
    } else if (rerun_cmd->parsed()) {
      return RunRerun(rerun_manifest, in, out, err);
    } else if (serve_cmd->parsed()) {
      return RunServe(serve, in, out);
    }
    manifest.Finish();
  } catch (const Error& e) {
    ReportError(err, ErrorKindName(e.kind()), e.what());
    return ExitCode(e.kind());
  } catch (const json::exception& e) {
    ReportError(err, ErrorKindName(ErrorKind::kFormat), e.what());
    return 3;
  } catch (const std::exception& e) {
    ReportError(err, "internal", e.what());
    return 2;
  }
  return 0;
}

}  // namespace motif_shap::cli
