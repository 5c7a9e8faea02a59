// Copyright 2026 The Clausesum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "clausesum/commands.h"

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <set>
#include <thread>

#include "clausesum/annotsvc.h"
#include "clausesum/categorize.h"
#include "clausesum/error.h"
#include "clausesum/pipeline.h"
#include "clausesum/rng.h"
#include "spdlog/spdlog.h"

namespace clausesum::commands {
namespace {

constexpr char kSimulatedTimestamp[] = "2000-01-01T00:00:00Z";

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void RequireExists(const fs::path& path, const char* what) {
  if (path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is required");
  }
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, std::string(what) + " " + path.string() +
                                    " does not exist");
  }
}

// Regular files in `dir` whose names end with `suffix`, sorted by name.
std::vector<fs::path> ListFiles(const fs::path& dir, const std::string& suffix) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && EndsWith(entry.path().filename().string(), suffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> PartyNames(const corpus::CorpusConfig& config) {
  std::vector<std::string> names;
  for (const auto& party : config.parties) names.push_back(party.canonical);
  return names;
}

std::vector<std::string> SelectedParties(const corpus::CorpusConfig& config,
                                         const std::string& party) {
  if (party.empty()) return PartyNames(config);
  for (const auto& p : config.parties) {
    if (p.canonical == party) return {party};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown party '" + party + "'");
}

void WriteJson(const fs::path& path, const Json& json) {
  io::WriteFile(path, json.dump(2) + "\n");
}

std::string SummaryStem(const std::string& contract_id, const std::string& party) {
  return contract_id + "." + party;
}

std::vector<fs::path> WriteSummaries(const std::vector<pipeline::Summary>& summaries,
                                     const fs::path& out) {
  std::vector<fs::path> written;
  for (const auto& summary : summaries) {
    const std::string stem = SummaryStem(summary.contract_id, summary.party);
    const fs::path json_path = out / (stem + kSummarySuffix);
    WriteJson(json_path, pipeline::SummaryToJson(summary));
    io::WriteFile(out / (stem + ".summary.txt"), pipeline::RenderSummary(summary));
    written.push_back(json_path);
  }
  return written;
}

}  // namespace

corpus::CorpusConfig LoadCorpusConfig(const fs::path& path) {
  if (path.empty()) return corpus::CorpusConfig::Default();
  RequireExists(path, "corpus config");
  return corpus::CorpusConfig::Load(path);
}

std::map<std::string, corpus::Contract> LoadContracts(
    const fs::path& path, const corpus::CorpusConfig& config) {
  RequireExists(path, "sentence input");
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    files = ListFiles(path, kSentenceSuffix);
  } else {
    files.push_back(path);
  }
  if (files.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no *" + std::string(kSentenceSuffix) + " files in " + path.string());
  }
  std::map<std::string, corpus::Contract> contracts;
  for (const auto& file : files) {
    corpus::Contract contract = corpus::ReadSentenceJsonLines(file, config);
    const std::string id = contract.id;
    if (!contracts.emplace(id, std::move(contract)).second) {
      throw Error(ErrorCode::kInvalidArgument, "contract '" + id + "' appears twice");
    }
  }
  return contracts;
}

std::map<bws::GroupKey, btrank::ScoreTable> LoadScoreGroups(const fs::path& path) {
  RequireExists(path, "gold score file");
  std::map<bws::GroupKey, btrank::ScoreTable> groups;
  try {
    const Json json = Json::parse(io::ReadFile(path));
    for (const auto& group : json.at("groups")) {
      groups[{group.at("contract_id").get<std::string>(),
              group.at("party").get<std::string>()}] =
          btrank::ScoreTableFromJson(group);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return groups;
}

std::vector<btrank::PairwiseComparison> ScopedComparisons::For(
    const std::string& contract_id, const std::string& party) const {
  std::vector<btrank::PairwiseComparison> out = unscoped;
  auto it = scoped.find({contract_id, party});
  if (it != scoped.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

ScopedComparisons LoadPairwise(const fs::path& path) {
  RequireExists(path, "pairwise prediction file");
  ScopedComparisons result;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kImportError)) {
    const std::string where = path.string() + ":" + std::to_string(line_number);
    btrank::PairwiseComparison c;
    try {
      c.winner = record.at("winner").get<int>();
      c.loser = record.at("loser").get<int>();
      c.weight = record.value("weight", 1.0);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kImportError, where + ": " + e.what());
    }
    if (c.winner == c.loser || !(c.weight > 0.0)) {
      throw Error(ErrorCode::kImportError, where + ": invalid comparison");
    }
    if (record.contains("contract_id")) {
      result.scoped[{record["contract_id"].get<std::string>(),
                     record.value("party", "")}]
          .push_back(c);
    } else {
      result.unscoped.push_back(c);
    }
  }
  return result;
}

std::vector<fs::path> Ingest(const IngestOptions& options) {
  RequireExists(options.input, "input");
  const corpus::CorpusConfig config = LoadCorpusConfig(options.config);
  std::vector<fs::path> inputs;
  if (fs::is_directory(options.input)) {
    inputs = ListFiles(options.input, ".txt");
  } else {
    inputs.push_back(options.input);
  }
  if (inputs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no .txt contracts in " + options.input.string());
  }
  std::vector<fs::path> written;
  for (const auto& input : inputs) {
    const std::string id = input.stem().string();
    corpus::Contract contract =
        corpus::LoadContract(io::ReadFile(input), config, id);
    contract = corpus::FilterSentences(contract, config.definitional_patterns);
    const fs::path out = options.out / (id + kSentenceSuffix);
    io::WriteFile(out, corpus::ToSentenceJsonLines(contract));
    spdlog::info("{}: {} sentences, {} kept", id, contract.sentences.size(),
                 contract.KeptCount());
    written.push_back(out);
  }
  return written;
}

size_t Categorize(const CategorizeOptions& options) {
  const corpus::CorpusConfig config = LoadCorpusConfig(options.config);
  const auto lexicon = options.lexicon.empty()
                           ? categorize::TriggerLexicon::Default()
                           : categorize::TriggerLexicon::Load(options.lexicon);
  std::vector<categorize::CategoryPrediction> predictions;
  for (const auto& [id, contract] : LoadContracts(options.sentences, config)) {
    auto p = categorize::PredictRule(contract, lexicon);
    predictions.insert(predictions.end(), p.begin(), p.end());
  }
  io::WriteFile(options.out, categorize::ToPredictionJsonLines(predictions));
  return predictions.size();
}

size_t GenTuples(const GenTuplesOptions& options) {
  const corpus::CorpusConfig config = LoadCorpusConfig(options.config);
  std::vector<bws::Tuple4> all;
  uint64_t offset = 0;
  for (const auto& [id, contract] : LoadContracts(options.sentences, config)) {
    std::vector<int> kept;
    for (const auto& s : contract.sentences) {
      if (s.kept) kept.push_back(s.index);
    }
    for (const auto& party : contract.parties) {
      bws::TupleDesignOptions design{options.factor, options.min_occurrences,
                                     options.seed + offset++};
      auto tuples = bws::GenerateTuples(kept, design, id, party.canonical);
      all.insert(all.end(), tuples.begin(), tuples.end());
    }
  }
  io::WriteFile(options.out, bws::ToTupleJsonLines(all));
  return all.size();
}

size_t Simulate(const SimulateOptions& options) {
  RequireExists(options.tuples, "tuple file");
  if (options.annotators <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "annotators must be positive");
  }
  const auto tuples = bws::ReadTuples(options.tuples);

  using Key = std::tuple<std::string, std::string, int>;
  std::set<Key> keys;
  for (const auto& t : tuples) {
    for (int m : t.members) keys.insert({t.contract_id, t.party, m});
  }
  Rng planted_rng(options.seed);
  std::map<Key, double> planted;
  for (const auto& key : keys) planted[key] = planted_rng.UniformDouble();

  Rng rng(options.seed + 1);
  std::vector<Json> records;
  for (const auto& t : tuples) {
    for (int a = 1; a <= options.annotators; ++a) {
      int best = 0, worst = 0;
      const bool random =
          options.random || (options.noise > 0.0 && rng.UniformDouble() < options.noise);
      if (random) {
        const size_t b = rng.UniformInt(4);
        size_t w = rng.UniformInt(3);
        if (w >= b) ++w;
        best = t.members[b];
        worst = t.members[w];
      } else {
        auto score = [&](int m) { return planted.at({t.contract_id, t.party, m}); };
        best = *std::max_element(t.members.begin(), t.members.end(),
                                 [&](int x, int y) { return score(x) < score(y); });
        worst = *std::min_element(t.members.begin(), t.members.end(),
                                  [&](int x, int y) { return score(x) < score(y); });
      }
      records.push_back(bws::AnnotationRecord(bws::ValidateAnnotation(
          t, best, worst, "sim-" + std::to_string(a), kSimulatedTimestamp)));
    }
  }
  io::WriteFile(options.out, io::ToJsonLines(records));
  return records.size();
}

void Aggregate(const AggregateOptions& options) {
  RequireExists(options.log, "annotation log");
  RequireExists(options.tuples, "tuple file");
  const auto annotations = bws::ReadAnnotations(options.log);
  if (annotations.empty()) {
    throw Error(ErrorCode::kEmptyInput, "annotation log " +
                                            options.log.string() + " is empty");
  }
  const auto tuple_list = bws::ReadTuples(options.tuples);
  const bws::TupleIndex tuples = bws::IndexTuples(tuple_list);

  btrank::FitOptions fit;
  fit.pseudo = options.pseudo;
  Json groups = Json::array();
  for (const auto& [key, pairs] : bws::PairsByGroup(annotations, tuples)) {
    Json group = btrank::ScoreTableToJson(btrank::FitBradleyTerry(pairs, fit));
    group["contract_id"] = key.first;
    group["party"] = key.second;
    group["comparisons"] = pairs.size();
    groups.push_back(std::move(group));
  }
  WriteJson(options.out / "scores.json", {{"groups", groups}});

  std::vector<std::string> warnings;
  Json reliability = {{"repetitions_requested", options.repetitions},
                      {"seed", options.seed}};
  try {
    const auto shr = bws::SplitHalfReliability(annotations, tuples,
                                               options.repetitions, options.seed,
                                               &warnings);
    reliability["mean"] = shr.mean;
    reliability["std"] = shr.stddev;
    reliability["repetitions"] = shr.repetitions;
    reliability["tuples_used"] = shr.tuples_used;
    reliability["tuples_excluded"] = shr.tuples_excluded;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientAnnotations &&
        e.code() != ErrorCode::kUndefinedCorrelation) {
      throw;
    }
    spdlog::warn("{}", e.what());
    reliability["mean"] = nullptr;
    reliability["error"] = e.what();
  }
  reliability["warnings"] = warnings;
  WriteJson(options.out / "reliability.json", reliability);
}

CategorySource ParseCategorySource(const std::string& name) {
  if (name == "rule") return CategorySource::kRule;
  if (name == "imported") return CategorySource::kImported;
  if (name == "gold") return CategorySource::kGold;
  throw Error(ErrorCode::kInvalidArgument, "unknown category source '" + name + "'");
}

std::vector<fs::path> Summarize(const SummarizeOptions& options) {
  const corpus::CorpusConfig config = LoadCorpusConfig(options.config);
  const auto contracts = LoadContracts(options.sentences, config);
  const auto parties = SelectedParties(config, options.party);

  std::vector<categorize::CategoryPrediction> labels;
  if (options.categories == CategorySource::kRule) {
    const auto lexicon = options.lexicon.empty()
                             ? categorize::TriggerLexicon::Default()
                             : categorize::TriggerLexicon::Load(options.lexicon);
    for (const auto& [id, contract] : contracts) {
      auto p = categorize::PredictRule(contract, lexicon);
      labels.insert(labels.end(), p.begin(), p.end());
    }
  } else {
    RequireExists(options.predictions, "category prediction file");
    labels = categorize::ImportPredictions(
        options.predictions,
        options.categories == CategorySource::kGold ? categorize::LabelSource::kGold
                                                    : categorize::LabelSource::kImported,
        PartyNames(config));
  }

  std::map<bws::GroupKey, btrank::ScoreTable> gold;
  if (options.ranker.kind == rankers::RankerKind::kOracle) {
    gold = LoadScoreGroups(options.gold_scores);
  }
  ScopedComparisons pairwise;
  if (options.ranker.kind == rankers::RankerKind::kModel) {
    pairwise = LoadPairwise(options.pairwise);
  }

  pipeline::SummaryOptions summary_options;
  summary_options.cr = options.cr;
  summary_options.cap = options.cap;
  summary_options.ranker = options.ranker;
  std::vector<pipeline::Summary> summaries;
  for (const auto& [id, contract] : contracts) {
    for (const auto& party : parties) {
      rankers::RankerInputs inputs;
      auto gold_it = gold.find({id, party});
      if (gold_it != gold.end()) inputs.gold = &gold_it->second;
      const auto comparisons = pairwise.For(id, party);
      inputs.pairwise = comparisons;
      summaries.push_back(pipeline::BuildSummary(contract, party, labels,
                                                 summary_options, inputs));
    }
  }
  return WriteSummaries(summaries, options.out);
}

std::vector<fs::path> Reference(const ReferenceOptions& options) {
  const corpus::CorpusConfig config = LoadCorpusConfig(options.config);
  const auto contracts = LoadContracts(options.sentences, config);
  const auto parties = SelectedParties(config, options.party);
  RequireExists(options.gold_labels, "gold label file");
  const auto labels = categorize::ImportPredictions(
      options.gold_labels, categorize::LabelSource::kGold, PartyNames(config));
  const auto gold = LoadScoreGroups(options.gold_scores);

  std::vector<pipeline::Summary> summaries;
  for (const auto& [id, contract] : contracts) {
    for (const auto& party : parties) {
      auto it = gold.find({id, party});
      if (it == gold.end()) {
        throw Error(ErrorCode::kMissingGold,
                    "no gold scores for " + id + "/" + party);
      }
      summaries.push_back(pipeline::BuildReference(contract, party, labels,
                                                   it->second, options.cr,
                                                   options.cap));
    }
  }
  return WriteSummaries(summaries, options.out);
}

void Eval(const EvalOptions& options) {
  RequireExists(options.predicted, "predicted summary directory");
  RequireExists(options.reference, "reference summary directory");
  const auto files = ListFiles(options.predicted, kSummarySuffix);
  if (files.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no summaries in " + options.predicted.string());
  }
  std::vector<pipeline::MetricRow> rows;
  for (const auto& file : files) {
    const fs::path ref = options.reference / file.filename();
    if (!fs::exists(ref)) {
      throw Error(ErrorCode::kIo, "missing reference summary " + ref.string());
    }
    const auto predicted =
        pipeline::SummaryFromJson(Json::parse(io::ReadFile(file)));
    const auto reference = pipeline::SummaryFromJson(Json::parse(io::ReadFile(ref)));
    auto r = pipeline::EvaluateSummary(predicted, reference);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const pipeline::Report report = pipeline::AggregateReport(std::move(rows));
  io::WriteFile(options.out / "report.csv", pipeline::ReportToCsv(report));
  WriteJson(options.out / "report.json", pipeline::ReportToJson(report));
}

void Serve(const ServeOptions& options) {
  RequireExists(options.tuples, "tuple file");
  if (options.log.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "annotation log path is required");
  }
  auto tuples = bws::ReadTuples(options.tuples);
  std::map<std::string, corpus::Contract> contracts;
  if (!options.sentences.empty()) {
    contracts = LoadContracts(options.sentences, LoadCorpusConfig(options.config));
  }
  annotsvc::AnnotationService service(
      std::move(tuples), std::move(contracts), options.log,
      {options.annotations_per_tuple, options.lease_seconds});

  // Signals are taken synchronously by this thread; server threads inherit
  // the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  annotsvc::HttpServer server(service, options.static_dir);
  const int port = server.Bind(options.host, options.port);
  if (port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + options.host + ":" +
                                    std::to_string(options.port));
  }
  std::cout << "listening on http://" << options.host << ":" << port << std::endl;

  std::atomic<bool> stopping = false;
  std::thread worker([&] {
    const bool ok = server.Serve();
    if (!stopping) {
      if (!ok) spdlog::error("server stopped unexpectedly");
      kill(getpid(), SIGTERM);
    }
  });
  int received = 0;
  sigwait(&signals, &received);
  stopping = true;
  server.Stop();
  worker.join();
  const auto log = service.ExportLog();
  spdlog::info("stopped; annotation log flushed to {}", log.string());
}

}  // namespace clausesum::commands
