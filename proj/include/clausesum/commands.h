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


// Workflow commands behind the clausesum CLI. Each command reads its inputs
// from disk, writes its outputs, and is deterministic given its options.

#ifndef CLAUSESUM_COMMANDS_H_
#define CLAUSESUM_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clausesum/btrank.h"
#include "clausesum/bws.h"
#include "clausesum/corpus.h"
#include "clausesum/rankers.h"

namespace clausesum::commands {

namespace fs = std::filesystem;

// Sentence files are named <contract_id>.sentences.jsonl.
inline constexpr char kSentenceSuffix[] = ".sentences.jsonl";
inline constexpr char kSummarySuffix[] = ".summary.json";

// Loads a corpus config, or the defaults when `path` is empty.
corpus::CorpusConfig LoadCorpusConfig(const fs::path& path);

// Reads one sentence file, or every sentence file in a directory, keyed by
// contract id.
std::map<std::string, corpus::Contract> LoadContracts(
    const fs::path& path, const corpus::CorpusConfig& config);

// Gold score file written by Aggregate, keyed by (contract_id, party).
std::map<bws::GroupKey, btrank::ScoreTable> LoadScoreGroups(const fs::path& path);

// Pairwise predictions; records may carry contract_id and party to scope
// them. Unscoped records apply to every (contract, party).
struct ScopedComparisons {
  std::map<bws::GroupKey, std::vector<btrank::PairwiseComparison>> scoped;
  std::vector<btrank::PairwiseComparison> unscoped;

  std::vector<btrank::PairwiseComparison> For(const std::string& contract_id,
                                              const std::string& party) const;
};
ScopedComparisons LoadPairwise(const fs::path& path);

struct IngestOptions {
  fs::path input;   // a .txt file or a directory of them
  fs::path config;  // corpus config JSON; empty for defaults
  fs::path out;     // output directory
};
// Writes <out>/<stem>.sentences.jsonl per contract; returns the written paths.
std::vector<fs::path> Ingest(const IngestOptions& options);

struct CategorizeOptions {
  fs::path sentences;
  fs::path config;
  fs::path lexicon;  // empty for the built-in lexicon
  fs::path out;      // prediction JSON Lines file
};
// Rule-based labels for every kept sentence and party.
size_t Categorize(const CategorizeOptions& options);

struct GenTuplesOptions {
  fs::path sentences;
  fs::path config;
  double factor = 1.5;
  int min_occurrences = 6;
  uint64_t seed = 0;
  fs::path out;  // tuple JSON Lines file
};
// One design per (contract, party) over the contract's kept sentences, each
// seeded with seed + its position in (contract, party) order.
size_t GenTuples(const GenTuplesOptions& options);

struct SimulateOptions {
  fs::path tuples;
  uint64_t seed = 0;
  int annotators = 2;
  bool random = false;  // uniform picks instead of a planted ranking
  double noise = 0.0;   // chance that a consistent annotator picks at random
  fs::path out;         // annotation log
};
// Synthetic annotators over a planted per-sentence importance.
size_t Simulate(const SimulateOptions& options);

struct AggregateOptions {
  fs::path log;
  fs::path tuples;
  uint64_t seed = 0;
  int repetitions = 100;
  double pseudo = 0.1;
  fs::path out;  // directory for scores.json and reliability.json
};
void Aggregate(const AggregateOptions& options);

enum class CategorySource { kRule, kImported, kGold };
CategorySource ParseCategorySource(const std::string& name);

struct SummarizeOptions {
  fs::path sentences;
  fs::path config;
  fs::path lexicon;
  std::string party;  // empty for every party
  rankers::RankerConfig ranker;
  CategorySource categories = CategorySource::kRule;
  fs::path predictions;  // label file for imported or gold categories
  fs::path pairwise;     // model ranker input
  fs::path gold_scores;  // oracle ranker input (scores.json)
  double cr = 0.1;
  int cap = 10;
  fs::path out;
};
// Writes <contract>.<party>.summary.json and .summary.txt per pair.
std::vector<fs::path> Summarize(const SummarizeOptions& options);

struct ReferenceOptions {
  fs::path sentences;
  fs::path config;
  std::string party;
  fs::path gold_labels;
  fs::path gold_scores;
  double cr = 0.1;
  int cap = 10;
  fs::path out;
};
std::vector<fs::path> Reference(const ReferenceOptions& options);

struct EvalOptions {
  fs::path predicted;  // directory of summaries
  fs::path reference;  // directory of reference summaries
  fs::path out;        // directory for report.csv and report.json
};
// Every predicted summary needs a reference with the same file name.
void Eval(const EvalOptions& options);

struct ServeOptions {
  fs::path tuples;
  fs::path sentences;  // optional; supplies sentence texts
  fs::path config;
  fs::path log;
  fs::path static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  int annotations_per_tuple = 2;
  int lease_seconds = 1800;
};
// Serves until SIGINT or SIGTERM, then flushes the log.
void Serve(const ServeOptions& options);

}  // namespace clausesum::commands

#endif  // CLAUSESUM_COMMANDS_H_
