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

// Best-Worst Scaling over 4-tuples of contract sentences: tuple design,
// annotation validation, conversion to pairwise comparisons, counting scores
// and split-half reliability.

#ifndef CLAUSESUM_BWS_H_
#define CLAUSESUM_BWS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clausesum/btrank.h"
#include "clausesum/jsonl.h"

namespace clausesum::bws {

struct Tuple4 {
  std::string tuple_id;
  std::string contract_id;
  std::string party;
  std::array<int, 4> members{};  // distinct sentence indices, display order

  bool Contains(int index) const;
};

struct BwsAnnotation {
  std::string tuple_id;
  std::string annotator_id;
  int best = 0;
  int worst = 0;
  std::string timestamp;  // ISO-8601 UTC

  bool operator==(const BwsAnnotation&) const = default;
};

using TupleIndex = std::map<std::string, Tuple4>;

TupleIndex IndexTuples(std::span<const Tuple4> tuples);

struct TupleDesignOptions {
  double factor = 1.5;
  int min_occurrences = 6;
  uint64_t seed = 0;
};

// Returns exactly ceil(factor * N) unique 4-tuples in which every id occurs at
// least min_occurrences times.
//
// The ids are laid out as ceil(4T / N) independent seeded shuffles back to
// back, truncated to 4T slots and chunked into T tuples; the first
// floor(4T / N) >= min_occurrences shuffles are complete, which fixes the
// coverage. Chunks with a repeated member (at shuffle seams) or a repeated
// member set are then repaired by swapping slots with other tuples, which
// leaves every occurrence count unchanged.
//
// Throws kInfeasibleDesign when N < 16 or 4 * factor < min_occurrences, and
// kInvalidArgument on duplicate ids.
std::vector<Tuple4> GenerateTuples(std::span<const int> sentence_ids,
                                   const TupleDesignOptions& options,
                                   const std::string& contract_id = "",
                                   const std::string& party = "");

// Throws kInvalidPick unless best != worst and both are members.
BwsAnnotation ValidateAnnotation(const Tuple4& tuple, int best, int worst,
                                 std::string annotator_id = "",
                                 std::string timestamp = "");

// Five comparisons per annotation: best beats the other three, and the two
// middle members beat worst. Throws kMissingTuple for unknown tuple ids and
// kInvalidPick for annotations that do not validate against their tuple.
std::vector<btrank::PairwiseComparison> TuplesToPairs(
    std::span<const BwsAnnotation> annotations, const TupleIndex& tuples);

// TuplesToPairs split by (contract_id, party).
using GroupKey = std::pair<std::string, std::string>;
std::map<GroupKey, std::vector<btrank::PairwiseComparison>> PairsByGroup(
    std::span<const BwsAnnotation> annotations, const TupleIndex& tuples);

// best_count / appearances - worst_count / appearances per id in the universe,
// where appearances counts annotations of tuples containing the id. Ids that
// never appear score 0 and produce a warning. Annotations must all belong to
// one (contract, party) group.
btrank::ScoreTable CountingScores(std::span<const BwsAnnotation> annotations,
                                  std::span<const int> universe,
                                  const TupleIndex& tuples,
                                  std::vector<std::string>* warnings = nullptr);

struct SplitHalfResult {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over repetitions
  int repetitions = 0;  // repetitions with a defined correlation
  int tuples_used = 0;
  int tuples_excluded = 0;
};

// For each repetition i (seeded with seed + i), every tuple with two or more
// annotations has its annotations shuffled and dealt into two bins; counting
// scores are computed per bin and per (contract, party) group, concatenated in
// a fixed item order, and correlated with Spearman. Tuples with a single
// annotation are excluded with a warning. Throws kInsufficientAnnotations if
// no tuple has two annotations.
SplitHalfResult SplitHalfReliability(std::span<const BwsAnnotation> annotations,
                                     const TupleIndex& tuples,
                                     int repetitions = 100, uint64_t seed = 0,
                                     std::vector<std::string>* warnings = nullptr);

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcNowIso8601();

// Tuple file: {tuple_id, contract_id, party, members:[4 ints]}.
Json TupleRecord(const Tuple4& tuple);
Tuple4 TupleFromJson(const Json& json);
std::string ToTupleJsonLines(std::span<const Tuple4> tuples);
std::vector<Tuple4> ReadTuples(const std::filesystem::path& path);

// Annotation log: {tuple_id, annotator_id, best, worst, timestamp}.
Json AnnotationRecord(const BwsAnnotation& annotation);
BwsAnnotation AnnotationFromJson(const Json& json);
std::vector<BwsAnnotation> ReadAnnotations(const std::filesystem::path& path);

}  // namespace clausesum::bws

#endif  // CLAUSESUM_BWS_H_
