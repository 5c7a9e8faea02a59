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

// Bradley-Terry strengths from partial pairwise comparisons. The fitted
// strengths are the fixed point of the minorize-maximize update of
// Hunter (2004):
//
//   s_i <- W_i / sum_{j != i} n_ij / (s_i + s_j)
//
// where W_i is the total weight of i's wins and n_ij the total weight of
// comparisons between i and j. Every update increases the log-likelihood
//
//   L(s) = sum_{(w beats l)} weight * log(s_w / (s_w + s_l)).
//
// The MLE does not exist when the comparison graph is disconnected or an item
// never wins (or never loses). A pseudo-count regularizes both cases: each item
// plays a virtual game of total weight `pseudo` against a dummy anchor, won
// and lost half each. The anchor is fitted like any other item and dropped
// from the returned table.

#ifndef CLAUSESUM_BTRANK_H_
#define CLAUSESUM_BTRANK_H_

#include <filesystem>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "clausesum/jsonl.h"

namespace clausesum::btrank {

// Sentence index within a contract. Ties are always broken by ascending id.
using ItemId = int;

struct PairwiseComparison {
  ItemId winner = 0;
  ItemId loser = 0;
  double weight = 1.0;

  bool operator==(const PairwiseComparison&) const = default;
};

enum class Normalization { kSumToOne, kLogCentered, kNone };

std::string_view NormalizationName(Normalization normalization);
Normalization ParseNormalization(std::string_view name);

struct ScoreTable {
  std::map<ItemId, double> scores;
  Normalization normalization = Normalization::kSumToOne;
};

struct RankedList {
  std::vector<ItemId> items;
  std::vector<double> scores;  // aligned with items, non-increasing
};

struct FitOptions {
  double tol = 1e-8;     // on max |delta log s| between iterations
  int max_iter = 10000;
  double pseudo = 0.1;   // anchor pseudo-count; 0 gives the plain MLE
};

// Fits strengths for every item that appears in a comparison and returns them
// normalized to sum to one. The fit stops at the first iterate where one MM
// update would change no log strength by tol or more; iterates are produced by
// Newton steps on the log strengths, falling back to the MM update itself.
// Throws kEmptyInput on no comparisons, kInvalidArgument on self-comparisons
// or non-positive weights, and ConvergenceError (carrying the last iterate, in
// ascending item order) when max_iter is exhausted or, with pseudo == 0, some
// item has no wins.
ScoreTable FitBradleyTerry(std::span<const PairwiseComparison> comparisons,
                           const FitOptions& options = {},
                           int* iterations = nullptr);

// Log-likelihood of the comparisons under the given strengths.
double LogLikelihood(std::span<const PairwiseComparison> comparisons,
                     const ScoreTable& table);

// Converts a positive table to log scores with zero mean.
ScoreTable ToLogCentered(const ScoreTable& table);

// Descending score; ties by ascending id.
RankedList RankFromScores(const ScoreTable& table);

struct DerivedPairs {
  std::vector<PairwiseComparison> pairs;
  // Unordered pairs whose scores were exactly equal; the lower id was made the
  // winner.
  std::vector<std::pair<ItemId, ItemId>> ties;
};

// One comparison per unordered pair, C(N, 2) in total. Throws kEmptyInput for
// fewer than two items.
DerivedPairs DeriveAllPairs(const ScoreTable& table);

// s_a / (s_a + s_b). Throws kUnknownItem for ids missing from the table.
double PairProbability(const ScoreTable& table, ItemId a, ItemId b);

// Ranks with ties replaced by the mean of the ranks they span (1-based).
std::vector<double> AverageRanks(std::span<const double> values);

// Pearson correlation of the average ranks. Throws kUndefinedCorrelation for
// mismatched lengths, fewer than two values, or a constant input.
double Spearman(std::span<const double> xs, std::span<const double> ys);

// JSON Lines {winner, loser, weight}.
Json ComparisonRecord(const PairwiseComparison& comparison);
std::string ToComparisonJsonLines(std::span<const PairwiseComparison> comparisons);
std::vector<PairwiseComparison> ReadComparisons(const std::filesystem::path& path);

// {"normalization": "...", "scores": {"<id>": value, ...}}
Json ScoreTableToJson(const ScoreTable& table);
ScoreTable ScoreTableFromJson(const Json& json);

}  // namespace clausesum::btrank

#endif  // CLAUSESUM_BTRANK_H_
