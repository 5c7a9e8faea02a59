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


// Sentence rankers applied to one (contract, party, category) candidate set:
// seeded random order, TextRank and LexRank over a TF-ISF cosine graph, LSA,
// KL-Sum, the gold-score oracle and Bradley-Terry over imported pairwise
// predictions.
//
// Every ranker returns a permutation of the candidate indices. Scores within a
// relative 1e-9 of each other are treated as tied; tied runs are ordered by
// ascending sentence index and reported with their mean score.

#ifndef CLAUSESUM_RANKERS_H_
#define CLAUSESUM_RANKERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clausesum/btrank.h"
#include "clausesum/categorize.h"
#include "clausesum/corpus.h"

namespace clausesum::rankers {

using btrank::RankedList;

struct CandidateSet {
  std::string contract_id;
  std::string party;
  categorize::Category category = categorize::Category::kObligation;
  std::vector<int> indices;  // document order
  std::vector<std::string> texts;

  // Kept sentences of `contract` at `indices`, sorted into document order.
  static CandidateSet FromContract(const corpus::Contract& contract,
                                   const std::string& party,
                                   categorize::Category category,
                                   std::vector<int> indices);
  // Anonymous set with indices 0..n-1.
  static CandidateSet FromTexts(std::vector<std::string> texts);
  size_t size() const { return indices.size(); }
};

struct SimilarityGraph {
  std::vector<int> nodes;
  std::vector<std::vector<double>> weights;  // symmetric, zero diagonal
};

// Cosine similarity of TF-ISF vectors, where
// isf(t) = ln((1 + N) / (1 + sf(t))) + 1 and sf(t) counts the candidate
// sentences containing t. Sentences without content tokens have no edges.
SimilarityGraph BuildSimilarityGraph(const CandidateSet& candidates);

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-6;   // on the L1 change between iterates
  int max_iter = 100;
};

struct PageRankResult {
  std::vector<double> scores;  // sums to 1
  int iterations = 0;
  double delta = 0.0;          // L1 change at the last iteration
};

// Weighted PageRank with uniform teleport. Dangling nodes spread their mass
// uniformly. Throws ConvergenceError when max_iter is exhausted.
PageRankResult PageRank(const std::vector<std::vector<double>>& weights,
                        const PageRankOptions& options = {});

// Orders (index, score) pairs by descending score with the tie rule above.
RankedList RankByScore(std::span<const int> indices,
                       std::span<const double> scores);

RankedList RankRandom(const CandidateSet& candidates, uint64_t seed);

RankedList RankTextRank(const CandidateSet& candidates,
                        const PageRankOptions& options = {},
                        PageRankResult* diagnostics = nullptr);

// Drops edges with similarity <= threshold before running PageRank on the
// remaining weighted graph.
RankedList RankLexRank(const CandidateSet& candidates, double threshold = 0.1,
                       const PageRankOptions& options = {},
                       PageRankResult* diagnostics = nullptr);

// Scores sentence s by sqrt(sum_k (sigma_k * v_ks)^2) over the top `topics`
// singular triplets of the term x sentence frequency matrix. topics <= 0
// selects min(3, N). Throws kDegenerateInput when no candidate has a content
// token.
RankedList RankLsa(const CandidateSet& candidates, int topics = 0);

// Greedy KL-Sum: repeatedly appends the sentence that minimizes
// KL(P_doc || P_summary) with add-0.001 smoothing over the candidate
// vocabulary, lower index first on ties. Once the selected sentences hold at
// least budget_tokens content tokens the rest follow in document order;
// budget_tokens <= 0 orders every candidate greedily. Scores are N - position.
RankedList RankKlSum(const CandidateSet& candidates, int budget_tokens = 0);

// KL(P_doc || P_summary) for the given selection; exposed for testing.
double KlDivergence(const CandidateSet& candidates,
                    std::span<const int> selected_positions);

// Throws kMissingGold if a candidate has no gold score.
RankedList RankOracle(const CandidateSet& candidates,
                      const btrank::ScoreTable& gold);

// Fits Bradley-Terry on the predictions whose endpoints are both candidates.
// Candidates absent from those predictions follow in document order with score
// 0 and a warning. Throws kNoPredictions when no prediction applies.
RankedList RankModel(const CandidateSet& candidates,
                     std::span<const btrank::PairwiseComparison> predictions,
                     const btrank::FitOptions& options = {},
                     std::vector<std::string>* warnings = nullptr);

enum class RankerKind { kRandom, kKlSum, kLsa, kTextRank, kLexRank, kOracle, kModel };

std::string_view RankerName(RankerKind kind);
RankerKind ParseRanker(std::string_view name);

struct RankerConfig {
  RankerKind kind = RankerKind::kTextRank;
  uint64_t seed = 0;
  PageRankOptions pagerank;
  double lexrank_threshold = 0.1;
  int lsa_topics = 0;
  int klsum_budget_tokens = 0;
  btrank::FitOptions fit;
};

// Evidence for the oracle and model rankers, for one (contract, party).
struct RankerInputs {
  const btrank::ScoreTable* gold = nullptr;
  std::span<const btrank::PairwiseComparison> pairwise;
};

RankedList Rank(const CandidateSet& candidates, const RankerConfig& config,
                const RankerInputs& inputs = {},
                std::vector<std::string>* warnings = nullptr);

}  // namespace clausesum::rankers

#endif  // CLAUSESUM_RANKERS_H_
