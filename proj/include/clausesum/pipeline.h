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


// End-to-end summarization for one (contract, party): cluster sentences by
// category, rank each cluster, and keep the top m_c sentences of category c
// under a compression-ratio budget. Also builds gold reference summaries and
// scores predicted summaries against them.

#ifndef CLAUSESUM_PIPELINE_H_
#define CLAUSESUM_PIPELINE_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clausesum/btrank.h"
#include "clausesum/categorize.h"
#include "clausesum/corpus.h"
#include "clausesum/jsonl.h"
#include "clausesum/rankers.h"

namespace clausesum::pipeline {

using categorize::Category;
using Budget = std::map<Category, int>;

// B = round(cr * n_total) sentences are split across categories in proportion
// to their counts with largest-remainder rounding (remainder ties go to the
// earlier category). A category whose share reaches min(cap, count) is pinned
// there and the rest of B is split again over the others; whatever cannot be
// placed is dropped. Throws kEmptyContract for n_total == 0 and
// kInvalidArgument for cr outside (0, 1] or negative counts.
Budget BudgetPerCategory(double cr, const std::map<Category, int>& counts,
                         int n_total, int cap = 10);

struct SummaryItem {
  int index = 0;
  std::string text;
  double score = 0.0;
};

struct SummarySection {
  int candidates = 0;  // cluster size
  int budget = 0;
  std::vector<SummaryItem> selected;  // decreasing importance

  std::vector<int> Indices() const;
};

struct Summary {
  std::string contract_id;
  std::string party;
  std::string ranker;
  double compression_ratio = 0.0;
  int cap = 10;
  int total_kept = 0;
  std::map<Category, SummarySection> sections;  // all three categories
};

struct SummaryOptions {
  double cr = 0.1;
  int cap = 10;
  rankers::RankerConfig ranker;
};

// `predictions` are category labels; those for other contracts or parties
// are ignored. `inputs` supplies gold scores or pairwise predictions when the
// ranker needs them.
Summary BuildSummary(const corpus::Contract& contract, const std::string& party,
                     const std::vector<categorize::CategoryPrediction>& predictions,
                     const SummaryOptions& options,
                     const rankers::RankerInputs& inputs = {},
                     std::vector<std::string>* warnings = nullptr);

// BuildSummary with the oracle ranker over gold labels and gold scores.
// Throws kMissingGold when either is empty for this (contract, party).
Summary BuildReference(const corpus::Contract& contract, const std::string& party,
                       const std::vector<categorize::CategoryPrediction>& gold_labels,
                       const btrank::ScoreTable& gold_scores, double cr,
                       int cap = 10);

Json SummaryToJson(const Summary& summary);
Summary SummaryFromJson(const Json& json);
// Plain-text rendering grouped by category, most important first.
std::string RenderSummary(const Summary& summary);

inline constexpr std::array<int, 4> kDefaultKs = {1, 3, 5, 10};

struct MetricRow {
  std::string contract_id;
  std::string party;
  std::string category;
  std::map<int, double> p_at_k;
  std::map<int, double> r_at_k;
  std::map<int, double> f1_at_k;
  double map = 0.0;
  double ndcg = 0.0;

  // Column order: P@k, R@k, F1@k for each k, then MAP and NDCG.
  std::vector<std::string> MetricNames() const;
  std::vector<double> MetricValues() const;
};

// Binary relevance: predicted[i] is relevant iff it is in `reference`.
// P@k and R@k use the first min(k, |predicted|) predictions, P@0 = 0.
// MAP = sum over k of P@k * (R@k - R@(k-1)); NDCG is DCG over the first n
// predictions divided by the DCG of min(n, |reference|) leading hits.
// Returns nullopt with a warning for an empty reference; throws
// kInvalidRanking on duplicate ids.
std::optional<MetricRow> RankingMetrics(std::span<const int> predicted,
                                        std::span<const int> reference,
                                        std::span<const int> ks = kDefaultKs,
                                        int n = 10,
                                        std::vector<std::string>* warnings = nullptr);

struct Report {
  std::vector<MetricRow> rows;
  std::vector<std::string> metric_names;
  // Mean over categories within (contract, party), then over parties within a
  // contract, then over contracts.
  std::map<std::string, double> averages;
  std::map<std::string, std::map<std::string, double>> contract_averages;
};

// Throws kEmptyReport when rows is empty.
Report AggregateReport(std::vector<MetricRow> rows);

// One row per category with a non-empty reference section. Throws
// kInvalidArgument when the two summaries belong to different
// (contract, party) pairs.
std::vector<MetricRow> EvaluateSummary(const Summary& predicted,
                                       const Summary& reference,
                                       std::vector<std::string>* warnings = nullptr);

// CSV with a header, one line per row and an "AVERAGE" footer.
std::string ReportToCsv(const Report& report);
Json ReportToJson(const Report& report);

}  // namespace clausesum::pipeline

#endif  // CLAUSESUM_PIPELINE_H_
