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


#include "clausesum/rankers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "clausesum/error.h"
#include "clausesum/linalg.h"
#include "clausesum/rng.h"
#include "clausesum/text.h"
#include "spdlog/spdlog.h"

namespace clausesum::rankers {
namespace {

constexpr double kTieTolerance = 1e-9;
constexpr double kKlSmoothing = 0.001;

using TermCounts = std::map<std::string, int>;

std::vector<TermCounts> CountTerms(const CandidateSet& candidates) {
  std::vector<TermCounts> counts(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (auto& token : text::ContentTokens(candidates.texts[i])) {
      ++counts[i][token];
    }
  }
  return counts;
}

void RequireNonEmpty(const CandidateSet& candidates) {
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyInput, "empty candidate set");
  }
}

}  // namespace

CandidateSet CandidateSet::FromContract(const corpus::Contract& contract,
                                        const std::string& party,
                                        categorize::Category category,
                                        std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  CandidateSet set;
  set.contract_id = contract.id;
  set.party = party;
  set.category = category;
  for (int index : indices) {
    if (index < 0 || index >= static_cast<int>(contract.sentences.size()) ||
        !contract.sentences[index].kept) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sentence " + std::to_string(index) +
                      " is not a kept sentence of " + contract.id);
    }
    set.indices.push_back(index);
    set.texts.push_back(contract.sentences[index].text);
  }
  return set;
}

CandidateSet CandidateSet::FromTexts(std::vector<std::string> texts) {
  CandidateSet set;
  set.indices.resize(texts.size());
  std::iota(set.indices.begin(), set.indices.end(), 0);
  set.texts = std::move(texts);
  return set;
}

SimilarityGraph BuildSimilarityGraph(const CandidateSet& candidates) {
  const size_t n = candidates.size();
  const auto counts = CountTerms(candidates);
  std::map<std::string, int> sentence_frequency;
  for (const auto& c : counts) {
    for (const auto& [term, tf] : c) ++sentence_frequency[term];
  }
  std::vector<std::map<std::string, double>> vectors(n);
  std::vector<double> norms(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& [term, tf] : counts[i]) {
      const double isf =
          std::log((1.0 + n) / (1.0 + sentence_frequency[term])) + 1.0;
      const double w = tf * isf;
      vectors[i][term] = w;
      norms[i] += w * w;
    }
    norms[i] = std::sqrt(norms[i]);
  }

  SimilarityGraph graph;
  graph.nodes = candidates.indices;
  graph.weights.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) continue;
      double dot = 0.0;
      for (const auto& [term, w] : vectors[i]) {
        auto it = vectors[j].find(term);
        if (it != vectors[j].end()) dot += w * it->second;
      }
      const double sim = std::clamp(dot / (norms[i] * norms[j]), 0.0, 1.0);
      graph.weights[i][j] = graph.weights[j][i] = sim;
    }
  }
  return graph;
}

PageRankResult PageRank(const std::vector<std::vector<double>>& weights,
                        const PageRankOptions& options) {
  const size_t n = weights.size();
  PageRankResult result;
  if (n == 0) return result;
  if (!(options.damping >= 0.0 && options.damping < 1.0) || options.max_iter <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad PageRank options");
  }
  std::vector<double> out_degree(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (weights[i].size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "weight matrix is not square");
    }
    for (size_t j = 0; j < n; ++j) {
      if (i != j) out_degree[i] += weights[i][j];
    }
  }

  const double d = options.damping;
  std::vector<double> p(n, 1.0 / n), next(n);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    double dangling = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (out_degree[j] == 0.0) dangling += p[j];
    }
    const double base = (1.0 - d) / n + d * dangling / n;
    for (size_t i = 0; i < n; ++i) {
      double inflow = 0.0;
      for (size_t j = 0; j < n; ++j) {
        if (j != i && out_degree[j] > 0.0) {
          inflow += weights[j][i] / out_degree[j] * p[j];
        }
      }
      next[i] = base + d * inflow;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double delta = 0.0;
    for (size_t i = 0; i < n; ++i) {
      next[i] /= total;
      delta += std::abs(next[i] - p[i]);
    }
    p.swap(next);
    result.iterations = iter;
    result.delta = delta;
    if (delta < options.tol) {
      result.scores = std::move(p);
      return result;
    }
  }
  throw ConvergenceError("PageRank did not converge in " +
                             std::to_string(options.max_iter) + " iterations",
                         p);
}

RankedList RankByScore(std::span<const int> indices,
                       std::span<const double> scores) {
  if (indices.size() != scores.size()) {
    throw Error(ErrorCode::kInvalidArgument, "indices and scores differ in size");
  }
  std::vector<size_t> order(indices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return indices[a] < indices[b];
  });
  double scale = 0.0;
  for (double s : scores) scale = std::max(scale, std::abs(s));
  const double tolerance = kTieTolerance * scale;

  RankedList list;
  list.items.reserve(order.size());
  list.scores.reserve(order.size());
  size_t begin = 0;
  while (begin < order.size()) {
    size_t end = begin + 1;
    while (end < order.size() &&
           scores[order[begin]] - scores[order[end]] <= tolerance) {
      ++end;
    }
    std::vector<size_t> run(order.begin() + begin, order.begin() + end);
    std::sort(run.begin(), run.end(),
              [&](size_t a, size_t b) { return indices[a] < indices[b]; });
    double mean = 0.0;
    for (size_t k : run) mean += scores[k];
    mean /= static_cast<double>(run.size());
    for (size_t k : run) {
      list.items.push_back(indices[k]);
      list.scores.push_back(mean);
    }
    begin = end;
  }
  return list;
}

RankedList RankRandom(const CandidateSet& candidates, uint64_t seed) {
  std::vector<int> order = candidates.indices;
  Rng rng(seed);
  rng.Shuffle(order);
  RankedList list;
  list.items = order;
  for (size_t i = 0; i < order.size(); ++i) {
    list.scores.push_back(static_cast<double>(order.size() - i));
  }
  return list;
}

RankedList RankTextRank(const CandidateSet& candidates,
                        const PageRankOptions& options,
                        PageRankResult* diagnostics) {
  RequireNonEmpty(candidates);
  const SimilarityGraph graph = BuildSimilarityGraph(candidates);
  PageRankResult result = PageRank(graph.weights, options);
  RankedList list = RankByScore(candidates.indices, result.scores);
  if (diagnostics != nullptr) *diagnostics = std::move(result);
  return list;
}

RankedList RankLexRank(const CandidateSet& candidates, double threshold,
                       const PageRankOptions& options,
                       PageRankResult* diagnostics) {
  RequireNonEmpty(candidates);
  SimilarityGraph graph = BuildSimilarityGraph(candidates);
  for (auto& row : graph.weights) {
    for (double& w : row) {
      if (w <= threshold) w = 0.0;
    }
  }
  PageRankResult result = PageRank(graph.weights, options);
  RankedList list = RankByScore(candidates.indices, result.scores);
  if (diagnostics != nullptr) *diagnostics = std::move(result);
  return list;
}

RankedList RankLsa(const CandidateSet& candidates, int topics) {
  RequireNonEmpty(candidates);
  const auto counts = CountTerms(candidates);
  std::map<std::string, int> vocabulary;
  for (const auto& c : counts) {
    for (const auto& [term, tf] : c) vocabulary.emplace(term, 0);
  }
  if (vocabulary.empty()) {
    throw Error(ErrorCode::kDegenerateInput,
                "no content tokens in the candidate set");
  }
  int row = 0;
  for (auto& [term, id] : vocabulary) id = row++;

  const auto n = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(row, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (const auto& [term, tf] : counts[s]) a(vocabulary[term], s) = tf;
  }
  const linalg::Svd svd = linalg::ThinSvd(a);
  Eigen::Index k = topics > 0 ? topics : 3;
  k = std::min({k, n, static_cast<Eigen::Index>(svd.singular_values.size())});

  std::vector<double> scores(candidates.size(), 0.0);
  for (Eigen::Index s = 0; s < n; ++s) {
    double sum = 0.0;
    for (Eigen::Index t = 0; t < k; ++t) {
      const double x = svd.singular_values(t) * svd.v(s, t);
      sum += x * x;
    }
    scores[s] = std::sqrt(sum);
  }
  return RankByScore(candidates.indices, scores);
}

namespace {

double KlFromCounts(const TermCounts& doc, int doc_total,
                    const TermCounts& summary, int summary_total) {
  if (doc_total == 0) return 0.0;
  const double denom = summary_total + kKlSmoothing * doc.size();
  double kl = 0.0;
  for (const auto& [term, tf] : doc) {
    const double p = static_cast<double>(tf) / doc_total;
    auto it = summary.find(term);
    const double q =
        ((it == summary.end() ? 0 : it->second) + kKlSmoothing) / denom;
    kl += p * std::log(p / q);
  }
  return kl;
}

int Total(const TermCounts& counts) {
  int total = 0;
  for (const auto& [term, tf] : counts) total += tf;
  return total;
}

void Add(TermCounts& into, const TermCounts& counts) {
  for (const auto& [term, tf] : counts) into[term] += tf;
}

}  // namespace

double KlDivergence(const CandidateSet& candidates,
                    std::span<const int> selected_positions) {
  const auto counts = CountTerms(candidates);
  TermCounts doc, summary;
  for (const auto& c : counts) Add(doc, c);
  for (int pos : selected_positions) Add(summary, counts.at(pos));
  return KlFromCounts(doc, Total(doc), summary, Total(summary));
}

RankedList RankKlSum(const CandidateSet& candidates, int budget_tokens) {
  const size_t n = candidates.size();
  const auto counts = CountTerms(candidates);
  TermCounts doc;
  for (const auto& c : counts) Add(doc, c);
  const int doc_total = Total(doc);

  std::vector<int> selected;
  std::vector<bool> used(n, false);
  TermCounts summary;
  int summary_total = 0;
  while (selected.size() < n) {
    if (budget_tokens > 0 && summary_total >= budget_tokens) break;
    int best = -1;
    double best_kl = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      TermCounts trial = summary;
      Add(trial, counts[i]);
      const double kl =
          KlFromCounts(doc, doc_total, trial, summary_total + Total(counts[i]));
      if (best < 0 || kl < best_kl - 1e-12) {
        best = static_cast<int>(i);
        best_kl = kl;
      }
    }
    used[best] = true;
    selected.push_back(best);
    Add(summary, counts[best]);
    summary_total += Total(counts[best]);
  }
  for (size_t i = 0; i < n; ++i) {
    if (!used[i]) selected.push_back(static_cast<int>(i));
  }

  RankedList list;
  for (size_t pos = 0; pos < selected.size(); ++pos) {
    list.items.push_back(candidates.indices[selected[pos]]);
    list.scores.push_back(static_cast<double>(n - pos));
  }
  return list;
}

RankedList RankOracle(const CandidateSet& candidates,
                      const btrank::ScoreTable& gold) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (int index : candidates.indices) {
    auto it = gold.scores.find(index);
    if (it == gold.scores.end()) {
      throw Error(ErrorCode::kMissingGold,
                  "no gold score for sentence " + std::to_string(index) +
                      (candidates.contract_id.empty()
                           ? ""
                           : " of " + candidates.contract_id));
    }
    scores.push_back(it->second);
  }
  return RankByScore(candidates.indices, scores);
}

RankedList RankModel(const CandidateSet& candidates,
                     std::span<const btrank::PairwiseComparison> predictions,
                     const btrank::FitOptions& options,
                     std::vector<std::string>* warnings) {
  const std::set<int> members(candidates.indices.begin(),
                              candidates.indices.end());
  std::vector<btrank::PairwiseComparison> covered_pairs;
  std::set<int> covered;
  for (const auto& p : predictions) {
    if (members.contains(p.winner) && members.contains(p.loser)) {
      covered_pairs.push_back(p);
      covered.insert(p.winner);
      covered.insert(p.loser);
    }
  }
  if (covered_pairs.empty()) {
    throw Error(ErrorCode::kNoPredictions,
                "no pairwise prediction covers two candidates");
  }
  const btrank::ScoreTable fit = btrank::FitBradleyTerry(covered_pairs, options);
  std::vector<int> ids;
  std::vector<double> scores;
  for (const auto& [id, s] : fit.scores) {
    ids.push_back(id);
    scores.push_back(s);
  }
  RankedList list = RankByScore(ids, scores);
  std::vector<int> uncovered;
  for (int index : candidates.indices) {
    if (!covered.contains(index)) uncovered.push_back(index);
  }
  if (!uncovered.empty()) {
    std::string message = std::to_string(uncovered.size()) +
                          " candidate(s) without pairwise predictions ranked last";
    if (!candidates.contract_id.empty()) {
      message += " in " + candidates.contract_id + "/" + candidates.party + "/" +
                 std::string(categorize::CategoryName(candidates.category));
    }
    spdlog::warn("{}", message);
    if (warnings != nullptr) warnings->push_back(std::move(message));
    for (int index : uncovered) {
      list.items.push_back(index);
      list.scores.push_back(0.0);
    }
  }
  return list;
}

std::string_view RankerName(RankerKind kind) {
  switch (kind) {
    case RankerKind::kRandom: return "random";
    case RankerKind::kKlSum: return "klsum";
    case RankerKind::kLsa: return "lsa";
    case RankerKind::kTextRank: return "textrank";
    case RankerKind::kLexRank: return "lexrank";
    case RankerKind::kOracle: return "oracle";
    case RankerKind::kModel: return "model";
  }
  return "";
}

RankerKind ParseRanker(std::string_view name) {
  for (RankerKind kind :
       {RankerKind::kRandom, RankerKind::kKlSum, RankerKind::kLsa,
        RankerKind::kTextRank, RankerKind::kLexRank, RankerKind::kOracle,
        RankerKind::kModel}) {
    if (name == RankerName(kind)) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown ranker '" + std::string(name) + "'");
}

RankedList Rank(const CandidateSet& candidates, const RankerConfig& config,
                const RankerInputs& inputs,
                std::vector<std::string>* warnings) {
  if (candidates.size() == 0) return {};
  switch (config.kind) {
    case RankerKind::kRandom:
      return RankRandom(candidates, config.seed);
    case RankerKind::kKlSum:
      return RankKlSum(candidates, config.klsum_budget_tokens);
    case RankerKind::kLsa:
      return RankLsa(candidates, config.lsa_topics);
    case RankerKind::kTextRank:
      return RankTextRank(candidates, config.pagerank);
    case RankerKind::kLexRank:
      return RankLexRank(candidates, config.lexrank_threshold, config.pagerank);
    case RankerKind::kOracle:
      if (inputs.gold == nullptr) {
        throw Error(ErrorCode::kMissingGold, "oracle ranker needs gold scores");
      }
      return RankOracle(candidates, *inputs.gold);
    case RankerKind::kModel:
      return RankModel(candidates, inputs.pairwise, config.fit, warnings);
  }
  return {};
}

}  // namespace clausesum::rankers
