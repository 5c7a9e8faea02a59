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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "clausesum/error.h"
#include "clausesum/linalg.h"
#include "clausesum/rng.h"
#include "clausesum/text.h"
#include "test_util.h"

namespace clausesum::rankers {
namespace {

using Matrix = std::vector<std::vector<double>>;

const std::vector<std::string> kWords = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "rent", "repair", "deposit", "notice"};

// Plain power iteration, run long enough to be exact to double precision for
// the sizes used here.
std::vector<double> PowerIterationOracle(const Matrix& w, double damping = 0.85,
                                         int steps = 1000) {
  const size_t n = w.size();
  std::vector<double> x(n, 1.0 / n);
  for (int step = 0; step < steps; ++step) {
    std::vector<double> next(n, (1.0 - damping) / n);
    for (size_t j = 0; j < n; ++j) {
      double degree = 0.0;
      for (size_t i = 0; i < n; ++i) degree += w[j][i];
      for (size_t i = 0; i < n; ++i) {
        next[i] += damping * x[j] * (degree > 0 ? w[j][i] / degree : 1.0 / n);
      }
    }
    x = next;
  }
  return x;
}

std::vector<int> OrderByScore(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b] + 1e-9; });
  return order;
}

std::string RandomSentence(Rng& rng, int max_words) {
  const int len = 1 + static_cast<int>(rng.UniformInt(max_words));
  std::string s;
  for (int i = 0; i < len; ++i) {
    if (!s.empty()) s += ' ';
    s += kWords[rng.UniformInt(kWords.size())];
  }
  return s;
}

void ExpectPermutation(const RankedList& list, const CandidateSet& cands) {
  std::vector<int> got = list.items;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, cands.indices);
  EXPECT_EQ(list.scores.size(), list.items.size());
}

TEST(CandidateSetTest, FromContract) {
  corpus::Contract contract;
  contract.id = "c";
  for (int i = 0; i < 5; ++i) {
    corpus::Sentence s;
    s.index = i;
    s.text = "s" + std::to_string(i);
    s.kept = i != 3;
    contract.sentences.push_back(s);
  }
  const auto cands = CandidateSet::FromContract(
      contract, "Tenant", categorize::Category::kEntitlement, {4, 0, 2, 0});
  EXPECT_EQ(cands.indices, (std::vector<int>{0, 2, 4}));
  EXPECT_EQ(cands.texts[2], "s4");
  EXPECT_THROW(CandidateSet::FromContract(contract, "Tenant",
                                          categorize::Category::kEntitlement, {3}),
               Error);
  EXPECT_THROW(CandidateSet::FromContract(contract, "Tenant",
                                          categorize::Category::kEntitlement, {9}),
               Error);
}

TEST(SimilarityGraphTest, MatchesDirectTfIsfCosine) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> texts;
    const int n = 1 + static_cast<int>(rng.UniformInt(8));
    for (int i = 0; i < n; ++i) texts.push_back(RandomSentence(rng, 6));
    const auto graph = BuildSimilarityGraph(CandidateSet::FromTexts(texts));
    std::vector<std::map<std::string, double>> vecs(n);
    std::map<std::string, int> sf;
    for (int i = 0; i < n; ++i) {
      std::set<std::string> seen;
      for (const auto& t : text::ContentTokens(texts[i])) {
        vecs[i][t] += 1;
        seen.insert(t);
      }
      for (const auto& t : seen) ++sf[t];
    }
    for (auto& v : vecs) {
      for (auto& [t, x] : v) x *= std::log((1.0 + n) / (1.0 + sf[t])) + 1.0;
    }
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(graph.weights[i][i], 0.0);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double dot = 0, ni = 0, nj = 0;
        for (auto& [t, x] : vecs[i]) {
          ni += x * x;
          if (vecs[j].contains(t)) dot += x * vecs[j].at(t);
        }
        for (auto& [t, x] : vecs[j]) nj += x * x;
        EXPECT_NEAR(graph.weights[i][j], dot / std::sqrt(ni * nj), 1e-12);
        EXPECT_GE(graph.weights[i][j], 0.0);
        EXPECT_LE(graph.weights[i][j], 1.0);
        EXPECT_EQ(graph.weights[i][j], graph.weights[j][i]);
      }
    }
  }
}

TEST(PageRankTest, MatchesPowerIterationOnHandBuiltGraph) {
  const Matrix w = {{0.0, 0.9, 0.1}, {0.9, 0.0, 0.3}, {0.1, 0.3, 0.0}};
  const auto result = PageRank(w);
  const auto oracle = PowerIterationOracle(w);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(result.scores[i], oracle[i], 1e-5);
  EXPECT_EQ(OrderByScore(result.scores), OrderByScore(oracle));
  EXPECT_LT(result.delta, 1e-6);
  EXPECT_LE(result.iterations, 100);
}

TEST(PageRankTest, DanglingAndConvergenceError) {
  const Matrix empty(4, std::vector<double>(4, 0.0));
  const auto result = PageRank(empty);
  for (double s : result.scores) EXPECT_NEAR(s, 0.25, 1e-12);
  const Matrix w = {{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
  PageRankOptions options;
  options.max_iter = 2;
  options.tol = 1e-15;
  EXPECT_THROW(PageRank(w, options), ConvergenceError);
}

TEST(RankByScoreTest, TieRule) {
  const std::vector<int> idx = {7, 3, 5, 1};
  const std::vector<double> scores = {0.2, 0.5, 0.5 + 1e-12, 0.1};
  const auto list = RankByScore(idx, scores);
  EXPECT_EQ(list.items, (std::vector<int>{3, 5, 7, 1}));
  EXPECT_DOUBLE_EQ(list.scores[0], list.scores[1]);
}

TEST(RankRandomTest, Examples) {
  std::vector<std::string> five(5, "x");
  const auto c5 = CandidateSet::FromTexts(five);
  EXPECT_EQ(RankRandom(c5, 1).items, RankRandom(c5, 1).items);
  const auto c20 = CandidateSet::FromTexts(std::vector<std::string>(20, "x"));
  int differing = 0;
  for (uint64_t s = 1; s <= 5; ++s) {
    differing += RankRandom(c20, s).items != RankRandom(c20, s + 100).items;
  }
  EXPECT_EQ(differing, 5);
  EXPECT_EQ(RankRandom(CandidateSet::FromTexts({"x"}), 3).items,
            (std::vector<int>{0}));
  EXPECT_TRUE(RankRandom(CandidateSet::FromTexts({}), 3).items.empty());
}

TEST(RankTextRankTest, Examples) {
  const auto same = CandidateSet::FromTexts(
      std::vector<std::string>(4, "tenant pays rent monthly"));
  PageRankResult diag;
  const auto list = RankTextRank(same, {}, &diag);
  EXPECT_EQ(list.items, (std::vector<int>{0, 1, 2, 3}));
  for (double s : diag.scores) EXPECT_NEAR(s, 0.25, 1e-9);

  const auto single = RankTextRank(CandidateSet::FromTexts({"rent"}));
  EXPECT_EQ(single.items, (std::vector<int>{0}));
  EXPECT_NEAR(single.scores[0], 1.0, 1e-12);
}

TEST(RankTextRankTest, MatchesOracleOnToy) {
  const auto cands = CandidateSet::FromTexts(
      {"alpha beta gamma", "alpha beta", "gamma delta epsilon"});
  PageRankResult diag;
  const auto list = RankTextRank(cands, {}, &diag);
  const auto oracle = PowerIterationOracle(BuildSimilarityGraph(cands).weights);
  EXPECT_EQ(list.items, OrderByScore(oracle));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(diag.scores[i], oracle[i], 1e-5);
}

TEST(RankLexRankTest, Examples) {
  const auto orth = RankLexRank(CandidateSet::FromTexts({"alpha beta", "gamma delta"}));
  EXPECT_EQ(orth.items, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(orth.scores[0], orth.scores[1]);

  const auto hub = CandidateSet::FromTexts(
      {"alpha epsilon", "beta zeta", "alpha beta gamma delta", "gamma eta"});
  const auto list = RankLexRank(hub);
  EXPECT_EQ(list.items.front(), 2);
  Matrix w = BuildSimilarityGraph(hub).weights;
  for (auto& row : w) {
    for (double& x : row) {
      if (x <= 0.1) x = 0.0;
    }
  }
  EXPECT_EQ(list.items, OrderByScore(PowerIterationOracle(w)));

  PageRankResult diag;
  const auto pruned = RankLexRank(hub, 1.0, {}, &diag);
  EXPECT_EQ(pruned.items, (std::vector<int>{0, 1, 2, 3}));
  for (double s : diag.scores) EXPECT_NEAR(s, 0.25, 1e-12);
}

TEST(ThinSvdTest, MatchesEigenDecompositionOfGram) {
  Rng rng(30);
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 1 + static_cast<int>(rng.UniformInt(8));
    const int cols = 1 + static_cast<int>(rng.UniformInt(6));
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) a(i, j) = static_cast<double>(rng.UniformInt(3));
    }
    const auto svd = linalg::ThinSvd(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.transpose() * a);
    std::vector<double> expected;
    for (int k = 0; k < cols; ++k) expected.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(k))));
    std::sort(expected.rbegin(), expected.rend());
    const int r = static_cast<int>(svd.singular_values.size());
    ASSERT_EQ(r, std::min(rows, cols));
    for (int k = 0; k < r; ++k) {
      EXPECT_NEAR(svd.singular_values(k), expected[k], 1e-9);
      if (k > 0) EXPECT_GE(svd.singular_values(k - 1), svd.singular_values(k));
    }
    const Eigen::MatrixXd back =
        svd.u * svd.singular_values.asDiagonal() * svd.v.transpose();
    EXPECT_LT((back - a).cwiseAbs().maxCoeff(), 1e-9);
    for (int k = 0; k < r; ++k) {
      if (svd.singular_values(k) < 1e-12) continue;
      Eigen::Index arg;
      svd.v.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(svd.v(arg, k), 0.0);
    }
  }
}

TEST(RankLsaTest, Examples) {
  const auto same = RankLsa(CandidateSet::FromTexts(
      std::vector<std::string>(3, "landlord repairs roof")));
  EXPECT_EQ(same.items, (std::vector<int>{0, 1, 2}));
  EXPECT_NEAR(same.scores[0], same.scores[2], 1e-12);

  // Disjoint vocabularies: the singular values are the column norms, so the
  // scores are 2 and sqrt(2).
  const auto disjoint =
      RankLsa(CandidateSet::FromTexts({"alpha beta", "gamma delta epsilon zeta"}));
  EXPECT_EQ(disjoint.items, (std::vector<int>{1, 0}));
  EXPECT_NEAR(disjoint.scores[0], 2.0, 1e-12);
  EXPECT_NEAR(disjoint.scores[1], std::sqrt(2.0), 1e-12);

  EXPECT_EQ(RankLsa(CandidateSet::FromTexts({"rent"})).items, (std::vector<int>{0}));
  try {
    RankLsa(CandidateSet::FromTexts({"the of and", "it is"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(RankKlSumTest, HandComputedDivergence) {
  const auto cands = CandidateSet::FromTexts(
      {"cherry", "apple apple apple banana", "banana"});
  // Doc: apple 3, banana 2, cherry 1. Summary {1}: apple 3, banana 1.
  const double denom = 4.0 + 3 * 0.001;
  const double expected = 0.5 * std::log(0.5 / (3.001 / denom)) +
                          (1.0 / 3) * std::log((1.0 / 3) / (1.001 / denom)) +
                          (1.0 / 6) * std::log((1.0 / 6) / (0.001 / denom));
  const std::vector<int> selection = {1};
  EXPECT_NEAR(KlDivergence(cands, selection), expected, 1e-12);
  // With everything selected only the smoothing separates the two.
  const std::vector<int> all = {0, 1, 2};
  const double smoothed = 6.003;
  const double full = 0.5 * std::log(0.5 / (3.001 / smoothed)) +
                      (1.0 / 3) * std::log((1.0 / 3) / (2.001 / smoothed)) +
                      (1.0 / 6) * std::log((1.0 / 6) / (1.001 / smoothed));
  EXPECT_NEAR(KlDivergence(cands, all), full, 1e-15);
  EXPECT_LT(full, 1e-6);
  EXPECT_EQ(RankKlSum(cands).items.front(), 1);
}

TEST(RankKlSumTest, Examples) {
  EXPECT_EQ(RankKlSum(CandidateSet::FromTexts({"rent"})).items, (std::vector<int>{0}));
  const auto twins = RankKlSum(CandidateSet::FromTexts({"rent due", "rent due"}));
  EXPECT_EQ(twins.items.front(), 0);
  const auto cands = CandidateSet::FromTexts(
      {"alpha", "beta beta", "alpha alpha alpha gamma", "delta"});
  const auto budget = RankKlSum(cands, 1);
  EXPECT_EQ(budget.items.front(), 2);
  EXPECT_EQ(std::vector<int>(budget.items.begin() + 1, budget.items.end()),
            (std::vector<int>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(budget.scores[0], 4.0);
}

TEST(RankOracleTest, Examples) {
  btrank::ScoreTable gold;
  gold.scores = {{2, 0.1}, {5, 0.9}, {9, 0.5}, {11, 0.3}};
  CandidateSet cands;
  cands.indices = {2, 5, 9};
  cands.texts = {"a", "b", "c"};
  EXPECT_EQ(RankOracle(cands, gold).items, (std::vector<int>{5, 9, 2}));
  btrank::ScoreTable flat;
  flat.scores = {{2, 1.0}, {5, 1.0}, {9, 1.0}};
  EXPECT_EQ(RankOracle(cands, flat).items, (std::vector<int>{2, 5, 9}));
  cands.indices.push_back(12);
  cands.texts.push_back("d");
  try {
    RankOracle(cands, gold);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingGold);
  }
}

TEST(RankModelTest, Examples) {
  const auto cands = CandidateSet::FromTexts({"a", "b", "c"});
  // Consistent order [c, a, b] = [2, 0, 1].
  const std::vector<btrank::PairwiseComparison> full = {
      {2, 0, 1.0}, {2, 1, 1.0}, {0, 1, 1.0}};
  EXPECT_EQ(RankModel(cands, full).items, (std::vector<int>{2, 0, 1}));

  std::vector<std::string> warnings;
  const std::vector<btrank::PairwiseComparison> partial = {{0, 1, 1.0}, {7, 8, 1.0}};
  const auto list = RankModel(cands, partial, {}, &warnings);
  EXPECT_EQ(list.items, (std::vector<int>{0, 1, 2}));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_DOUBLE_EQ(list.scores[2], 0.0);

  const std::vector<btrank::PairwiseComparison> cycle = {
      {0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
  const auto tied = RankModel(cands, cycle);
  EXPECT_EQ(tied.items, (std::vector<int>{0, 1, 2}));
  EXPECT_NEAR(tied.scores[0], tied.scores[2], 1e-6);

  try {
    const std::vector<btrank::PairwiseComparison> none = {{7, 8, 1.0}};
    RankModel(cands, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPredictions);
  }
}

TEST(RankTest, DispatchAndNames) {
  for (auto kind : {RankerKind::kRandom, RankerKind::kKlSum, RankerKind::kLsa,
                    RankerKind::kTextRank, RankerKind::kLexRank,
                    RankerKind::kOracle, RankerKind::kModel}) {
    EXPECT_EQ(ParseRanker(RankerName(kind)), kind);
  }
  EXPECT_THROW(ParseRanker("pacsum"), Error);
  RankerConfig config;
  config.kind = RankerKind::kOracle;
  EXPECT_TRUE(Rank(CandidateSet::FromTexts({}), config).items.empty());
  EXPECT_THROW(Rank(CandidateSet::FromTexts({"a"}), config), Error);
}

TEST(RankTest, EveryRankerReturnsAPermutation) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(25));
    CandidateSet cands;
    btrank::ScoreTable gold;
    std::vector<btrank::PairwiseComparison> preds;
    int index = 0;
    for (int i = 0; i < n; ++i) {
      index += 1 + static_cast<int>(rng.UniformInt(3));
      cands.indices.push_back(index);
      cands.texts.push_back(RandomSentence(rng, 8));
      gold.scores[index] = rng.UniformDouble();
    }
    for (int k = 0; k < 2 * n; ++k) {
      const int a = cands.indices[rng.UniformInt(n)];
      const int b = cands.indices[rng.UniformInt(n)];
      if (a != b) preds.push_back({a, b, 1.0});
    }
    const RankerInputs inputs{&gold, preds};
    for (auto kind : {RankerKind::kRandom, RankerKind::kKlSum, RankerKind::kLsa,
                      RankerKind::kTextRank, RankerKind::kLexRank,
                      RankerKind::kOracle, RankerKind::kModel}) {
      if (kind == RankerKind::kModel && preds.empty()) continue;
      RankerConfig config;
      config.kind = kind;
      config.seed = trial;
      const auto list = Rank(cands, config, inputs);
      ExpectPermutation(list, cands);
      for (size_t i = 1; i < list.scores.size(); ++i) {
        EXPECT_GE(list.scores[i - 1], list.scores[i]);
      }
    }
  }
}

}  // namespace
}  // namespace clausesum::rankers
