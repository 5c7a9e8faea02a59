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


// Shared fixtures for the clausesum tests.

#ifndef CLAUSESUM_TESTS_TEST_UTIL_H_
#define CLAUSESUM_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "clausesum/btrank.h"
#include "clausesum/categorize.h"
#include "clausesum/corpus.h"
#include "clausesum/rng.h"

namespace clausesum::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("clausesum_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path DataDir() { return CLAUSESUM_DATA_DIR; }

// Synthetic corpus with gold labels and distinct gold scores per
// (contract, party). All sentences are kept.
struct SyntheticCorpus {
  std::vector<corpus::Contract> contracts;
  std::vector<categorize::CategoryPrediction> gold_labels;
  std::map<std::pair<std::string, std::string>, btrank::ScoreTable> gold_scores;
};

inline SyntheticCorpus MakeSyntheticCorpus(int contracts, int sentences,
                                           uint64_t seed,
                                           double label_probability = 0.35) {
  SyntheticCorpus out;
  Rng rng(seed);
  const auto parties = corpus::CorpusConfig::Default().parties;
  for (int c = 0; c < contracts; ++c) {
    corpus::Contract contract;
    contract.id = "synthetic" + std::to_string(c);
    contract.parties = parties;
    for (int i = 0; i < sentences; ++i) {
      corpus::Sentence s;
      s.index = i;
      s.text = "Tenant and Landlord clause number " + std::to_string(i) + ".";
      contract.sentences.push_back(s);
    }
    contract.title = contract.sentences[0].text;
    for (const auto& party : parties) {
      btrank::ScoreTable table;
      std::vector<int> ranks(sentences);
      for (int i = 0; i < sentences; ++i) ranks[i] = i + 1;
      rng.Shuffle(ranks);
      for (int i = 0; i < sentences; ++i) table.scores[i] = ranks[i];
      out.gold_scores[{contract.id, party.canonical}] = table;
      for (int i = 0; i < sentences; ++i) {
        categorize::CategoryPrediction p;
        p.contract_id = contract.id;
        p.sentence_index = i;
        p.party = party.canonical;
        p.source = categorize::LabelSource::kGold;
        for (auto category : categorize::kAllCategories) {
          if (rng.UniformDouble() < label_probability) p.labels.insert(category);
        }
        out.gold_labels.push_back(p);
      }
    }
    out.contracts.push_back(std::move(contract));
  }
  return out;
}

// Flips each (sentence, party, category) membership whose pre-drawn uniform
// falls below p. The uniforms depend only on `seed`, so the flipped sets are
// nested in p.
inline std::vector<categorize::CategoryPrediction> FlipLabels(
    const std::vector<categorize::CategoryPrediction>& labels, double p,
    uint64_t seed) {
  Rng rng(seed);
  std::vector<categorize::CategoryPrediction> out = labels;
  for (auto& prediction : out) {
    prediction.source = categorize::LabelSource::kImported;
    for (auto category : categorize::kAllCategories) {
      const double u = rng.UniformDouble();
      if (u < p) {
        if (prediction.labels.contains(category)) {
          prediction.labels.erase(category);
        } else {
          prediction.labels.insert(category);
        }
      }
    }
  }
  return out;
}

// Kendall tau-a between two orderings of the same items.
inline double KendallTau(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> pos;
  for (size_t i = 0; i < b.size(); ++i) pos[b[i]] = static_cast<int>(i);
  long concordant = 0, discordant = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = i + 1; j < a.size(); ++j) {
      (pos[a[i]] < pos[a[j]] ? concordant : discordant) += 1;
    }
  }
  return static_cast<double>(concordant - discordant) /
         static_cast<double>(concordant + discordant);
}

// Direct evaluation of the ranking metric definitions, kept deliberately
// naive: MAP as sum_k P@k * (R@k - R@(k-1)) over every cutoff.
struct OracleMetrics {
  std::map<int, double> p, r, f1;
  double map = 0.0;
  double ndcg = 0.0;
};

inline OracleMetrics BruteForceMetrics(const std::vector<int>& predicted,
                                       const std::vector<int>& reference,
                                       const std::vector<int>& ks, int n) {
  const std::set<int> ref(reference.begin(), reference.end());
  auto hits_at = [&](int k) {
    int hits = 0;
    for (int i = 0; i < k && i < static_cast<int>(predicted.size()); ++i) {
      hits += ref.contains(predicted[i]) ? 1 : 0;
    }
    return hits;
  };
  auto precision = [&](int k) {
    const int kk = std::min<int>(k, static_cast<int>(predicted.size()));
    return kk == 0 ? 0.0 : static_cast<double>(hits_at(kk)) / kk;
  };
  auto recall = [&](int k) {
    return static_cast<double>(hits_at(k)) / static_cast<double>(ref.size());
  };
  OracleMetrics out;
  for (int k : ks) {
    out.p[k] = precision(k);
    out.r[k] = recall(k);
    const double pr = out.p[k] + out.r[k];
    out.f1[k] = pr == 0.0 ? 0.0 : 2 * out.p[k] * out.r[k] / pr;
  }
  for (int k = 1; k <= static_cast<int>(predicted.size()); ++k) {
    out.map += precision(k) * (recall(k) - recall(k - 1));
  }
  double dcg = 0.0, idcg = 0.0;
  for (int i = 1; i <= n && i <= static_cast<int>(predicted.size()); ++i) {
    dcg += (ref.contains(predicted[i - 1]) ? 1.0 : 0.0) / std::log2(i + 1.0);
  }
  for (int i = 1; i <= n && i <= static_cast<int>(ref.size()); ++i) {
    idcg += 1.0 / std::log2(i + 1.0);
  }
  out.ndcg = dcg / idcg;
  return out;
}

}  // namespace clausesum::testing

#endif  // CLAUSESUM_TESTS_TEST_UTIL_H_
