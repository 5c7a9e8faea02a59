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

// Deontic categories per (sentence, party): a trigger-lexicon baseline plus
// import of externally produced (classifier or gold) labels.

#ifndef CLAUSESUM_CATEGORIZE_H_
#define CLAUSESUM_CATEGORIZE_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clausesum/corpus.h"
#include "clausesum/jsonl.h"

namespace clausesum::categorize {

// Permission is folded into entitlement upstream; there is no fourth value.
enum class Category { kObligation, kEntitlement, kProhibition };

inline constexpr std::array<Category, 3> kAllCategories = {
    Category::kObligation, Category::kEntitlement, Category::kProhibition};

std::string_view CategoryName(Category category);
// Case-insensitive. nullopt for anything but the three names.
std::optional<Category> ParseCategory(std::string_view name);

enum class LabelSource { kRule, kImported, kGold };

std::string_view LabelSourceName(LabelSource source);
LabelSource ParseLabelSource(std::string_view name);

using CategorySet = std::set<Category>;

struct CategoryPrediction {
  std::string contract_id;
  int sentence_index = 0;
  std::string party;
  CategorySet labels;
  LabelSource source = LabelSource::kRule;
};

// Trigger phrases per category and the token window that links a trigger to
// a preceding party alias.
struct TriggerLexicon {
  std::map<Category, std::vector<std::string>> triggers;
  int window = 10;

  static TriggerLexicon Default();  // mirrors data/deontic_lexicon.json
  static TriggerLexicon FromJson(const Json& json);
  static TriggerLexicon Load(const std::filesystem::path& path);
  Json ToJson() const;
};

// Adds a category for every trigger that starts within `window` tokens after
// an alias of the party. Triggers claim their tokens in precedence order:
// prohibition phrases first, then longer phrases before shorter ones, so the
// "shall" inside "shall not" or "shall have the right" never fires on its own.
CategorySet CategorizeRule(const corpus::Sentence& sentence,
                           const corpus::PartyRef& party,
                           const TriggerLexicon& lexicon = TriggerLexicon::Default());

// Rule predictions for every kept sentence and every party of the contract.
std::vector<CategoryPrediction> PredictRule(
    const corpus::Contract& contract,
    const TriggerLexicon& lexicon = TriggerLexicon::Default());

// Reads {contract_id, sentence_index, party, labels} lines. Duplicate keys keep
// the last record and append a warning. Malformed lines, unknown parties (when
// known_parties is non-empty) and unknown categories raise kImportError.
std::vector<CategoryPrediction> ImportPredictions(
    const std::filesystem::path& path, LabelSource source,
    const std::vector<std::string>& known_parties = {},
    std::vector<std::string>* warnings = nullptr);

Json PredictionRecord(const CategoryPrediction& prediction);
std::string ToPredictionJsonLines(
    const std::vector<CategoryPrediction>& predictions);

// Category -> kept sentence indices in document order. A sentence with several
// labels appears in several clusters. All three categories are present.
using Clusters = std::map<Category, std::vector<int>>;

Clusters ClusterByCategory(const corpus::Contract& contract,
                           const corpus::PartyRef& party,
                           const std::vector<CategoryPrediction>& predictions);

}  // namespace clausesum::categorize

#endif  // CLAUSESUM_CATEGORIZE_H_
