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

#include "clausesum/categorize.h"

#include <algorithm>
#include <tuple>

#include "clausesum/error.h"
#include "clausesum/text.h"
#include "spdlog/spdlog.h"

namespace clausesum::categorize {
namespace {

using Tokens = std::vector<std::string>;

struct Trigger {
  Category category;
  Tokens tokens;
};

bool MatchesAt(const Tokens& words, size_t pos, const Tokens& phrase) {
  if (phrase.empty() || pos + phrase.size() > words.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), words.begin() + pos);
}

std::vector<Trigger> OrderedTriggers(const TriggerLexicon& lexicon) {
  std::vector<Trigger> triggers;
  for (const auto& [category, phrases] : lexicon.triggers) {
    for (const auto& phrase : phrases) {
      Tokens tokens = text::Words(phrase);
      if (!tokens.empty()) triggers.push_back({category, std::move(tokens)});
    }
  }
  std::stable_sort(triggers.begin(), triggers.end(),
                   [](const Trigger& a, const Trigger& b) {
                     const bool a_pro = a.category == Category::kProhibition;
                     const bool b_pro = b.category == Category::kProhibition;
                     if (a_pro != b_pro) return a_pro;
                     return a.tokens.size() > b.tokens.size();
                   });
  return triggers;
}

}  // namespace

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kObligation: return "obligation";
    case Category::kEntitlement: return "entitlement";
    case Category::kProhibition: return "prohibition";
  }
  return "";
}

std::optional<Category> ParseCategory(std::string_view name) {
  const std::string lowered = text::ToLowerAscii(name);
  for (Category c : kAllCategories) {
    if (lowered == CategoryName(c)) return c;
  }
  return std::nullopt;
}

std::string_view LabelSourceName(LabelSource source) {
  switch (source) {
    case LabelSource::kRule: return "rule";
    case LabelSource::kImported: return "imported";
    case LabelSource::kGold: return "gold";
  }
  return "";
}

LabelSource ParseLabelSource(std::string_view name) {
  if (name == "rule") return LabelSource::kRule;
  if (name == "imported") return LabelSource::kImported;
  if (name == "gold") return LabelSource::kGold;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown label source '" + std::string(name) + "'");
}

TriggerLexicon TriggerLexicon::Default() {
  TriggerLexicon lexicon;
  lexicon.triggers[Category::kObligation] = {
      "shall", "must", "agrees to", "is required to", "shall be responsible"};
  lexicon.triggers[Category::kEntitlement] = {
      "may", "shall be entitled", "has the right", "is permitted",
      "shall have the right"};
  lexicon.triggers[Category::kProhibition] = {
      "shall not", "must not", "may not", "is prohibited", "shall in no event"};
  lexicon.window = 10;
  return lexicon;
}

TriggerLexicon TriggerLexicon::FromJson(const Json& json) {
  TriggerLexicon lexicon;
  try {
    lexicon.window = json.value("window", 10);
    for (const auto& [name, phrases] : json.at("triggers").items()) {
      auto category = ParseCategory(name);
      if (!category) {
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown lexicon category '" + name + "'");
      }
      lexicon.triggers[*category] = phrases.get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad trigger lexicon: ") + e.what());
  }
  if (lexicon.window <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "lexicon window must be positive");
  }
  return lexicon;
}

TriggerLexicon TriggerLexicon::Load(const std::filesystem::path& path) {
  try {
    return FromJson(Json::parse(io::ReadFile(path)));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
}

Json TriggerLexicon::ToJson() const {
  Json triggers_json = Json::object();
  for (const auto& [category, phrases] : triggers) {
    triggers_json[std::string(CategoryName(category))] = phrases;
  }
  return {{"window", window}, {"triggers", triggers_json}};
}

CategorySet CategorizeRule(const corpus::Sentence& sentence,
                           const corpus::PartyRef& party,
                           const TriggerLexicon& lexicon) {
  const Tokens words = text::Words(sentence.text);

  std::vector<size_t> alias_ends;
  for (const auto& alias : party.aliases) {
    const Tokens alias_tokens = text::Words(alias);
    for (size_t pos = 0; pos < words.size(); ++pos) {
      if (MatchesAt(words, pos, alias_tokens)) {
        alias_ends.push_back(pos + alias_tokens.size() - 1);
      }
    }
  }

  CategorySet labels;
  if (alias_ends.empty()) return labels;

  const size_t window = static_cast<size_t>(lexicon.window);
  std::vector<bool> claimed(words.size(), false);
  for (const auto& trigger : OrderedTriggers(lexicon)) {
    for (size_t pos = 0; pos < words.size(); ++pos) {
      if (!MatchesAt(words, pos, trigger.tokens)) continue;
      const auto begin = claimed.begin() + pos;
      const auto end = begin + trigger.tokens.size();
      if (std::any_of(begin, end, [](bool b) { return b; })) continue;
      std::fill(begin, end, true);
      const bool near_alias =
          std::any_of(alias_ends.begin(), alias_ends.end(), [&](size_t a) {
            return a < pos && pos - a <= window;
          });
      if (near_alias) labels.insert(trigger.category);
    }
  }
  return labels;
}

std::vector<CategoryPrediction> PredictRule(const corpus::Contract& contract,
                                            const TriggerLexicon& lexicon) {
  std::vector<CategoryPrediction> predictions;
  for (const auto& party : contract.parties) {
    for (const auto& sentence : contract.sentences) {
      if (!sentence.kept) continue;
      predictions.push_back({contract.id, sentence.index, party.canonical,
                             CategorizeRule(sentence, party, lexicon),
                             LabelSource::kRule});
    }
  }
  return predictions;
}

std::vector<CategoryPrediction> ImportPredictions(
    const std::filesystem::path& path, LabelSource source,
    const std::vector<std::string>& known_parties,
    std::vector<std::string>* warnings) {
  using Key = std::tuple<std::string, int, std::string>;
  std::map<Key, CategoryPrediction> by_key;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kImportError)) {
    const std::string where = path.string() + ":" + std::to_string(line_number);
    CategoryPrediction prediction;
    prediction.source = source;
    try {
      prediction.contract_id = record.at("contract_id").get<std::string>();
      prediction.sentence_index = record.at("sentence_index").get<int>();
      prediction.party = record.at("party").get<std::string>();
      for (const auto& label : record.at("labels")) {
        const auto name = label.get<std::string>();
        auto category = ParseCategory(name);
        if (!category) {
          throw Error(ErrorCode::kImportError,
                      where + ": unknown category '" + name + "'");
        }
        prediction.labels.insert(*category);
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kImportError, where + ": " + e.what());
    }
    if (prediction.sentence_index < 0) {
      throw Error(ErrorCode::kImportError, where + ": negative sentence_index");
    }
    if (!known_parties.empty() &&
        std::find(known_parties.begin(), known_parties.end(),
                  prediction.party) == known_parties.end()) {
      throw Error(ErrorCode::kImportError,
                  where + ": unknown party '" + prediction.party + "'");
    }
    Key key{prediction.contract_id, prediction.sentence_index, prediction.party};
    if (by_key.contains(key)) {
      std::string message = where + ": duplicate prediction for (" +
                            prediction.contract_id + ", " +
                            std::to_string(prediction.sentence_index) + ", " +
                            prediction.party + "); keeping the last one";
      spdlog::warn("{}", message);
      if (warnings != nullptr) warnings->push_back(std::move(message));
    }
    by_key[key] = std::move(prediction);
  }
  std::vector<CategoryPrediction> predictions;
  predictions.reserve(by_key.size());
  for (auto& [key, prediction] : by_key) predictions.push_back(std::move(prediction));
  return predictions;
}

Json PredictionRecord(const CategoryPrediction& prediction) {
  Json labels = Json::array();
  for (Category c : prediction.labels) labels.push_back(std::string(CategoryName(c)));
  return {{"contract_id", prediction.contract_id},
          {"sentence_index", prediction.sentence_index},
          {"party", prediction.party},
          {"labels", labels}};
}

std::string ToPredictionJsonLines(
    const std::vector<CategoryPrediction>& predictions) {
  std::vector<Json> records;
  records.reserve(predictions.size());
  for (const auto& p : predictions) records.push_back(PredictionRecord(p));
  return io::ToJsonLines(records);
}

Clusters ClusterByCategory(const corpus::Contract& contract,
                           const corpus::PartyRef& party,
                           const std::vector<CategoryPrediction>& predictions) {
  Clusters clusters;
  for (Category c : kAllCategories) clusters[c];
  const int n = static_cast<int>(contract.sentences.size());
  for (const auto& prediction : predictions) {
    if (prediction.contract_id != contract.id ||
        prediction.party != party.canonical) {
      continue;
    }
    if (prediction.sentence_index >= n ||
        !contract.sentences[prediction.sentence_index].kept) {
      continue;
    }
    for (Category c : prediction.labels) {
      clusters[c].push_back(prediction.sentence_index);
    }
  }
  for (auto& [category, members] : clusters) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  return clusters;
}

}  // namespace clausesum::categorize
