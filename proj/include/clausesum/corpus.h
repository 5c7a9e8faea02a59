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

// Contract parsing: sentence segmentation, party aliases, and the
// definitional / no-party sentence filter.

#ifndef CLAUSESUM_CORPUS_H_
#define CLAUSESUM_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clausesum/jsonl.h"

namespace clausesum::corpus {

enum class FilterReason { kDefinitional, kNoPartyMention };

std::string_view FilterReasonName(FilterReason reason);
FilterReason ParseFilterReason(std::string_view name);

struct Sentence {
  int index = 0;
  std::string text;
  bool kept = true;
  // Present iff kept == false.
  std::optional<FilterReason> filter_reason;
};

// A contracting role and the surface strings that refer to it. Matching is
// case-insensitive on whole-word boundaries.
struct PartyRef {
  std::string canonical;
  std::vector<std::string> aliases;
};

struct Contract {
  std::string id;
  std::string title;
  std::vector<Sentence> sentences;  // sentences[i].index == i
  std::vector<PartyRef> parties;

  // nullptr when no party has that canonical name.
  const PartyRef* FindParty(std::string_view canonical) const;
  int KeptCount() const;
};

struct CorpusConfig {
  std::vector<PartyRef> parties;
  std::vector<std::string> abbreviations;
  // ECMAScript regexes, matched case-insensitively.
  std::vector<std::string> definitional_patterns;

  // Tenant/Landlord aliases, the built-in abbreviation list and the built-in
  // definitional patterns. Mirrors data/corpus_config.json.
  static CorpusConfig Default();

  // Missing keys fall back to Default(). Rejects overlapping alias sets.
  static CorpusConfig FromJson(const Json& json);
  static CorpusConfig Load(const std::filesystem::path& path);
  Json ToJson() const;
};

const std::vector<std::string>& DefaultAbbreviations();
const std::vector<std::string>& DefaultDefinitionalPatterns();

// Rule-based splitter. Paragraph breaks (blank lines) always end a sentence;
// otherwise a sentence ends at '.', ';', '?' or '!' (plus closing quotes or
// brackets) followed by whitespace and an uppercase letter, digit, '(', '§'
// or an opening quote. A period is not a boundary when it closes a listed
// abbreviation or a leading item number such as "1." or "4.2.".
std::vector<std::string> SegmentSentences(
    std::string_view raw,
    const std::vector<std::string>& abbreviations = DefaultAbbreviations());

// Segments raw text into a contract whose sentences are all initially kept.
// The title is the first non-empty line. Throws kEmptyContract on blank input
// and kMissingParties when the config has no parties.
Contract LoadContract(std::string_view raw, const CorpusConfig& config,
                      std::string id = "");

// True iff any alias of the party occurs in the text as a whole word.
bool DetectPartyMentions(std::string_view text, const PartyRef& party);
inline bool DetectPartyMentions(const Sentence& sentence,
                                const PartyRef& party) {
  return DetectPartyMentions(sentence.text, party);
}

// Recomputes kept / filter_reason for every sentence from its text alone, so
// the operation is idempotent. Definitional sentences are dropped first, then
// sentences that mention no party.
Contract FilterSentences(
    const Contract& contract,
    const std::vector<std::string>& definitional_patterns =
        DefaultDefinitionalPatterns());

// JSON Lines record {contract_id, index, text, kept, filter_reason}.
Json SentenceRecord(const std::string& contract_id, const Sentence& sentence);
std::string ToSentenceJsonLines(const Contract& contract);

// Reads a file written by ToSentenceJsonLines. Parties come from the config.
Contract ReadSentenceJsonLines(const std::filesystem::path& path,
                               const CorpusConfig& config);

}  // namespace clausesum::corpus

#endif  // CLAUSESUM_CORPUS_H_
