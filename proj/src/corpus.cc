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

#include "clausesum/corpus.h"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "clausesum/error.h"
#include "clausesum/text.h"

namespace clausesum::corpus {
namespace {

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool HasBytes(std::string_view s, size_t pos, std::string_view bytes) {
  return s.substr(pos, bytes.size()) == bytes;
}

constexpr std::string_view kRightSingleQuote = "\xE2\x80\x99";
constexpr std::string_view kRightDoubleQuote = "\xE2\x80\x9D";
constexpr std::string_view kLeftSingleQuote = "\xE2\x80\x98";
constexpr std::string_view kLeftDoubleQuote = "\xE2\x80\x9C";
constexpr std::string_view kSectionSign = "\xC2\xA7";

// Length of a closing quote or bracket at pos, or 0.
size_t ClosingLength(std::string_view s, size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (HasBytes(s, pos, kRightSingleQuote)) return kRightSingleQuote.size();
  if (HasBytes(s, pos, kRightDoubleQuote)) return kRightDoubleQuote.size();
  return 0;
}

bool StartsSentence(std::string_view s, size_t pos) {
  const char c = s[pos];
  if (IsUpper(c) || IsDigit(c) || c == '(') return true;
  if (HasBytes(s, pos, kSectionSign)) return true;
  size_t quote = 0;
  if (c == '"' || c == '\'') {
    quote = 1;
  } else if (HasBytes(s, pos, kLeftDoubleQuote) ||
             HasBytes(s, pos, kLeftSingleQuote)) {
    quote = 3;
  }
  if (quote == 0 || pos + quote >= s.size()) return false;
  return IsUpper(s[pos + quote]) || IsDigit(s[pos + quote]);
}

// "1", "12", "4.2", "10.3.1", or a single letter.
bool IsItemMarker(std::string_view body) {
  if (body.size() == 1 && text::IsAsciiAlnum(body[0])) return true;
  static const std::regex kNumbered(R"(\d{1,3}(\.\d{1,3})*)");
  return std::regex_match(body.begin(), body.end(), kNumbered);
}

// Whether the period at `period` closes an abbreviation or a leading item
// number of the sentence that starts at `sentence_start`.
bool IsProtectedPeriod(std::string_view s, size_t sentence_start,
                       size_t period,
                       const std::set<std::string>& abbreviations) {
  size_t token_start = sentence_start;
  const size_t space = s.rfind(' ', period);
  if (space != std::string_view::npos && space + 1 > sentence_start) {
    token_start = space + 1;
  }
  std::string_view token = s.substr(token_start, period - token_start + 1);
  while (!token.empty() && (token.front() == '(' || token.front() == '"' ||
                            token.front() == '\'')) {
    token.remove_prefix(1);
  }
  if (abbreviations.contains(text::ToLowerAscii(token))) return true;
  return token_start == sentence_start &&
         IsItemMarker(token.substr(0, token.size() - 1));
}

void SplitParagraph(std::string_view paragraph,
                    const std::set<std::string>& abbreviations,
                    std::vector<std::string>& out) {
  const std::string p = text::NormalizeWhitespace(paragraph);
  const size_t n = p.size();
  size_t start = 0;
  for (size_t i = 0; i < n; ++i) {
    const char c = p[i];
    if (c != '.' && c != ';' && c != '?' && c != '!') continue;
    size_t end = i + 1;
    while (end < n) {
      const size_t len = ClosingLength(p, end);
      if (len == 0) break;
      end += len;
    }
    if (end + 1 >= n || p[end] != ' ') continue;
    if (!StartsSentence(p, end + 1)) continue;
    if (c == '.' && IsProtectedPeriod(p, start, i, abbreviations)) continue;
    out.push_back(p.substr(start, end - start));
    start = end + 1;
    i = end;
  }
  if (start < n) out.push_back(p.substr(start));
}

std::string FirstNonEmptyLine(std::string_view raw) {
  std::istringstream in{std::string(raw)};
  std::string line;
  while (std::getline(in, line)) {
    std::string normalized = text::NormalizeWhitespace(line);
    if (!normalized.empty()) return normalized;
  }
  return "";
}

std::vector<PartyRef> PartiesFromJson(const Json& json) {
  std::vector<PartyRef> parties;
  if (json.is_array()) {
    for (const auto& entry : json) {
      parties.push_back({entry.at("canonical").get<std::string>(),
                         entry.at("aliases").get<std::vector<std::string>>()});
    }
  } else if (json.is_object()) {
    for (const auto& [name, aliases] : json.items()) {
      parties.push_back({name, aliases.get<std::vector<std::string>>()});
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "parties must be an array or an object");
  }
  return parties;
}

void ValidateParties(const std::vector<PartyRef>& parties) {
  std::set<std::string> seen_names;
  std::set<std::string> seen_aliases;
  for (const auto& party : parties) {
    if (party.canonical.empty() || !seen_names.insert(party.canonical).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "empty or duplicate party name '" + party.canonical + "'");
    }
    if (party.aliases.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "party " + party.canonical + " has no aliases");
    }
    std::set<std::string> own;
    for (const auto& alias : party.aliases) {
      const std::string key = text::ToLowerAscii(alias);
      if (key.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "empty alias");
      }
      own.insert(key);
    }
    for (const auto& key : own) {
      if (!seen_aliases.insert(key).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "alias '" + key + "' is shared by two parties");
      }
    }
  }
}

}  // namespace

std::string_view FilterReasonName(FilterReason reason) {
  switch (reason) {
    case FilterReason::kDefinitional: return "definitional";
    case FilterReason::kNoPartyMention: return "no_party_mention";
  }
  return "";
}

FilterReason ParseFilterReason(std::string_view name) {
  if (name == "definitional") return FilterReason::kDefinitional;
  if (name == "no_party_mention") return FilterReason::kNoPartyMention;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown filter reason '" + std::string(name) + "'");
}

const PartyRef* Contract::FindParty(std::string_view canonical) const {
  for (const auto& party : parties) {
    if (party.canonical == canonical) return &party;
  }
  return nullptr;
}

int Contract::KeptCount() const {
  return static_cast<int>(std::count_if(
      sentences.begin(), sentences.end(),
      [](const Sentence& s) { return s.kept; }));
}

const std::vector<std::string>& DefaultAbbreviations() {
  static const auto* const kList = new std::vector<std::string>{
      "Sec.",   "Secs.", "No.",   "Nos.",  "Inc.",  "Exh.",  "Ex.",
      "U.S.",   "U.S.A.", "Co.",  "Corp.", "Ltd.",  "L.P.",  "Mr.",
      "Mrs.",   "Ms.",   "Dr.",   "St.",   "Ave.",  "Blvd.", "Ste.",
      "Art.",   "Para.", "e.g.",  "i.e.",  "viz.",  "vs.",   "approx.",
      "Jan.",   "Feb.",  "Mar.",  "Apr.",  "Jun.",  "Jul.",  "Aug.",
      "Sep.",   "Sept.", "Oct.",  "Nov.",  "Dec."};
  return *kList;
}

const std::vector<std::string>& DefaultDefinitionalPatterns() {
  static const auto* const kList = new std::vector<std::string>{
      R"(\bmeans\b)", R"(\bmean\b)", R"(shall mean)",
      R"(shall have the meaning)", R"(is defined as)"};
  return *kList;
}

CorpusConfig CorpusConfig::Default() {
  CorpusConfig config;
  config.parties = {{"Tenant", {"tenant", "lessee"}},
                    {"Landlord", {"landlord", "lessor"}}};
  config.abbreviations = DefaultAbbreviations();
  config.definitional_patterns = DefaultDefinitionalPatterns();
  return config;
}

CorpusConfig CorpusConfig::FromJson(const Json& json) {
  CorpusConfig config = Default();
  try {
    if (json.contains("parties")) config.parties = PartiesFromJson(json["parties"]);
    if (json.contains("abbreviations")) {
      config.abbreviations =
          json["abbreviations"].get<std::vector<std::string>>();
    }
    if (json.contains("definitional_patterns")) {
      config.definitional_patterns =
          json["definitional_patterns"].get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad corpus config: ") + e.what());
  }
  ValidateParties(config.parties);
  return config;
}

CorpusConfig CorpusConfig::Load(const std::filesystem::path& path) {
  Json json;
  try {
    json = Json::parse(io::ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + ": " + e.what());
  }
  // A relative abbreviations_file is resolved against the config directory.
  if (json.contains("abbreviations_file") && !json.contains("abbreviations")) {
    std::filesystem::path list = json["abbreviations_file"].get<std::string>();
    if (list.is_relative()) list = path.parent_path() / list;
    std::istringstream in(io::ReadFile(list));
    std::vector<std::string> abbreviations;
    std::string line;
    while (std::getline(in, line)) {
      line = text::NormalizeWhitespace(line);
      if (!line.empty() && line[0] != '#') abbreviations.push_back(line);
    }
    json["abbreviations"] = abbreviations;
  }
  return FromJson(json);
}

Json CorpusConfig::ToJson() const {
  Json parties_json = Json::array();
  for (const auto& party : parties) {
    parties_json.push_back(
        {{"canonical", party.canonical}, {"aliases", party.aliases}});
  }
  return {{"parties", parties_json},
          {"abbreviations", abbreviations},
          {"definitional_patterns", definitional_patterns}};
}

std::vector<std::string> SegmentSentences(
    std::string_view raw, const std::vector<std::string>& abbreviations) {
  std::set<std::string> lowered;
  for (const auto& a : abbreviations) lowered.insert(text::ToLowerAscii(a));

  std::vector<std::string> sentences;
  std::string paragraph;
  std::istringstream in{std::string(raw)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\f\v") == std::string::npos) {
      SplitParagraph(paragraph, lowered, sentences);
      paragraph.clear();
    } else {
      paragraph += line;
      paragraph.push_back('\n');
    }
  }
  SplitParagraph(paragraph, lowered, sentences);
  return sentences;
}

Contract LoadContract(std::string_view raw, const CorpusConfig& config,
                      std::string id) {
  if (text::NormalizeWhitespace(raw).empty()) {
    throw Error(ErrorCode::kEmptyContract,
                "contract '" + id + "' has no text");
  }
  if (config.parties.empty()) {
    throw Error(ErrorCode::kMissingParties, "no parties configured");
  }
  Contract contract;
  contract.id = std::move(id);
  contract.title = FirstNonEmptyLine(raw);
  contract.parties = config.parties;
  int index = 0;
  for (auto& text : SegmentSentences(raw, config.abbreviations)) {
    contract.sentences.push_back({index++, std::move(text), true, std::nullopt});
  }
  return contract;
}

bool DetectPartyMentions(std::string_view text, const PartyRef& party) {
  const std::string haystack = text::ToLowerAscii(text);
  for (const auto& alias : party.aliases) {
    const std::string needle = text::ToLowerAscii(alias);
    if (needle.empty()) continue;
    for (size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + 1)) {
      const size_t end = pos + needle.size();
      const bool left_ok = pos == 0 || !text::IsAsciiAlnum(haystack[pos - 1]);
      const bool right_ok =
          end == haystack.size() || !text::IsAsciiAlnum(haystack[end]);
      if (left_ok && right_ok) return true;
    }
  }
  return false;
}

Contract FilterSentences(const Contract& contract,
                         const std::vector<std::string>& definitional_patterns) {
  std::vector<std::regex> patterns;
  for (const auto& pattern : definitional_patterns) {
    try {
      patterns.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad definitional pattern '" + pattern + "': " + e.what());
    }
  }
  Contract out = contract;
  for (auto& sentence : out.sentences) {
    const bool definitional =
        std::any_of(patterns.begin(), patterns.end(), [&](const std::regex& re) {
          return std::regex_search(sentence.text, re);
        });
    const bool mentions_party = std::any_of(
        out.parties.begin(), out.parties.end(),
        [&](const PartyRef& party) { return DetectPartyMentions(sentence, party); });
    if (definitional) {
      sentence.kept = false;
      sentence.filter_reason = FilterReason::kDefinitional;
    } else if (!mentions_party) {
      sentence.kept = false;
      sentence.filter_reason = FilterReason::kNoPartyMention;
    } else {
      sentence.kept = true;
      sentence.filter_reason.reset();
    }
  }
  return out;
}

Json SentenceRecord(const std::string& contract_id, const Sentence& sentence) {
  Json record = {{"contract_id", contract_id},
                 {"index", sentence.index},
                 {"text", sentence.text},
                 {"kept", sentence.kept}};
  record["filter_reason"] =
      sentence.filter_reason
          ? Json(std::string(FilterReasonName(*sentence.filter_reason)))
          : Json(nullptr);
  return record;
}

std::string ToSentenceJsonLines(const Contract& contract) {
  std::vector<Json> records;
  records.reserve(contract.sentences.size());
  for (const auto& sentence : contract.sentences) {
    records.push_back(SentenceRecord(contract.id, sentence));
  }
  return io::ToJsonLines(records);
}

Contract ReadSentenceJsonLines(const std::filesystem::path& path,
                               const CorpusConfig& config) {
  Contract contract;
  contract.parties = config.parties;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kInvalidArgument)) {
    try {
      Sentence sentence;
      sentence.index = record.at("index").get<int>();
      sentence.text = record.at("text").get<std::string>();
      sentence.kept = record.at("kept").get<bool>();
      if (record.contains("filter_reason") && !record["filter_reason"].is_null()) {
        sentence.filter_reason =
            ParseFilterReason(record["filter_reason"].get<std::string>());
      }
      if (sentence.index != static_cast<int>(contract.sentences.size())) {
        throw Error(ErrorCode::kInvalidArgument, "sentence indices not contiguous");
      }
      contract.id = record.at("contract_id").get<std::string>();
      contract.sentences.push_back(std::move(sentence));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  if (contract.sentences.empty()) {
    throw Error(ErrorCode::kEmptyContract, path.string() + " has no sentences");
  }
  contract.title = contract.sentences[0].text;
  return contract;
}

}  // namespace clausesum::corpus
