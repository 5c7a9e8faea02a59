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

#include "clausesum/text.h"

namespace clausesum::text {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char LowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = LowerAscii(c);
  return out;
}

std::vector<std::string> Words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (IsAsciiAlnum(c)) {
      current.push_back(LowerAscii(c));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> ContentTokens(std::string_view text) {
  const auto& stop = Stopwords();
  std::vector<std::string> tokens;
  for (auto& w : Words(text)) {
    if (!stop.contains(w)) tokens.push_back(std::move(w));
  }
  return tokens;
}

const std::unordered_set<std::string>& Stopwords() {
  static const auto* const kStopwords = new std::unordered_set<std::string>{
      "a",     "about",   "after",  "against", "all",   "also",  "an",
      "and",   "any",     "are",    "as",      "at",    "be",    "because",
      "been",  "before",  "being",  "between", "both",  "but",   "by",
      "can",   "did",     "do",     "does",    "down",  "during", "each",
      "for",   "from",    "had",    "has",     "have",  "he",    "her",
      "here",  "him",     "his",    "i",       "if",    "in",    "into",
      "is",    "it",      "its",    "just",    "me",    "more",  "most",
      "my",    "no",      "not",    "now",     "of",    "off",   "on",
      "only",  "or",      "other",  "our",     "out",   "over",  "same",
      "she",   "should",  "so",     "some",    "such",  "than",  "that",
      "the",   "their",   "them",   "then",    "there", "these", "they",
      "this",  "those",   "through", "to",     "under", "until", "up",
      "upon",  "very",    "was",    "we",      "were",  "what",  "when",
      "where", "which",   "while",  "who",     "will",  "with",  "would",
      "you",   "your"};
  return *kStopwords;
}

}  // namespace clausesum::text
