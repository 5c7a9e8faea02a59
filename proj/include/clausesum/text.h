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

// Text helpers shared by the segmenter, the categorizer and the rankers.

#ifndef CLAUSESUM_TEXT_H_
#define CLAUSESUM_TEXT_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace clausesum::text {

// Collapses every run of ASCII whitespace into one space and trims both ends.
std::string NormalizeWhitespace(std::string_view text);

std::string ToLowerAscii(std::string_view text);

inline bool IsAsciiAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

// Lowercases and splits on anything that is not an ASCII letter or digit.
std::vector<std::string> Words(std::string_view text);

// Words() minus the fixed stopword list. This is the tokenization used by all
// the summarization baselines.
std::vector<std::string> ContentTokens(std::string_view text);

// The fixed 100-word English stopword list.
const std::unordered_set<std::string>& Stopwords();

}  // namespace clausesum::text

#endif  // CLAUSESUM_TEXT_H_
