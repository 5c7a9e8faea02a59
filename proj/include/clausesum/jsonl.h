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

#ifndef CLAUSESUM_JSONL_H_
#define CLAUSESUM_JSONL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "clausesum/error.h"
#include "json.hpp"

namespace clausesum {

using Json = nlohmann::json;

namespace io {

// Whole-file helpers. Failures raise Error(kIo).
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

// One parsed JSON Lines record and its 1-based line number.
struct JsonLine {
  int line_number;
  Json value;
};

// Parses a JSON Lines file, skipping blank lines. A malformed line raises
// Error(error_code) naming the line number.
std::vector<JsonLine> ReadJsonLines(const std::filesystem::path& path,
                                    ErrorCode error_code);

// Serializes records one per line, each terminated by '\n'.
std::string ToJsonLines(const std::vector<Json>& records);

}  // namespace io
}  // namespace clausesum

#endif  // CLAUSESUM_JSONL_H_
