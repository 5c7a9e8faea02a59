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

#include "clausesum/jsonl.h"

#include <fstream>
#include <sstream>

namespace clausesum::io {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << contents;
  if (!out.flush()) throw Error(ErrorCode::kIo, "write failed " + path.string());
}

std::vector<JsonLine> ReadJsonLines(const std::filesystem::path& path,
                                    ErrorCode error_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<JsonLine> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back({line_number, Json::parse(line)});
    } catch (const Json::parse_error& e) {
      throw Error(error_code, path.string() + ":" +
                                  std::to_string(line_number) +
                                  ": malformed JSON: " + e.what());
    }
  }
  return records;
}

std::string ToJsonLines(const std::vector<Json>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace clausesum::io
