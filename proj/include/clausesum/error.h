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

#ifndef CLAUSESUM_ERROR_H_
#define CLAUSESUM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clausesum {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  // corpus
  kEmptyContract,
  kMissingParties,
  // categorize
  kImportError,
  // bws
  kInfeasibleDesign,
  kInvalidPick,
  kMissingTuple,
  kInsufficientAnnotations,
  // btrank
  kEmptyInput,
  kConvergence,
  kUnknownItem,
  kUndefinedCorrelation,
  // rankers
  kDegenerateInput,
  kMissingGold,
  kNoPredictions,
  // pipeline
  kInvalidRanking,
  kEmptyReport,
  // annotsvc
  kNoWorkRemaining,
  kNoSuchAssignment,
  kLeaseExpired,
};

// Stable name of an error code, e.g. "InvalidPick". Used on the wire and in
// CLI diagnostics.
std::string_view ErrorCodeName(ErrorCode code);

// Base exception for every failure surfaced by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by iterative solvers that exhaust their iteration budget. Carries the
// final iterate so callers can inspect or salvage it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> last_iterate)
      : Error(ErrorCode::kConvergence, message),
        last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

// Process exit code used by the CLI for a given error.
int ExitCodeFor(ErrorCode code);

}  // namespace clausesum

#endif  // CLAUSESUM_ERROR_H_
