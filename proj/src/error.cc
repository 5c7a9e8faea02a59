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

#include "clausesum/error.h"

namespace clausesum {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEmptyContract: return "EmptyContract";
    case ErrorCode::kMissingParties: return "MissingParties";
    case ErrorCode::kImportError: return "ImportError";
    case ErrorCode::kInfeasibleDesign: return "InfeasibleDesign";
    case ErrorCode::kInvalidPick: return "InvalidPick";
    case ErrorCode::kMissingTuple: return "MissingTuple";
    case ErrorCode::kInsufficientAnnotations: return "InsufficientAnnotations";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kConvergence: return "ConvergenceError";
    case ErrorCode::kUnknownItem: return "UnknownItem";
    case ErrorCode::kUndefinedCorrelation: return "UndefinedCorrelation";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kNoPredictions: return "NoPredictions";
    case ErrorCode::kInvalidRanking: return "InvalidRanking";
    case ErrorCode::kEmptyReport: return "EmptyReport";
    case ErrorCode::kNoWorkRemaining: return "NoWorkRemaining";
    case ErrorCode::kNoSuchAssignment: return "NoSuchAssignment";
    case ErrorCode::kLeaseExpired: return "LeaseExpired";
  }
  return "Unknown";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 2;
    case ErrorCode::kIo: return 3;
    case ErrorCode::kInfeasibleDesign: return 4;
    case ErrorCode::kConvergence: return 5;
    default: return 1;
  }
}

}  // namespace clausesum
