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


// Annotation service: hands out 4-tuples to annotators under expiring leases,
// validates best/worst picks, and appends accepted picks to a JSON Lines log
// that is replayed on start.
//
// Writers (lease creation and submission) are serialized by one mutex and
// publish their effects under a short exclusive lock on the in-memory state.
// Readers only take the state lock in shared mode, so they never wait for log
// I/O.

#ifndef CLAUSESUM_ANNOTSVC_H_
#define CLAUSESUM_ANNOTSVC_H_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "clausesum/bws.h"
#include "clausesum/corpus.h"
#include "clausesum/jsonl.h"

namespace httplib {
class Server;
}

namespace clausesum::annotsvc {

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;

enum class AssignmentState { kPending, kSubmitted, kExpired };

std::string_view AssignmentStateName(AssignmentState state);

struct Assignment {
  std::string tuple_id;
  std::string annotator_id;
  AssignmentState state = AssignmentState::kPending;
  TimePoint issued_at;
  int lease_seconds = 1800;
};

struct TaskPayload {
  Assignment assignment;
  bws::Tuple4 tuple;
  std::vector<std::string> texts;  // aligned with tuple.members
  std::string contract_title;
  std::string snippet;
};

struct Progress {
  int tuples_total = 0;
  int fully_annotated = 0;
  int partially_annotated = 0;
  std::map<std::string, int> per_annotator;

  bool operator==(const Progress&) const = default;
};

struct SubmitResult {
  bool duplicate = false;  // identical resubmission, nothing written
};

struct ServiceOptions {
  int annotations_per_tuple = 2;
  int lease_seconds = 1800;
};

class AnnotationService {
 public:
  using Now = std::function<TimePoint()>;

  // Replays `log_path` if it exists. Malformed lines and records for unknown
  // tuples, invalid picks or repeated (annotator, tuple) pairs are skipped
  // with a warning.
  // `contracts` supplies sentence texts; tuples of missing contracts are
  // served without text.
  AnnotationService(std::vector<bws::Tuple4> tuples,
                    std::map<std::string, corpus::Contract> contracts,
                    std::filesystem::path log_path, ServiceOptions options = {},
                    Now now = [] { return Clock::now(); });

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Returns the annotator's live lease if they hold one; otherwise leases the
  // tuple with the fewest submissions (then fewest live leases, then file
  // order) that the annotator has not seen and that still has a free slot.
  // Throws kNoWorkRemaining or kInvalidArgument for an empty annotator id.
  TaskPayload NextAssignment(const std::string& annotator_id);

  // Throws kNoSuchAssignment, kLeaseExpired or kInvalidPick. An exact repeat
  // of an accepted submission is acknowledged without a new log line.
  SubmitResult Submit(const std::string& annotator_id,
                      const std::string& tuple_id, int best, int worst);

  Progress GetProgress() const;

  // Flushes the log and returns its path.
  std::filesystem::path ExportLog();

  std::vector<Assignment> Assignments() const;
  const std::filesystem::path& log_path() const { return log_path_; }

 private:
  struct TupleState {
    bws::Tuple4 tuple;
    size_t order = 0;
    // annotator -> accepted annotation
    std::map<std::string, bws::BwsAnnotation> submitted;
  };

  // Marks overdue pending leases expired. Requires the exclusive state lock.
  void ExpireLeases(TimePoint now);
  int LiveLeases(const std::string& tuple_id) const;
  TaskPayload Payload(const Assignment& assignment) const;
  void Replay();

  ServiceOptions options_;
  Now now_;
  std::filesystem::path log_path_;
  std::map<std::string, corpus::Contract> contracts_;

  std::mutex writer_mutex_;
  mutable std::shared_mutex state_mutex_;
  std::map<std::string, TupleState> tuples_;
  std::vector<std::string> tuple_order_;
  // (annotator, tuple) -> assignment
  std::map<std::pair<std::string, std::string>, Assignment> assignments_;
  std::ofstream log_;
};

Json PayloadToJson(const TaskPayload& payload);
Json ProgressToJson(const Progress& progress);

// HTTP front end:
//   GET  /api/tasks/next?annotator=ID
//   POST /api/annotations {tuple_id, annotator_id, best, worst}
//   GET  /api/progress
//   GET  /api/export
// plus static files from `static_dir` when it is non-empty.
class HttpServer {
 public:
  HttpServer(AnnotationService& service, std::filesystem::path static_dir = {});
  ~HttpServer();

  // Binds to `port` (0 picks a free port) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after a successful Bind.
  bool Serve();
  void Stop();

 private:
  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// HTTP status used for a service error.
int HttpStatusFor(ErrorCode code);

}  // namespace clausesum::annotsvc

#endif  // CLAUSESUM_ANNOTSVC_H_
