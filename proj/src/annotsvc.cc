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


#include "clausesum/annotsvc.h"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "clausesum/error.h"
#include "httplib.h"
#include "spdlog/spdlog.h"

namespace clausesum::annotsvc {
namespace {

constexpr size_t kSnippetLength = 240;

std::string FormatTime(TimePoint t) {
  const std::time_t seconds = Clock::to_time_t(t);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

bool LeaseOver(const Assignment& a, TimePoint now) {
  return now >= a.issued_at + std::chrono::seconds(a.lease_seconds);
}

}  // namespace

std::string_view AssignmentStateName(AssignmentState state) {
  switch (state) {
    case AssignmentState::kPending: return "pending";
    case AssignmentState::kSubmitted: return "submitted";
    case AssignmentState::kExpired: return "expired";
  }
  return "";
}

AnnotationService::AnnotationService(
    std::vector<bws::Tuple4> tuples,
    std::map<std::string, corpus::Contract> contracts,
    std::filesystem::path log_path, ServiceOptions options, Now now)
    : options_(options),
      now_(std::move(now)),
      log_path_(std::move(log_path)),
      contracts_(std::move(contracts)) {
  if (options_.annotations_per_tuple <= 0 || options_.lease_seconds <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "annotations_per_tuple and lease_seconds must be positive");
  }
  for (auto& tuple : tuples) {
    const std::string id = tuple.tuple_id;
    TupleState state;
    state.tuple = std::move(tuple);
    state.order = tuple_order_.size();
    if (!tuples_.emplace(id, std::move(state)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate tuple id '" + id + "'");
    }
    tuple_order_.push_back(id);
  }
  Replay();
  if (log_path_.has_parent_path()) {
    std::filesystem::create_directories(log_path_.parent_path());
  }
  log_.open(log_path_, std::ios::app | std::ios::binary);
  if (!log_) {
    throw Error(ErrorCode::kIo, "cannot open annotation log " + log_path_.string());
  }
}

void AnnotationService::Replay() {
  if (!std::filesystem::exists(log_path_)) return;
  const std::string contents = io::ReadFile(log_path_);
  // A crash mid-write can leave an unterminated last line. Terminate it so
  // that new records start on a line of their own.
  if (!contents.empty() && contents.back() != '\n') {
    std::ofstream(log_path_, std::ios::app | std::ios::binary) << '\n';
  }
  std::istringstream lines(contents);
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bws::BwsAnnotation annotation;
    try {
      annotation = bws::AnnotationFromJson(Json::parse(line));
    } catch (const Json::exception& e) {
      spdlog::warn("{}:{}: skipping malformed log record: {}", log_path_.string(),
                   line_number, e.what());
      continue;
    }
    auto it = tuples_.find(annotation.tuple_id);
    std::string problem;
    if (it == tuples_.end()) {
      problem = "unknown tuple";
    } else if (it->second.submitted.contains(annotation.annotator_id)) {
      problem = "repeated annotation";
    } else {
      try {
        bws::ValidateAnnotation(it->second.tuple, annotation.best, annotation.worst);
      } catch (const Error& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      spdlog::warn("skipping log record for tuple '{}' by '{}': {}",
                   annotation.tuple_id, annotation.annotator_id, problem);
      continue;
    }
    it->second.submitted.emplace(annotation.annotator_id, annotation);
  }
}

void AnnotationService::ExpireLeases(TimePoint now) {
  for (auto& [key, a] : assignments_) {
    if (a.state == AssignmentState::kPending && LeaseOver(a, now)) {
      a.state = AssignmentState::kExpired;
    }
  }
}

int AnnotationService::LiveLeases(const std::string& tuple_id) const {
  int live = 0;
  for (const auto& [key, a] : assignments_) {
    if (a.tuple_id == tuple_id && a.state == AssignmentState::kPending) ++live;
  }
  return live;
}

TaskPayload AnnotationService::Payload(const Assignment& assignment) const {
  TaskPayload payload;
  payload.assignment = assignment;
  payload.tuple = tuples_.at(assignment.tuple_id).tuple;
  auto it = contracts_.find(payload.tuple.contract_id);
  for (int member : payload.tuple.members) {
    std::string text;
    if (it != contracts_.end() && member >= 0 &&
        member < static_cast<int>(it->second.sentences.size())) {
      text = it->second.sentences[member].text;
    }
    payload.texts.push_back(std::move(text));
  }
  if (it != contracts_.end()) {
    payload.contract_title = it->second.title;
    for (const auto& sentence : it->second.sentences) {
      if (sentence.index == 0) continue;
      payload.snippet = sentence.text.substr(0, kSnippetLength);
      break;
    }
  }
  return payload;
}

TaskPayload AnnotationService::NextAssignment(const std::string& annotator_id) {
  if (annotator_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "annotator id is required");
  }
  std::lock_guard writer(writer_mutex_);
  std::unique_lock state(state_mutex_);
  const TimePoint now = now_();
  ExpireLeases(now);

  for (const auto& [key, a] : assignments_) {
    if (key.first == annotator_id && a.state == AssignmentState::kPending) {
      return Payload(a);
    }
  }

  const std::string* chosen = nullptr;
  std::tuple<int, int, size_t> chosen_rank{};
  for (const auto& tuple_id : tuple_order_) {
    const TupleState& t = tuples_.at(tuple_id);
    if (t.submitted.contains(annotator_id)) continue;
    const int done = static_cast<int>(t.submitted.size());
    const int live = LiveLeases(tuple_id);
    if (done + live >= options_.annotations_per_tuple) continue;
    std::tuple<int, int, size_t> rank{done, live, t.order};
    if (chosen == nullptr || rank < chosen_rank) {
      chosen = &tuple_id;
      chosen_rank = rank;
    }
  }
  if (chosen == nullptr) {
    throw Error(ErrorCode::kNoWorkRemaining,
                "no tuple left for annotator '" + annotator_id + "'");
  }
  Assignment assignment{*chosen, annotator_id, AssignmentState::kPending, now,
                        options_.lease_seconds};
  assignments_[{annotator_id, *chosen}] = assignment;
  return Payload(assignment);
}

SubmitResult AnnotationService::Submit(const std::string& annotator_id,
                                       const std::string& tuple_id, int best,
                                       int worst) {
  std::lock_guard writer(writer_mutex_);
  // Only writers mutate state and they are serialized above, so reads here
  // need no state lock.
  auto tuple_it = tuples_.find(tuple_id);
  if (tuple_it == tuples_.end()) {
    throw Error(ErrorCode::kNoSuchAssignment, "unknown tuple '" + tuple_id + "'");
  }
  const TupleState& t = tuple_it->second;
  if (auto done = t.submitted.find(annotator_id); done != t.submitted.end()) {
    if (done->second.best == best && done->second.worst == worst) {
      return {true};
    }
    throw Error(ErrorCode::kNoSuchAssignment,
                "tuple '" + tuple_id + "' was already annotated by '" +
                    annotator_id + "'");
  }
  auto a_it = assignments_.find({annotator_id, tuple_id});
  if (a_it == assignments_.end()) {
    throw Error(ErrorCode::kNoSuchAssignment,
                "no assignment of '" + tuple_id + "' to '" + annotator_id + "'");
  }
  const TimePoint now = now_();
  if (a_it->second.state == AssignmentState::kExpired ||
      LeaseOver(a_it->second, now)) {
    std::unique_lock state(state_mutex_);
    a_it->second.state = AssignmentState::kExpired;
    throw Error(ErrorCode::kLeaseExpired,
                "lease on '" + tuple_id + "' for '" + annotator_id + "' expired");
  }
  if (static_cast<int>(t.submitted.size()) >= options_.annotations_per_tuple) {
    throw Error(ErrorCode::kNoSuchAssignment,
                "tuple '" + tuple_id + "' is fully annotated");
  }
  bws::BwsAnnotation annotation = bws::ValidateAnnotation(
      t.tuple, best, worst, annotator_id, bws::UtcNowIso8601());

  log_ << bws::AnnotationRecord(annotation).dump() << '\n';
  log_.flush();
  if (!log_) {
    log_.clear();
    throw Error(ErrorCode::kIo, "failed to append to " + log_path_.string());
  }

  std::unique_lock state(state_mutex_);
  tuple_it->second.submitted.emplace(annotator_id, std::move(annotation));
  a_it->second.state = AssignmentState::kSubmitted;
  return {false};
}

Progress AnnotationService::GetProgress() const {
  std::shared_lock state(state_mutex_);
  Progress progress;
  progress.tuples_total = static_cast<int>(tuples_.size());
  for (const auto& [id, t] : tuples_) {
    const int done = static_cast<int>(t.submitted.size());
    if (done >= options_.annotations_per_tuple) {
      ++progress.fully_annotated;
    } else if (done > 0) {
      ++progress.partially_annotated;
    }
    for (const auto& [annotator, annotation] : t.submitted) {
      ++progress.per_annotator[annotator];
    }
  }
  return progress;
}

std::filesystem::path AnnotationService::ExportLog() {
  std::lock_guard writer(writer_mutex_);
  log_.flush();
  if (!log_) throw Error(ErrorCode::kIo, "failed to flush " + log_path_.string());
  return log_path_;
}

std::vector<Assignment> AnnotationService::Assignments() const {
  std::shared_lock state(state_mutex_);
  std::vector<Assignment> out;
  for (const auto& [key, a] : assignments_) out.push_back(a);
  return out;
}

Json PayloadToJson(const TaskPayload& payload) {
  const Assignment& a = payload.assignment;
  Json sentences = Json::array();
  for (size_t i = 0; i < payload.tuple.members.size(); ++i) {
    sentences.push_back(
        {{"index", payload.tuple.members[i]}, {"text", payload.texts[i]}});
  }
  return {{"tuple_id", a.tuple_id},
          {"annotator_id", a.annotator_id},
          {"state", std::string(AssignmentStateName(a.state))},
          {"issued_at", FormatTime(a.issued_at)},
          {"lease_seconds", a.lease_seconds},
          {"contract_id", payload.tuple.contract_id},
          {"party", payload.tuple.party},
          {"contract_title", payload.contract_title},
          {"snippet", payload.snippet},
          {"sentences", sentences}};
}

Json ProgressToJson(const Progress& progress) {
  return {{"tuples_total", progress.tuples_total},
          {"fully_annotated", progress.fully_annotated},
          {"partially_annotated", progress.partially_annotated},
          {"per_annotator", progress.per_annotator}};
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidPick: return 422;
    case ErrorCode::kNoWorkRemaining: return 404;
    case ErrorCode::kNoSuchAssignment: return 409;
    case ErrorCode::kLeaseExpired: return 410;
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

namespace {

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, ErrorCode code, const std::string& what) {
  SendJson(res, HttpStatusFor(code),
           {{"error", std::string(ErrorCodeName(code))}, {"message", what}});
}

}  // namespace

HttpServer::HttpServer(AnnotationService& service,
                       std::filesystem::path static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->Get("/api/tasks/next", [this](const httplib::Request& req,
                                         httplib::Response& res) {
    try {
      const std::string annotator = req.get_param_value("annotator");
      SendJson(res, 200, PayloadToJson(service_.NextAssignment(annotator)));
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    }
  });
  server_->Post("/api/annotations", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    Json body;
    try {
      body = Json::parse(req.body);
      const auto tuple_id = body.at("tuple_id").get<std::string>();
      const auto annotator = body.at("annotator_id").get<std::string>();
      const int best = body.at("best").get<int>();
      const int worst = body.at("worst").get<int>();
      const SubmitResult result = service_.Submit(annotator, tuple_id, best, worst);
      SendJson(res, 200, {{"status", "ok"}, {"duplicate", result.duplicate}});
    } catch (const Json::exception& e) {
      SendError(res, ErrorCode::kInvalidArgument, e.what());
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    }
  });
  server_->Get("/api/progress", [this](const httplib::Request&,
                                       httplib::Response& res) {
    SendJson(res, 200, ProgressToJson(service_.GetProgress()));
  });
  server_->Get("/api/export", [this](const httplib::Request&,
                                     httplib::Response& res) {
    try {
      const auto path = service_.ExportLog();
      res.set_header("X-Log-Path", path.string());
      res.set_content(io::ReadFile(path), "application/x-ndjson");
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    }
  });
  if (!static_dir.empty()) {
    if (!server_->set_mount_point("/", static_dir.string())) {
      throw Error(ErrorCode::kIo,
                  "static directory " + static_dir.string() + " does not exist");
    }
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Serve() { return server_->listen_after_bind(); }

void HttpServer::Stop() { server_->stop(); }

}  // namespace clausesum::annotsvc
