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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any check fails.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "clausesum/annotsvc.h"
#include "clausesum/btrank.h"
#include "clausesum/bws.h"
#include "clausesum/error.h"
#include "clausesum/jsonl.h"
#include "clausesum/pipeline.h"
#include "clausesum/rankers.h"
#include "clausesum/rng.h"
#include "httplib.h"
#include "spdlog/spdlog.h"
#include "test_util.h"

namespace clausesum {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void Require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

// ---------------------------------------------------------------------------

void BtCorrectness(Outcome& out) {
  btrank::FitOptions plain;
  plain.pseudo = 0.0;
  std::vector<btrank::PairwiseComparison> record = {
      {0, 1, 1.0}, {0, 1, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}};
  const auto two = btrank::FitBradleyTerry(record, plain);
  const double ratio = two.scores.at(0) / two.scores.at(1);
  out.Require(std::abs(ratio - 3.0) <= 1e-4, "3:1 ratio");
  out.detail << "ratio=" << ratio;

  const auto start = std::chrono::steady_clock::now();
  const int items = 20;
  std::vector<double> planted(items);
  for (int i = 0; i < items; ++i) planted[i] = std::pow(0.8, i);
  Rng rng(2026);
  std::vector<btrank::PairwiseComparison> pairs;
  while (pairs.size() < 5000) {
    const int a = static_cast<int>(rng.UniformInt(items));
    const int b = static_cast<int>(rng.UniformInt(items));
    if (a == b) continue;
    const bool a_wins = rng.UniformDouble() < planted[a] / (planted[a] + planted[b]);
    pairs.push_back(a_wins ? btrank::PairwiseComparison{a, b, 1.0}
                           : btrank::PairwiseComparison{b, a, 1.0});
  }
  int iterations = 0;
  const auto fit = btrank::FitBradleyTerry(pairs, {}, &iterations);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<int> truth(items);
  for (int i = 0; i < items; ++i) truth[i] = i;
  const double tau = testing::KendallTau(btrank::RankFromScores(fit).items, truth);
  out.Require(tau >= 0.9, "kendall tau >= 0.9");
  out.Require(seconds < 5.0, "runtime < 5 s");
  out.detail << " tau=" << tau << " runtime=" << seconds << "s cycles=" << iterations;
}

void BwsPipeline(Outcome& out) {
  int annotations = 0;
  for (int n : {16, 40, 300, 3300}) {
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    bws::TupleDesignOptions options;
    options.seed = static_cast<uint64_t>(n);
    const auto tuples = bws::GenerateTuples(ids, options);
    const size_t expected = static_cast<size_t>(std::ceil(1.5 * n));
    out.Require(tuples.size() == expected, "count for N=" + std::to_string(n));
    std::set<std::vector<int>> unique;
    std::vector<int> occurrences(n, 0);
    bool distinct = true;
    for (const auto& t : tuples) {
      std::vector<int> sorted(t.members.begin(), t.members.end());
      std::sort(sorted.begin(), sorted.end());
      distinct &= std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      unique.insert(sorted);
      for (int m : t.members) ++occurrences[m];
    }
    out.Require(distinct, "distinct members for N=" + std::to_string(n));
    out.Require(unique.size() == tuples.size(), "uniqueness for N=" + std::to_string(n));
    out.Require(*std::min_element(occurrences.begin(), occurrences.end()) >= 6,
                "min occurrence for N=" + std::to_string(n));
    out.detail << "N=" << n << ":" << tuples.size() << " ";

    // Every possible (best, worst) on every tuple.
    const auto index = bws::IndexTuples(tuples);
    for (const auto& t : tuples) {
      for (int b = 0; b < 4; ++b) {
        for (int w = 0; w < 4; ++w) {
          if (b == w || n > 40) continue;
          const std::vector<bws::BwsAnnotation> one = {
              {t.tuple_id, "x", t.members[b], t.members[w], ""}};
          const auto pairs = bws::TuplesToPairs(one, index);
          std::multiset<std::pair<int, int>> got, want;
          for (const auto& p : pairs) got.insert({p.winner, p.loser});
          for (int m = 0; m < 4; ++m) {
            if (m != b) want.insert({t.members[b], t.members[m]});
            if (m != b && m != w) want.insert({t.members[m], t.members[w]});
          }
          out.Require(pairs.size() == 5 && got == want, "5-pair pattern");
          ++annotations;
        }
      }
    }
  }
  // The published pattern with best=a, worst=d.
  bws::Tuple4 t;
  t.tuple_id = "p";
  t.members = {1, 2, 3, 4};
  const std::vector<bws::Tuple4> one_tuple = {t};
  const std::vector<bws::BwsAnnotation> ann = {{"p", "x", 1, 4, ""}};
  const std::vector<btrank::PairwiseComparison> expected = {
      {1, 2, 1.0}, {1, 3, 1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, 1.0}};
  out.Require(bws::TuplesToPairs(ann, bws::IndexTuples(one_tuple)) == expected,
              "a>b a>c a>d b>d c>d");
  out.detail << "annotations checked=" << annotations + 1;
}

void ShrBehavior(Outcome& out) {
  std::vector<int> ids(60);
  for (int i = 0; i < 60; ++i) ids[i] = i;
  bws::TupleDesignOptions options;
  options.seed = 31;
  const auto tuples = bws::GenerateTuples(ids, options);
  const auto index = bws::IndexTuples(tuples);

  std::vector<bws::BwsAnnotation> consistent, random;
  Rng rng(32);
  for (const auto& t : tuples) {
    const int best = *std::max_element(t.members.begin(), t.members.end());
    const int worst = *std::min_element(t.members.begin(), t.members.end());
    for (const std::string who : {"a", "b"}) {
      consistent.push_back({t.tuple_id, who, best, worst, ""});
      const size_t bi = rng.UniformInt(4);
      size_t wi = rng.UniformInt(3);
      if (wi >= bi) ++wi;
      random.push_back({t.tuple_id, who, t.members[bi], t.members[wi], ""});
    }
  }
  const auto c = bws::SplitHalfReliability(consistent, index, 100, 1);
  const auto r = bws::SplitHalfReliability(random, index, 100, 1);
  out.Require(c.mean >= 0.95, "consistent mean >= 0.95");
  out.Require(std::abs(r.mean) < 0.15, "random |mean| < 0.15");
  out.detail << "consistent=" << c.mean << "+-" << c.stddev << " random=" << r.mean
             << "+-" << r.stddev << " (repetitions=" << r.repetitions << ")";
}

void MetricOracle(Outcome& out) {
  Rng rng(41);
  const std::vector<int> ks(pipeline::kDefaultKs.begin(), pipeline::kDefaultKs.end());
  double worst = 0.0;
  const int instances = 500;
  for (int trial = 0; trial < instances; ++trial) {
    std::vector<int> pool(24);
    for (int i = 0; i < 24; ++i) pool[i] = i;
    rng.Shuffle(pool);
    const std::vector<int> pred(pool.begin(), pool.begin() + rng.UniformInt(13));
    rng.Shuffle(pool);
    const std::vector<int> ref(pool.begin(), pool.begin() + 1 + rng.UniformInt(12));
    const auto row = pipeline::RankingMetrics(pred, ref);
    const auto oracle = testing::BruteForceMetrics(pred, ref, ks, 10);
    for (int k : ks) {
      worst = std::max({worst, std::abs(row->p_at_k.at(k) - oracle.p.at(k)),
                        std::abs(row->r_at_k.at(k) - oracle.r.at(k)),
                        std::abs(row->f1_at_k.at(k) - oracle.f1.at(k))});
    }
    worst = std::max({worst, std::abs(row->map - oracle.map),
                      std::abs(row->ndcg - oracle.ndcg)});
  }
  out.Require(worst <= 1e-9, "oracle agreement to 1e-9");

  const std::vector<int> perfect = {3, 1, 2};
  const auto p = pipeline::RankingMetrics(perfect, perfect);
  out.Require(p->p_at_k.at(1) == 1.0 && p->p_at_k.at(3) == 1.0 && p->map == 1.0 &&
                  p->ndcg == 1.0,
              "perfect prediction");
  const std::vector<int> pred = {1, 2, 3}, ref = {1, 3};
  const auto h = pipeline::RankingMetrics(pred, ref);
  out.Require(h->p_at_k.at(1) == 1.0 && h->p_at_k.at(3) == 2.0 / 3.0 &&
                  h->r_at_k.at(3) == 1.0,
              "P@1, P@3, R@3");
  out.Require(std::abs(h->map - 5.0 / 6.0) < 1e-15, "MAP = 5/6");
  const double ndcg = 1.5 / (1.0 + 1.0 / std::log2(3.0));
  out.Require(std::abs(h->ndcg - ndcg) < 1e-15 && std::round(h->ndcg * 1e4) == 9197,
              "NDCG = 0.9197");
  out.detail << "instances=" << instances << " max|diff|=" << worst
             << " MAP=" << h->map << " NDCG=" << h->ndcg;
}

// Mean metrics of oracle-ranked summaries, built from `labels`, against the
// gold references.
pipeline::Report OracleReport(const testing::SyntheticCorpus& corpus,
                              const std::vector<categorize::CategoryPrediction>& labels,
                              double cr) {
  std::vector<pipeline::MetricRow> rows;
  for (const auto& contract : corpus.contracts) {
    for (const auto& party : contract.parties) {
      const auto& gold = corpus.gold_scores.at({contract.id, party.canonical});
      const auto reference = pipeline::BuildReference(contract, party.canonical,
                                                      corpus.gold_labels, gold, cr);
      pipeline::SummaryOptions options;
      options.cr = cr;
      options.ranker.kind = rankers::RankerKind::kOracle;
      const auto summary = pipeline::BuildSummary(contract, party.canonical, labels,
                                                  options, {&gold, {}});
      for (auto& row : pipeline::EvaluateSummary(summary, reference)) {
        rows.push_back(std::move(row));
      }
    }
  }
  return pipeline::AggregateReport(std::move(rows));
}

void DegenerateUpperBound(Outcome& out) {
  const auto corpus = testing::MakeSyntheticCorpus(3, 120, 51);
  for (double cr : {0.05, 0.10, 0.15}) {
    const auto report = OracleReport(corpus, corpus.gold_labels, cr);
    const double map = report.averages.at("MAP");
    const double ndcg = report.averages.at("NDCG");
    out.Require(map == 1.0 && ndcg == 1.0, "MAP = NDCG = 1 at cr " + std::to_string(cr));
    out.detail << "cr=" << cr << " MAP=" << map << " NDCG=" << ndcg
               << " rows=" << report.rows.size() << " ";
  }
}

void ErrorPropagation(Outcome& out) {
  const auto corpus = testing::MakeSyntheticCorpus(3, 120, 61);
  double previous = 2.0;
  for (double p : {0.0, 0.1, 0.25, 0.5}) {
    const auto flipped = testing::FlipLabels(corpus.gold_labels, p, 62);
    const double ndcg = OracleReport(corpus, flipped, 0.10).averages.at("NDCG");
    out.Require(ndcg <= previous, "non-increasing at p=" + std::to_string(p));
    out.detail << "p=" << p << ":NDCG=" << ndcg << " ";
    previous = ndcg;
  }
}

void RankerSanity(Outcome& out) {
  static const std::vector<std::string> words = {
      "rent", "repair", "deposit", "notice", "premises", "insurance", "term",
      "renewal", "utilities", "damage", "default", "assignment", "sublet",
      "alteration", "access", "inspection", "holdover", "escrow", "lien", "tax"};
  Rng rng(71);
  int bad_convergence = 0, bad_sum = 0, bad_permutation = 0;
  int max_iterations = 0;
  double max_delta = 0.0;
  const int cases = 1000;
  for (int trial = 0; trial < cases; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(50));
    rankers::CandidateSet cands;
    btrank::ScoreTable gold;
    std::vector<btrank::PairwiseComparison> preds;
    int index = 0;
    for (int i = 0; i < n; ++i) {
      index += 1 + static_cast<int>(rng.UniformInt(4));
      std::string text;
      const int len = 1 + static_cast<int>(rng.UniformInt(15));
      for (int w = 0; w < len; ++w) {
        if (!text.empty()) text += ' ';
        text += words[rng.UniformInt(words.size())];
      }
      cands.indices.push_back(index);
      cands.texts.push_back(text);
      gold.scores[index] = rng.UniformDouble();
    }
    for (int k = 0; k < n; ++k) {
      const int a = cands.indices[rng.UniformInt(n)];
      const int b = cands.indices[rng.UniformInt(n)];
      if (a != b) preds.push_back({a, b, 1.0});
    }
    for (int which = 0; which < 2; ++which) {
      rankers::PageRankResult diag;
      which == 0 ? rankers::RankTextRank(cands, {}, &diag)
                 : rankers::RankLexRank(cands, 0.1, {}, &diag);
      max_iterations = std::max(max_iterations, diag.iterations);
      max_delta = std::max(max_delta, diag.delta);
      if (!(diag.delta < 1e-6 && diag.iterations <= 100)) ++bad_convergence;
      double sum = 0.0;
      bool negative = false;
      for (double s : diag.scores) {
        sum += s;
        negative |= s < 0.0;
      }
      if (std::abs(sum - 1.0) > 1e-6 || negative) ++bad_sum;
    }
    const rankers::RankerInputs inputs{&gold, preds};
    for (auto kind : {rankers::RankerKind::kRandom, rankers::RankerKind::kKlSum,
                      rankers::RankerKind::kLsa, rankers::RankerKind::kTextRank,
                      rankers::RankerKind::kLexRank, rankers::RankerKind::kOracle,
                      rankers::RankerKind::kModel}) {
      if (kind == rankers::RankerKind::kModel && preds.empty()) continue;
      rankers::RankerConfig config;
      config.kind = kind;
      config.seed = static_cast<uint64_t>(trial);
      auto items = rankers::Rank(cands, config, inputs).items;
      std::sort(items.begin(), items.end());
      if (items != cands.indices) ++bad_permutation;
    }
  }
  out.Require(bad_convergence == 0, "convergence");
  out.Require(bad_sum == 0, "scores sum to 1");
  out.Require(bad_permutation == 0, "permutation");
  out.detail << "cases=" << cases << " max_iterations=" << max_iterations
             << " max_delta=" << max_delta << " failures=" << bad_convergence << "/"
             << bad_sum << "/" << bad_permutation;
}

int RunCli(const fs::path& cwd, const std::string& args) {
  const std::string command = "cd '" + cwd.string() + "' && '" +
                              std::string(CLAUSESUM_CLI_PATH) + "' " + args +
                              " > /dev/null 2>> cli.log";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().filename() == "cli.log") continue;
    files[fs::relative(entry.path(), root).string()] = io::ReadFile(entry.path());
  }
  return files;
}

void Determinism(Outcome& out) {
  testing::TempDir dir;
  const std::string data = testing::DataDir().string();
  const std::vector<std::string> steps = {
      "ingest " + data + "/sample --config " + data + "/corpus_config.json --out sent",
      "categorize --sentences sent --out labels.jsonl",
      "gen-tuples --sentences sent --seed 11 --out tuples.jsonl",
      "simulate --tuples tuples.jsonl --seed 11 --mode random --out log.jsonl",
      "aggregate --log log.jsonl --tuples tuples.jsonl --seed 11 --out agg",
      "summarize --sentences sent --ranker random --seed 11 --cr 0.3 --out pred",
      "summarize --sentences sent --ranker textrank --cr 0.3 --out pred_textrank",
      "reference --sentences sent --gold-labels labels.jsonl "
      "--gold-scores agg/scores.json --cr 0.3 --out ref",
      "eval --pred pred --ref ref --out report"};
  std::vector<std::map<std::string, std::string>> runs;
  for (const std::string run : {"run1", "run2"}) {
    const fs::path cwd = dir.path() / run;
    fs::create_directories(cwd);
    for (const auto& step : steps) {
      if (RunCli(cwd, step) != 0) {
        out.Require(false, run + ": " + step.substr(0, step.find(' ')));
        out.detail << io::ReadFile(cwd / "cli.log");
        return;
      }
    }
    runs.push_back(ReadTree(cwd));
  }
  out.Require(runs[0] == runs[1], "byte-identical outputs");
  out.Require(runs[0].size() >= 10, "outputs present");
  out.detail << "files compared=" << runs[0].size();
}

// ---------------------------------------------------------------------------
// Service safety

std::vector<bws::Tuple4> ServiceTuples(int count) {
  std::vector<bws::Tuple4> tuples;
  for (int i = 0; i < count; ++i) {
    bws::Tuple4 t;
    t.tuple_id = "t" + std::to_string(i);
    t.contract_id = "c";
    t.party = "Tenant";
    t.members = {4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3};
    tuples.push_back(t);
  }
  return tuples;
}

// Annotates through HTTP until the service reports no work. Returns the
// number of accepted submissions.
int AnnotateUntilDone(int port, const std::string& who, int limit) {
  httplib::Client client("127.0.0.1", port);
  int done = 0;
  while (done < limit) {
    auto res = client.Get("/api/tasks/next?annotator=" + who);
    if (!res || res->status != 200) break;
    const Json task = Json::parse(res->body);
    const Json body = {{"tuple_id", task.at("tuple_id")},
                       {"annotator_id", who},
                       {"best", task.at("sentences")[0].at("index")},
                       {"worst", task.at("sentences")[3].at("index")}};
    auto post = client.Post("/api/annotations", body.dump(), "application/json");
    if (post && post->status == 200) ++done;
  }
  return done;
}

struct ChildServer {
  pid_t pid = -1;
  int port = -1;
};

ChildServer StartServer(const fs::path& tuples, const fs::path& log) {
  int fds[2];
  if (pipe(fds) != 0) return {};
  const pid_t pid = fork();
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    const int null_fd = open("/dev/null", O_WRONLY);
    if (null_fd >= 0) dup2(null_fd, STDERR_FILENO);
    execl(CLAUSESUM_CLI_PATH, CLAUSESUM_CLI_PATH, "serve", "--tuples",
          tuples.c_str(), "--log", log.c_str(), "--port", "0", nullptr);
    _exit(127);
  }
  close(fds[1]);
  std::string line;
  char c;
  while (read(fds[0], &c, 1) == 1 && c != '\n') line += c;
  close(fds[0]);
  ChildServer child;
  child.pid = pid;
  const auto colon = line.rfind(':');
  if (line.rfind("listening on", 0) == 0 && colon != std::string::npos) {
    child.port = std::atoi(line.c_str() + colon + 1);
  }
  return child;
}

void KillServer(const ChildServer& child, int signal) {
  if (child.pid <= 0) return;
  kill(child.pid, signal);
  waitpid(child.pid, nullptr, 0);
}

void ServiceSafety(Outcome& out) {
  testing::TempDir dir;
  const int count = 50;
  const auto tuples = ServiceTuples(count);

  // In-process: two concurrent HTTP annotators plus a watcher on the live
  // assignment table.
  {
    annotsvc::AnnotationService service(tuples, {}, dir.path() / "inproc.jsonl");
    annotsvc::HttpServer server(service);
    const int port = server.Bind("127.0.0.1", 0);
    out.Require(port > 0, "bind");
    if (port <= 0) return;
    std::thread serving([&] { server.Serve(); });
    std::atomic<bool> finished = false;
    int max_slots = 0;
    std::thread watcher([&] {
      while (!finished) {
        std::map<std::string, int> slots;
        for (const auto& a : service.Assignments()) {
          if (a.state != annotsvc::AssignmentState::kExpired) ++slots[a.tuple_id];
        }
        for (const auto& [id, n] : slots) max_slots = std::max(max_slots, n);
      }
    });
    int done_a = 0, done_b = 0;
    std::thread a([&] { done_a = AnnotateUntilDone(port, "ann-a", 1000); });
    std::thread b([&] { done_b = AnnotateUntilDone(port, "ann-b", 1000); });
    a.join();
    b.join();
    finished = true;
    watcher.join();
    server.Stop();
    serving.join();

    std::map<std::string, int> per_tuple;
    for (const auto& ann : bws::ReadAnnotations(service.ExportLog())) {
      ++per_tuple[ann.tuple_id];
    }
    int max_logged = 0;
    for (const auto& [id, n] : per_tuple) max_logged = std::max(max_logged, n);
    out.Require(max_slots <= 2 && max_logged <= 2, "no third slot");
    out.Require(done_a + done_b == 2 * count, "all slots filled");
    out.Require(service.GetProgress().fully_annotated == count, "fully annotated");
    out.detail << "submissions=" << done_a + done_b << " max_live_slots=" << max_slots
               << " max_logged=" << max_logged << " ";
  }

  // Out of process: annotate, SIGKILL, restart, compare progress.
  const fs::path tuples_path = dir.path() / "tuples.jsonl";
  const fs::path log_path = dir.path() / "served.jsonl";
  io::WriteFile(tuples_path, bws::ToTupleJsonLines(tuples));
  const auto first = StartServer(tuples_path, log_path);
  out.Require(first.port > 0, "server start");
  if (first.port <= 0) {
    KillServer(first, SIGKILL);
    return;
  }
  std::thread x([&] { AnnotateUntilDone(first.port, "ann-x", 30); });
  std::thread y([&] { AnnotateUntilDone(first.port, "ann-y", 17); });
  x.join();
  y.join();
  httplib::Client client("127.0.0.1", first.port);
  client.Get("/api/tasks/next?annotator=ann-z");  // lease lost on kill
  auto before = client.Get("/api/progress");
  KillServer(first, SIGKILL);

  const auto second = StartServer(tuples_path, log_path);
  out.Require(second.port > 0, "server restart");
  std::string after_body;
  if (second.port > 0) {
    auto after = httplib::Client("127.0.0.1", second.port).Get("/api/progress");
    if (after) after_body = after->body;
  }
  KillServer(second, SIGTERM);
  const bool same = before && !after_body.empty() &&
                    Json::parse(before->body) == Json::parse(after_body);
  out.Require(same, "progress identical after kill-restart");
  if (before) out.detail << "progress=" << before->body;
}

}  // namespace
}  // namespace clausesum

int main() {
  spdlog::set_level(spdlog::level::err);
  using clausesum::Outcome;
  const std::vector<std::pair<std::string, clausesum::Criterion>> criteria = {
      {"BT correctness", clausesum::BtCorrectness},
      {"BWS pipeline", clausesum::BwsPipeline},
      {"SHR behavior", clausesum::ShrBehavior},
      {"Metric oracle", clausesum::MetricOracle},
      {"Degenerate upper bound", clausesum::DegenerateUpperBound},
      {"Error propagation", clausesum::ErrorPropagation},
      {"Ranker sanity", clausesum::RankerSanity},
      {"Determinism", clausesum::Determinism},
      {"Service safety", clausesum::ServiceSafety},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      check(outcome);
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail << "[exception: " << e.what() << "]";
    }
    std::cout << (outcome.ok ? "PASS " : "FAIL ") << name << ": "
              << outcome.detail.str() << std::endl;
    failures += outcome.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
