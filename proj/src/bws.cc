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

#include "clausesum/bws.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>

#include "clausesum/error.h"
#include "clausesum/rng.h"
#include "spdlog/spdlog.h"

namespace clausesum::bws {
namespace {

using Members = std::array<int, 4>;

Members SortedKey(const Members& members) {
  Members key = members;
  std::sort(key.begin(), key.end());
  return key;
}

bool AllDistinct(const Members& members) {
  const Members key = SortedKey(members);
  return std::adjacent_find(key.begin(), key.end()) == key.end();
}

// Slot of a repeated member, or -1.
int RepeatedSlot(const Members& members) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      if (members[i] == members[j]) return i;
    }
  }
  return -1;
}

std::string TupleId(const std::string& contract_id, const std::string& party,
                    size_t k) {
  std::ostringstream id;
  if (!contract_id.empty()) id << contract_id << ':';
  if (!party.empty()) id << party << ':';
  id << 't' << std::setw(5) << std::setfill('0') << k;
  return id.str();
}

void Warn(std::vector<std::string>* warnings, std::string message) {
  spdlog::warn("{}", message);
  if (warnings != nullptr) warnings->push_back(std::move(message));
}

const Tuple4& LookupTuple(const TupleIndex& tuples, const std::string& id) {
  auto it = tuples.find(id);
  if (it == tuples.end()) {
    throw Error(ErrorCode::kMissingTuple, "unknown tuple '" + id + "'");
  }
  return it->second;
}

// Repairs tuples in place by swapping slots until every tuple has distinct
// members and a unique member set. Swaps never change occurrence counts. A
// swap is kept when it does not increase the number of defects (tuples with
// a repeated member, plus surplus copies of a member set), so the search can
// walk across plateaus instead of stalling on them.
void RepairTuples(std::vector<Members>& tuples, Rng& rng) {
  std::map<Members, int> key_count;
  int defects = 0;
  auto remove = [&](size_t t) {
    if (!AllDistinct(tuples[t])) return -1;
    return --key_count[SortedKey(tuples[t])] >= 1 ? -1 : 0;
  };
  auto add = [&](size_t t) {
    if (!AllDistinct(tuples[t])) return 1;
    return ++key_count[SortedKey(tuples[t])] >= 2 ? 1 : 0;
  };
  for (size_t t = 0; t < tuples.size(); ++t) defects += add(t);
  auto is_valid = [&](size_t t) {
    return AllDistinct(tuples[t]) && key_count[SortedKey(tuples[t])] == 1;
  };

  const size_t count = tuples.size();
  const size_t max_attempts = 2000 * count + 10000;
  size_t attempts = 0;
  std::vector<size_t> invalid;
  bool stale = true;
  while (defects > 0) {
    if (stale) {
      invalid.clear();
      for (size_t t = 0; t < count; ++t) {
        if (!is_valid(t)) invalid.push_back(t);
      }
      stale = false;
    }
    if (++attempts > max_attempts) {
      throw Error(ErrorCode::kInfeasibleDesign, "could not repair the tuple design");
    }
    const size_t t = invalid[rng.UniformInt(invalid.size())];
    int slot = RepeatedSlot(tuples[t]);
    if (slot < 0) slot = static_cast<int>(rng.UniformInt(4));
    const size_t other = rng.UniformInt(count);
    const int other_slot = static_cast<int>(rng.UniformInt(4));
    if (other == t || tuples[t][slot] == tuples[other][other_slot]) continue;

    int change = remove(t) + remove(other);
    std::swap(tuples[t][slot], tuples[other][other_slot]);
    change += add(t) + add(other);
    if (change <= 0) {
      defects += change;
      stale = true;
    } else {
      remove(t);
      remove(other);
      std::swap(tuples[t][slot], tuples[other][other_slot]);
      add(t);
      add(other);
    }
  }
}

}  // namespace

bool Tuple4::Contains(int index) const {
  return std::find(members.begin(), members.end(), index) != members.end();
}

TupleIndex IndexTuples(std::span<const Tuple4> tuples) {
  TupleIndex index;
  for (const auto& t : tuples) {
    if (!index.emplace(t.tuple_id, t).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate tuple id '" + t.tuple_id + "'");
    }
  }
  return index;
}

std::vector<Tuple4> GenerateTuples(std::span<const int> sentence_ids,
                                   const TupleDesignOptions& options,
                                   const std::string& contract_id,
                                   const std::string& party) {
  const size_t n = sentence_ids.size();
  if (n < 16) {
    throw Error(ErrorCode::kInfeasibleDesign,
                "need at least 16 sentences, got " + std::to_string(n));
  }
  if (!(options.factor > 0.0) || options.min_occurrences < 0 ||
      options.factor * 4.0 * static_cast<double>(n) <
          static_cast<double>(options.min_occurrences) * static_cast<double>(n)) {
    throw Error(ErrorCode::kInfeasibleDesign,
                "factor * 4 must be at least min_occurrences");
  }
  std::vector<int> ids(sentence_ids.begin(), sentence_ids.end());
  {
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate sentence ids");
    }
  }

  const auto count = static_cast<size_t>(
      std::ceil(options.factor * static_cast<double>(n) - 1e-9));
  const size_t slots = 4 * count;
  const size_t rounds = (slots + n - 1) / n;

  Rng rng(options.seed);
  std::vector<int> stream;
  stream.reserve(rounds * n);
  for (size_t r = 0; r < rounds; ++r) {
    rng.Shuffle(ids);
    stream.insert(stream.end(), ids.begin(), ids.end());
  }
  stream.resize(slots);

  std::vector<Members> members(count);
  for (size_t t = 0; t < count; ++t) {
    for (size_t k = 0; k < 4; ++k) members[t][k] = stream[4 * t + k];
  }
  RepairTuples(members, rng);

  std::vector<Tuple4> tuples;
  tuples.reserve(count);
  for (size_t t = 0; t < count; ++t) {
    tuples.push_back({TupleId(contract_id, party, t + 1), contract_id, party,
                      members[t]});
  }
  return tuples;
}

BwsAnnotation ValidateAnnotation(const Tuple4& tuple, int best, int worst,
                                 std::string annotator_id,
                                 std::string timestamp) {
  if (best == worst) {
    throw Error(ErrorCode::kInvalidPick, "best and worst are the same sentence");
  }
  if (!tuple.Contains(best) || !tuple.Contains(worst)) {
    throw Error(ErrorCode::kInvalidPick,
                "pick is not a member of tuple '" + tuple.tuple_id + "'");
  }
  return {tuple.tuple_id, std::move(annotator_id), best, worst,
          std::move(timestamp)};
}

std::vector<btrank::PairwiseComparison> TuplesToPairs(
    std::span<const BwsAnnotation> annotations, const TupleIndex& tuples) {
  std::vector<btrank::PairwiseComparison> pairs;
  pairs.reserve(annotations.size() * 5);
  for (const auto& a : annotations) {
    const Tuple4& tuple = LookupTuple(tuples, a.tuple_id);
    ValidateAnnotation(tuple, a.best, a.worst);
    for (int m : tuple.members) {
      if (m != a.best) pairs.push_back({a.best, m, 1.0});
    }
    for (int m : tuple.members) {
      if (m != a.best && m != a.worst) pairs.push_back({m, a.worst, 1.0});
    }
  }
  return pairs;
}

std::map<GroupKey, std::vector<btrank::PairwiseComparison>> PairsByGroup(
    std::span<const BwsAnnotation> annotations, const TupleIndex& tuples) {
  std::map<GroupKey, std::vector<btrank::PairwiseComparison>> groups;
  for (const auto& a : annotations) {
    const Tuple4& tuple = LookupTuple(tuples, a.tuple_id);
    auto pairs = TuplesToPairs(std::span(&a, 1), tuples);
    auto& group = groups[{tuple.contract_id, tuple.party}];
    group.insert(group.end(), pairs.begin(), pairs.end());
  }
  return groups;
}

btrank::ScoreTable CountingScores(std::span<const BwsAnnotation> annotations,
                                  std::span<const int> universe,
                                  const TupleIndex& tuples,
                                  std::vector<std::string>* warnings) {
  std::map<int, int> appearances, best, worst;
  for (const auto& a : annotations) {
    const Tuple4& tuple = LookupTuple(tuples, a.tuple_id);
    for (int m : tuple.members) ++appearances[m];
    ++best[a.best];
    ++worst[a.worst];
  }
  btrank::ScoreTable table;
  table.normalization = btrank::Normalization::kNone;
  for (int id : universe) {
    auto it = appearances.find(id);
    if (it == appearances.end()) {
      Warn(warnings, "sentence " + std::to_string(id) +
                         " appears in no annotated tuple; scoring it 0");
      table.scores[id] = 0.0;
      continue;
    }
    const double n = it->second;
    table.scores[id] = best[id] / n - worst[id] / n;
  }
  return table;
}

SplitHalfResult SplitHalfReliability(std::span<const BwsAnnotation> annotations,
                                     const TupleIndex& tuples, int repetitions,
                                     uint64_t seed,
                                     std::vector<std::string>* warnings) {
  if (repetitions <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be positive");
  }
  std::map<std::string, std::vector<BwsAnnotation>> by_tuple;
  for (const auto& a : annotations) {
    LookupTuple(tuples, a.tuple_id);
    by_tuple[a.tuple_id].push_back(a);
  }

  SplitHalfResult result;
  std::map<GroupKey, std::set<int>> group_items;
  std::vector<const std::vector<BwsAnnotation>*> eligible;
  for (const auto& [tuple_id, list] : by_tuple) {
    if (list.size() < 2) {
      ++result.tuples_excluded;
      continue;
    }
    eligible.push_back(&list);
    const Tuple4& tuple = tuples.at(tuple_id);
    group_items[{tuple.contract_id, tuple.party}].insert(tuple.members.begin(),
                                                         tuple.members.end());
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kInsufficientAnnotations,
                "no tuple has two or more annotations");
  }
  if (result.tuples_excluded > 0) {
    Warn(warnings, std::to_string(result.tuples_excluded) +
                       " tuple(s) with a single annotation excluded from "
                       "split-half reliability");
  }
  result.tuples_used = static_cast<int>(eligible.size());

  std::vector<double> correlations;
  for (int rep = 0; rep < repetitions; ++rep) {
    Rng rng(seed + static_cast<uint64_t>(rep));
    std::map<GroupKey, std::vector<BwsAnnotation>> bin_a, bin_b;
    for (const auto* list : eligible) {
      std::vector<BwsAnnotation> shuffled = *list;
      rng.Shuffle(shuffled);
      const Tuple4& tuple = tuples.at(shuffled.front().tuple_id);
      const GroupKey key{tuple.contract_id, tuple.party};
      const size_t half = (shuffled.size() + 1) / 2;
      for (size_t i = 0; i < shuffled.size(); ++i) {
        (i < half ? bin_a : bin_b)[key].push_back(shuffled[i]);
      }
    }
    std::vector<double> xs, ys;
    for (const auto& [key, items] : group_items) {
      const std::vector<int> universe(items.begin(), items.end());
      const auto a = CountingScores(bin_a[key], universe, tuples);
      const auto b = CountingScores(bin_b[key], universe, tuples);
      for (int id : universe) {
        xs.push_back(a.scores.at(id));
        ys.push_back(b.scores.at(id));
      }
    }
    try {
      correlations.push_back(btrank::Spearman(xs, ys));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedCorrelation) throw;
      Warn(warnings, "repetition " + std::to_string(rep) +
                         " skipped: " + e.what());
    }
  }
  if (correlations.empty()) {
    throw Error(ErrorCode::kUndefinedCorrelation,
                "split-half correlation undefined in every repetition");
  }
  const double n = static_cast<double>(correlations.size());
  double mean = 0.0;
  for (double c : correlations) mean += c;
  mean /= n;
  double var = 0.0;
  for (double c : correlations) var += (c - mean) * (c - mean);
  result.mean = mean;
  result.stddev = std::sqrt(var / n);
  result.repetitions = static_cast<int>(correlations.size());
  return result;
}

std::string UtcNowIso8601() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Json TupleRecord(const Tuple4& tuple) {
  return {{"tuple_id", tuple.tuple_id},
          {"contract_id", tuple.contract_id},
          {"party", tuple.party},
          {"members", tuple.members}};
}

Tuple4 TupleFromJson(const Json& json) {
  Tuple4 tuple;
  tuple.tuple_id = json.at("tuple_id").get<std::string>();
  tuple.contract_id = json.at("contract_id").get<std::string>();
  tuple.party = json.at("party").get<std::string>();
  const auto members = json.at("members").get<std::vector<int>>();
  if (members.size() != 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "tuple '" + tuple.tuple_id + "' must have 4 members");
  }
  std::copy(members.begin(), members.end(), tuple.members.begin());
  if (!AllDistinct(tuple.members)) {
    throw Error(ErrorCode::kInvalidArgument,
                "tuple '" + tuple.tuple_id + "' has repeated members");
  }
  return tuple;
}

std::string ToTupleJsonLines(std::span<const Tuple4> tuples) {
  std::vector<Json> records;
  records.reserve(tuples.size());
  for (const auto& t : tuples) records.push_back(TupleRecord(t));
  return io::ToJsonLines(records);
}

std::vector<Tuple4> ReadTuples(const std::filesystem::path& path) {
  std::vector<Tuple4> tuples;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kInvalidArgument)) {
    try {
      tuples.push_back(TupleFromJson(record));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  return tuples;
}

Json AnnotationRecord(const BwsAnnotation& annotation) {
  return {{"tuple_id", annotation.tuple_id},
          {"annotator_id", annotation.annotator_id},
          {"best", annotation.best},
          {"worst", annotation.worst},
          {"timestamp", annotation.timestamp}};
}

BwsAnnotation AnnotationFromJson(const Json& json) {
  BwsAnnotation annotation;
  annotation.tuple_id = json.at("tuple_id").get<std::string>();
  annotation.annotator_id = json.at("annotator_id").get<std::string>();
  annotation.best = json.at("best").get<int>();
  annotation.worst = json.at("worst").get<int>();
  annotation.timestamp = json.value("timestamp", "");
  return annotation;
}

std::vector<BwsAnnotation> ReadAnnotations(const std::filesystem::path& path) {
  std::vector<BwsAnnotation> annotations;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kInvalidArgument)) {
    try {
      annotations.push_back(AnnotationFromJson(record));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  return annotations;
}

}  // namespace clausesum::bws
