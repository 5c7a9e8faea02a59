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

#include "clausesum/btrank.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "clausesum/error.h"

namespace clausesum::btrank {
namespace {

struct Edge {
  int other;
  double games;  // total comparison weight between the two endpoints
};

double Sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(exp(a) + exp(b))
double LogAddExp(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double LogSumExp(const std::vector<double>& values) {
  const double hi = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

double ScoreOf(const ScoreTable& table, ItemId id) {
  auto it = table.scores.find(id);
  if (it == table.scores.end()) {
    throw Error(ErrorCode::kUnknownItem, "item " + std::to_string(id));
  }
  return it->second;
}

}  // namespace

std::string_view NormalizationName(Normalization normalization) {
  switch (normalization) {
    case Normalization::kSumToOne: return "sum_to_one";
    case Normalization::kLogCentered: return "log_centered";
    case Normalization::kNone: return "none";
  }
  return "";
}

Normalization ParseNormalization(std::string_view name) {
  if (name == "sum_to_one") return Normalization::kSumToOne;
  if (name == "log_centered") return Normalization::kLogCentered;
  if (name == "none") return Normalization::kNone;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown normalization '" + std::string(name) + "'");
}

ScoreTable FitBradleyTerry(std::span<const PairwiseComparison> comparisons,
                           const FitOptions& options, int* iterations) {
  if (comparisons.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no comparisons to fit");
  }
  if (!(options.pseudo >= 0.0) || !(options.tol > 0.0) || options.max_iter <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad fit options");
  }

  std::vector<ItemId> ids;
  ids.reserve(comparisons.size() * 2);
  for (const auto& c : comparisons) {
    if (c.winner == c.loser) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item " + std::to_string(c.winner) + " compared with itself");
    }
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "comparison weight must be > 0");
    }
    ids.push_back(c.winner);
    ids.push_back(c.loser);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto slot = [&ids](ItemId id) {
    return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) -
                            ids.begin());
  };

  const int n = static_cast<int>(ids.size());
  const bool use_anchor = options.pseudo > 0.0;
  const int total = n + (use_anchor ? 1 : 0);

  std::vector<double> wins(total, 0.0);
  std::map<std::pair<int, int>, double> games;
  for (const auto& c : comparisons) {
    const int w = slot(c.winner);
    const int l = slot(c.loser);
    wins[w] += c.weight;
    games[{std::min(w, l), std::max(w, l)}] += c.weight;
  }
  std::vector<std::vector<Edge>> adjacency(total);
  for (const auto& [pair, weight] : games) {
    adjacency[pair.first].push_back({pair.second, weight});
    adjacency[pair.second].push_back({pair.first, weight});
  }
  if (use_anchor) {
    const int anchor = n;
    for (int i = 0; i < n; ++i) {
      adjacency[i].push_back({anchor, options.pseudo});
      adjacency[anchor].push_back({i, options.pseudo});
      wins[i] += options.pseudo / 2.0;
      wins[anchor] += options.pseudo / 2.0;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (wins[i] <= 0.0) {
      throw ConvergenceError("item " + std::to_string(ids[i]) +
                                 " has no wins; the MLE does not exist "
                                 "without a pseudo-count",
                             std::vector<double>(n, 1.0 / n));
    }
  }

  // Strengths are handled as logs b_i = log s_i. In these coordinates the
  // likelihood is concave and every quantity below stays finite however far
  // apart the strengths are.
  auto log_likelihood = [&](const std::vector<double>& b) {
    double ll = 0.0;
    for (int i = 0; i < total; ++i) {
      ll += wins[i] * b[i];
      for (const auto& edge : adjacency[i]) {
        if (edge.other > i) ll -= edge.games * LogAddExp(b[i], b[edge.other]);
      }
    }
    return ll;
  };
  // Change of log strength made by one MM update at b, before normalization.
  auto mm_change = [&](const std::vector<double>& b) {
    std::vector<double> change(total);
    for (int i = 0; i < total; ++i) {
      double expected = 0.0;
      for (const auto& edge : adjacency[i]) {
        expected += edge.games * Sigmoid(b[i] - b[edge.other]);
      }
      change[i] = std::log(wins[i]) - std::log(expected);
    }
    return change;
  };
  // max |delta log s| of the MM update, both sides normalized to sum to one.
  auto mm_delta = [&](const std::vector<double>& b,
                      const std::vector<double>& change) {
    std::vector<double> next(total);
    for (int i = 0; i < total; ++i) next[i] = b[i] + change[i];
    const double shift = LogSumExp(next) - LogSumExp(b);
    double d = 0.0;
    for (int i = 0; i < total; ++i) d = std::max(d, std::abs(change[i] - shift));
    return d;
  };

  // The last coordinate (the anchor when there is one) is held at zero to fix
  // the scale. Each iteration takes a Newton step on the remaining ones with
  // backtracking, or the MM update itself when the Newton system is singular
  // or the step fails to ascend. Convergence is judged on the MM update.
  const int free_count = total - 1;
  std::vector<double> b(total, 0.0);
  double ll = log_likelihood(b);
  double delta = 0.0;
  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= options.max_iter; ++iter) {
    const std::vector<double> change = mm_change(b);
    delta = mm_delta(b, change);
    if (!std::isfinite(delta)) break;
    if (delta < options.tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd gradient(free_count);
    std::vector<Eigen::Triplet<double>> entries;
    for (int i = 0; i < free_count; ++i) {
      double g = wins[i];
      double diagonal = 0.0;
      for (const auto& edge : adjacency[i]) {
        const double p = Sigmoid(b[i] - b[edge.other]);
        const double curvature = edge.games * p * (1.0 - p);
        g -= edge.games * p;
        diagonal += curvature;
        if (edge.other < free_count) entries.emplace_back(i, edge.other, -curvature);
      }
      gradient(i) = g;
      entries.emplace_back(i, i, diagonal);
    }
    Eigen::SparseMatrix<double> information(free_count, free_count);
    information.setFromTriplets(entries.begin(), entries.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(information);

    bool stepped = false;
    if (solver.info() == Eigen::Success) {
      const Eigen::VectorXd direction = solver.solve(gradient);
      const double slope = gradient.dot(direction);
      // Close to the optimum the expected gain drops below the rounding
      // error of the likelihood sum, which must not veto the step.
      const double noise = 1e-11 * (1.0 + std::abs(ll));
      if (direction.allFinite() && slope > 0.0) {
        for (double t = 1.0; t > 1e-10; t *= 0.5) {
          std::vector<double> trial = b;
          for (int i = 0; i < free_count; ++i) trial[i] += t * direction(i);
          const double trial_ll = log_likelihood(trial);
          if (std::isfinite(trial_ll) && trial_ll >= ll + 1e-4 * t * slope - noise) {
            b = std::move(trial);
            ll = trial_ll;
            stepped = true;
            break;
          }
        }
      }
    }
    if (!stepped) {
      for (int i = 0; i < total; ++i) b[i] += change[i];
      const double reference = b[total - 1];
      for (double& x : b) x -= reference;
      ll = log_likelihood(b);
    }
  }
  if (iterations != nullptr) *iterations = std::min(iter, options.max_iter);

  b.resize(n);
  const double norm = LogSumExp(b);
  std::vector<double> strength(n);
  for (int i = 0; i < n; ++i) strength[i] = std::exp(b[i] - norm);
  if (!converged) {
    throw ConvergenceError("no convergence after " +
                               std::to_string(options.max_iter) +
                               " iterations (max |delta log s| = " +
                               std::to_string(delta) + ")",
                           std::move(strength));
  }

  ScoreTable table;
  table.normalization = Normalization::kSumToOne;
  for (int i = 0; i < n; ++i) table.scores[ids[i]] = strength[i];
  return table;
}

double LogLikelihood(std::span<const PairwiseComparison> comparisons,
                     const ScoreTable& table) {
  double total = 0.0;
  for (const auto& c : comparisons) {
    const double w = ScoreOf(table, c.winner);
    const double l = ScoreOf(table, c.loser);
    total += c.weight * std::log(w / (w + l));
  }
  return total;
}

ScoreTable ToLogCentered(const ScoreTable& table) {
  ScoreTable out;
  out.normalization = Normalization::kLogCentered;
  if (table.scores.empty()) return out;
  double mean = 0.0;
  for (const auto& [id, s] : table.scores) {
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "log of non-positive score");
    }
    mean += std::log(s);
  }
  mean /= static_cast<double>(table.scores.size());
  for (const auto& [id, s] : table.scores) out.scores[id] = std::log(s) - mean;
  return out;
}

RankedList RankFromScores(const ScoreTable& table) {
  std::vector<std::pair<ItemId, double>> entries(table.scores.begin(),
                                                 table.scores.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  RankedList ranked;
  ranked.items.reserve(entries.size());
  ranked.scores.reserve(entries.size());
  for (const auto& [id, score] : entries) {
    ranked.items.push_back(id);
    ranked.scores.push_back(score);
  }
  return ranked;
}

DerivedPairs DeriveAllPairs(const ScoreTable& table) {
  if (table.scores.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "need at least two items");
  }
  DerivedPairs derived;
  const size_t n = table.scores.size();
  derived.pairs.reserve(n * (n - 1) / 2);
  for (auto a = table.scores.begin(); a != table.scores.end(); ++a) {
    for (auto b = std::next(a); b != table.scores.end(); ++b) {
      // a->first < b->first, so the lower id wins exact ties.
      if (a->second >= b->second) {
        derived.pairs.push_back({a->first, b->first, 1.0});
        if (a->second == b->second) derived.ties.emplace_back(a->first, b->first);
      } else {
        derived.pairs.push_back({b->first, a->first, 1.0});
      }
    }
  }
  return derived;
}

double PairProbability(const ScoreTable& table, ItemId a, ItemId b) {
  if (a == b) {
    throw Error(ErrorCode::kInvalidArgument, "pair probability of an item with itself");
  }
  const double sa = ScoreOf(table, a);
  const double sb = ScoreOf(table, b);
  return sa / (sa + sb);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kUndefinedCorrelation, "length mismatch");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kUndefinedCorrelation, "need at least two values");
  }
  const auto rx = AverageRanks(xs);
  const auto ry = AverageRanks(ys);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kUndefinedCorrelation, "zero rank variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Json ComparisonRecord(const PairwiseComparison& comparison) {
  return {{"winner", comparison.winner},
          {"loser", comparison.loser},
          {"weight", comparison.weight}};
}

std::string ToComparisonJsonLines(std::span<const PairwiseComparison> comparisons) {
  std::vector<Json> records;
  records.reserve(comparisons.size());
  for (const auto& c : comparisons) records.push_back(ComparisonRecord(c));
  return io::ToJsonLines(records);
}

std::vector<PairwiseComparison> ReadComparisons(const std::filesystem::path& path) {
  std::vector<PairwiseComparison> comparisons;
  for (const auto& [line_number, record] :
       io::ReadJsonLines(path, ErrorCode::kInvalidArgument)) {
    try {
      PairwiseComparison c;
      c.winner = record.at("winner").get<ItemId>();
      c.loser = record.at("loser").get<ItemId>();
      c.weight = record.value("weight", 1.0);
      if (c.winner == c.loser || !(c.weight > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    path.string() + ":" + std::to_string(line_number) +
                        ": invalid comparison");
      }
      comparisons.push_back(c);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  return comparisons;
}

Json ScoreTableToJson(const ScoreTable& table) {
  Json scores = Json::object();
  for (const auto& [id, score] : table.scores) scores[std::to_string(id)] = score;
  return {{"normalization", std::string(NormalizationName(table.normalization))},
          {"scores", scores}};
}

ScoreTable ScoreTableFromJson(const Json& json) {
  ScoreTable table;
  try {
    table.normalization =
        ParseNormalization(json.at("normalization").get<std::string>());
    for (const auto& [key, value] : json.at("scores").items()) {
      table.scores[std::stoi(key)] = value.get<double>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad score table: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad score table key: ") + e.what());
  }
  return table;
}

}  // namespace clausesum::btrank
