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


#include "clausesum/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "clausesum/error.h"
#include "spdlog/spdlog.h"

namespace clausesum::pipeline {
namespace {

std::string FormatValue(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

double Mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string SectionTitle(Category category) {
  switch (category) {
    case Category::kObligation: return "Obligations";
    case Category::kEntitlement: return "Entitlements";
    case Category::kProhibition: return "Prohibitions";
  }
  return "";
}

void CheckDistinct(std::span<const int> ids, const char* what) {
  std::vector<int> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidRanking,
                std::string("duplicate ids in the ") + what + " ranking");
  }
}

}  // namespace

Budget BudgetPerCategory(double cr, const std::map<Category, int>& counts,
                         int n_total, int cap) {
  if (n_total <= 0) {
    throw Error(ErrorCode::kEmptyContract, "no kept sentences to summarize");
  }
  if (!(cr > 0.0 && cr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "compression ratio must be in (0, 1]");
  }
  if (cap < 0) throw Error(ErrorCode::kInvalidArgument, "negative cap");

  Budget budget;
  std::map<Category, long long> limit;
  for (Category c : categorize::kAllCategories) {
    auto it = counts.find(c);
    const int count = it == counts.end() ? 0 : it->second;
    if (count < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative category count");
    }
    budget[c] = 0;
    limit[c] = std::min(cap, count);
  }

  long long remaining = std::llround(cr * n_total);
  std::set<Category> pinned;
  while (remaining > 0) {
    std::vector<Category> active;
    long long total = 0;
    for (Category c : categorize::kAllCategories) {
      const int count = counts.contains(c) ? counts.at(c) : 0;
      if (count > 0 && !pinned.contains(c)) {
        active.push_back(c);
        total += count;
      }
    }
    if (active.empty()) break;

    std::map<Category, long long> share;
    std::vector<std::pair<long long, Category>> remainders;
    long long assigned = 0;
    for (Category c : active) {
      const long long scaled = remaining * counts.at(c);
      share[c] = scaled / total;
      assigned += share[c];
      remainders.push_back({scaled % total, c});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t i = 0; assigned < remaining && i < remainders.size(); ++i) {
      ++share[remainders[i].second];
      ++assigned;
    }

    bool any_pinned = false;
    for (Category c : active) {
      if (share[c] >= limit[c]) {
        budget[c] = static_cast<int>(limit[c]);
        remaining -= limit[c];
        pinned.insert(c);
        any_pinned = true;
      }
    }
    if (!any_pinned) {
      for (Category c : active) budget[c] = static_cast<int>(share[c]);
      break;
    }
  }
  return budget;
}

std::vector<int> SummarySection::Indices() const {
  std::vector<int> indices;
  indices.reserve(selected.size());
  for (const auto& item : selected) indices.push_back(item.index);
  return indices;
}

Summary BuildSummary(const corpus::Contract& contract, const std::string& party,
                     const std::vector<categorize::CategoryPrediction>& predictions,
                     const SummaryOptions& options,
                     const rankers::RankerInputs& inputs,
                     std::vector<std::string>* warnings) {
  const corpus::PartyRef* party_ref = contract.FindParty(party);
  if (party_ref == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown party '" + party + "' for " + contract.id);
  }
  const categorize::Clusters clusters =
      categorize::ClusterByCategory(contract, *party_ref, predictions);
  std::map<Category, int> counts;
  for (const auto& [category, members] : clusters) {
    counts[category] = static_cast<int>(members.size());
  }
  const Budget budget =
      BudgetPerCategory(options.cr, counts, contract.KeptCount(), options.cap);

  Summary summary;
  summary.contract_id = contract.id;
  summary.party = party;
  summary.ranker = std::string(rankers::RankerName(options.ranker.kind));
  summary.compression_ratio = options.cr;
  summary.cap = options.cap;
  summary.total_kept = contract.KeptCount();
  for (Category category : categorize::kAllCategories) {
    SummarySection& section = summary.sections[category];
    const auto& members = clusters.at(category);
    section.candidates = static_cast<int>(members.size());
    section.budget = budget.at(category);
    if (members.empty() || section.budget == 0) continue;

    const auto candidates =
        rankers::CandidateSet::FromContract(contract, party, category, members);
    rankers::RankerConfig config = options.ranker;
    config.seed += static_cast<uint64_t>(category);
    const auto ranked = rankers::Rank(candidates, config, inputs, warnings);
    const size_t take = std::min<size_t>(section.budget, ranked.items.size());
    for (size_t i = 0; i < take; ++i) {
      const int index = ranked.items[i];
      section.selected.push_back(
          {index, contract.sentences[index].text, ranked.scores[i]});
    }
  }
  return summary;
}

Summary BuildReference(const corpus::Contract& contract, const std::string& party,
                       const std::vector<categorize::CategoryPrediction>& gold_labels,
                       const btrank::ScoreTable& gold_scores, double cr,
                       int cap) {
  const bool has_labels =
      std::any_of(gold_labels.begin(), gold_labels.end(), [&](const auto& p) {
        return p.contract_id == contract.id && p.party == party;
      });
  if (!has_labels) {
    throw Error(ErrorCode::kMissingGold,
                "no gold labels for " + contract.id + "/" + party);
  }
  if (gold_scores.scores.empty()) {
    throw Error(ErrorCode::kMissingGold,
                "no gold scores for " + contract.id + "/" + party);
  }
  SummaryOptions options;
  options.cr = cr;
  options.cap = cap;
  options.ranker.kind = rankers::RankerKind::kOracle;
  rankers::RankerInputs inputs;
  inputs.gold = &gold_scores;
  return BuildSummary(contract, party, gold_labels, options, inputs);
}

Json SummaryToJson(const Summary& summary) {
  Json sections = Json::object();
  for (const auto& [category, section] : summary.sections) {
    Json selected = Json::array();
    for (const auto& item : section.selected) {
      selected.push_back(
          {{"index", item.index}, {"text", item.text}, {"score", item.score}});
    }
    sections[std::string(categorize::CategoryName(category))] = {
        {"candidates", section.candidates},
        {"budget", section.budget},
        {"selected", selected}};
  }
  return {{"contract_id", summary.contract_id},
          {"party", summary.party},
          {"ranker", summary.ranker},
          {"compression_ratio", summary.compression_ratio},
          {"cap", summary.cap},
          {"total_kept", summary.total_kept},
          {"sections", sections}};
}

Summary SummaryFromJson(const Json& json) {
  Summary summary;
  try {
    summary.contract_id = json.at("contract_id").get<std::string>();
    summary.party = json.at("party").get<std::string>();
    summary.ranker = json.value("ranker", "");
    summary.compression_ratio = json.value("compression_ratio", 0.0);
    summary.cap = json.value("cap", 10);
    summary.total_kept = json.value("total_kept", 0);
    for (Category c : categorize::kAllCategories) summary.sections[c];
    for (const auto& [name, body] : json.at("sections").items()) {
      auto category = categorize::ParseCategory(name);
      if (!category) {
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown summary section '" + name + "'");
      }
      SummarySection& section = summary.sections[*category];
      section.candidates = body.value("candidates", 0);
      section.budget = body.value("budget", 0);
      for (const auto& item : body.at("selected")) {
        section.selected.push_back({item.at("index").get<int>(),
                                    item.value("text", ""),
                                    item.value("score", 0.0)});
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad summary: ") + e.what());
  }
  return summary;
}

std::string RenderSummary(const Summary& summary) {
  std::ostringstream out;
  out << "Summary of " << summary.contract_id << " for " << summary.party
      << " (ranker " << summary.ranker << ", CR " << summary.compression_ratio
      << ", " << summary.total_kept << " kept sentences)\n";
  for (Category category : categorize::kAllCategories) {
    auto it = summary.sections.find(category);
    if (it == summary.sections.end()) continue;
    const SummarySection& section = it->second;
    out << "\n" << SectionTitle(category) << " (" << section.selected.size()
        << " of " << section.candidates << ")\n";
    if (section.selected.empty()) out << "  (none)\n";
    for (size_t i = 0; i < section.selected.size(); ++i) {
      out << "  " << i + 1 << ". [" << section.selected[i].index << "] "
          << section.selected[i].text << "\n";
    }
  }
  return out.str();
}

std::vector<std::string> MetricRow::MetricNames() const {
  std::vector<std::string> names;
  for (const auto& [k, v] : p_at_k) {
    names.push_back("P@" + std::to_string(k));
    names.push_back("R@" + std::to_string(k));
    names.push_back("F1@" + std::to_string(k));
  }
  names.push_back("MAP");
  names.push_back("NDCG");
  return names;
}

std::vector<double> MetricRow::MetricValues() const {
  std::vector<double> values;
  for (const auto& [k, v] : p_at_k) {
    values.push_back(v);
    values.push_back(r_at_k.at(k));
    values.push_back(f1_at_k.at(k));
  }
  values.push_back(map);
  values.push_back(ndcg);
  return values;
}

std::optional<MetricRow> RankingMetrics(std::span<const int> predicted,
                                        std::span<const int> reference,
                                        std::span<const int> ks, int n,
                                        std::vector<std::string>* warnings) {
  CheckDistinct(predicted, "predicted");
  CheckDistinct(reference, "reference");
  if (reference.empty()) {
    std::string message = "empty reference; metric row skipped";
    spdlog::warn("{}", message);
    if (warnings != nullptr) warnings->push_back(std::move(message));
    return std::nullopt;
  }
  const std::set<int> relevant(reference.begin(), reference.end());
  const double ref_size = static_cast<double>(relevant.size());
  std::vector<int> hits_at(predicted.size() + 1, 0);
  for (size_t i = 0; i < predicted.size(); ++i) {
    hits_at[i + 1] = hits_at[i] + (relevant.contains(predicted[i]) ? 1 : 0);
  }

  auto precision = [&](size_t k) {
    return k == 0 ? 0.0 : hits_at[k] / static_cast<double>(k);
  };
  auto recall = [&](size_t k) { return hits_at[k] / ref_size; };

  MetricRow row;
  for (int k : ks) {
    const size_t kk = std::min<size_t>(std::max(k, 0), predicted.size());
    const double p = precision(kk);
    const double r = recall(kk);
    row.p_at_k[k] = p;
    row.r_at_k[k] = r;
    row.f1_at_k[k] = (p > 0.0 && r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
  }
  // R@k - R@(k-1) is 1/|reference| at a hit and 0 elsewhere; dividing once
  // keeps a perfect ranking at exactly 1.
  double precision_at_hits = 0.0;
  for (size_t k = 1; k <= predicted.size(); ++k) {
    if (hits_at[k] > hits_at[k - 1]) precision_at_hits += precision(k);
  }
  row.map = precision_at_hits / ref_size;
  double dcg = 0.0;
  const size_t depth = std::min<size_t>(std::max(n, 0), predicted.size());
  for (size_t i = 1; i <= depth; ++i) {
    if (relevant.contains(predicted[i - 1])) dcg += 1.0 / std::log2(i + 1.0);
  }
  double idcg = 0.0;
  const size_t ideal = std::min<size_t>(std::max(n, 0), relevant.size());
  for (size_t i = 1; i <= ideal; ++i) idcg += 1.0 / std::log2(i + 1.0);
  row.ndcg = idcg > 0.0 ? dcg / idcg : 0.0;
  return row;
}

Report AggregateReport(std::vector<MetricRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyReport, "no metric rows");
  Report report;
  report.metric_names = rows.front().MetricNames();
  const size_t m = report.metric_names.size();

  // contract -> party -> per-category value vectors
  std::map<std::string, std::map<std::string, std::vector<std::vector<double>>>>
      nested;
  for (const auto& row : rows) {
    auto values = row.MetricValues();
    if (values.size() != m) {
      throw Error(ErrorCode::kInvalidArgument, "metric rows use different k sets");
    }
    nested[row.contract_id][row.party].push_back(std::move(values));
  }
  std::vector<std::vector<double>> per_contract(m);
  for (const auto& [contract, parties] : nested) {
    std::vector<std::vector<double>> per_party(m);
    for (const auto& [party, categories] : parties) {
      for (size_t j = 0; j < m; ++j) {
        std::vector<double> column;
        for (const auto& values : categories) column.push_back(values[j]);
        per_party[j].push_back(Mean(column));
      }
    }
    for (size_t j = 0; j < m; ++j) {
      const double mean = Mean(per_party[j]);
      report.contract_averages[contract][report.metric_names[j]] = mean;
      per_contract[j].push_back(mean);
    }
  }
  for (size_t j = 0; j < m; ++j) {
    report.averages[report.metric_names[j]] = Mean(per_contract[j]);
  }
  report.rows = std::move(rows);
  return report;
}

std::vector<MetricRow> EvaluateSummary(const Summary& predicted,
                                       const Summary& reference,
                                       std::vector<std::string>* warnings) {
  if (predicted.contract_id != reference.contract_id ||
      predicted.party != reference.party) {
    throw Error(ErrorCode::kInvalidArgument,
                "summary for " + predicted.contract_id + "/" + predicted.party +
                    " compared with reference for " + reference.contract_id +
                    "/" + reference.party);
  }
  std::vector<MetricRow> rows;
  for (Category category : categorize::kAllCategories) {
    auto ref_it = reference.sections.find(category);
    if (ref_it == reference.sections.end() || ref_it->second.selected.empty()) {
      continue;
    }
    std::vector<int> pred_ids;
    auto pred_it = predicted.sections.find(category);
    if (pred_it != predicted.sections.end()) pred_ids = pred_it->second.Indices();
    const auto ref_ids = ref_it->second.Indices();
    auto row = RankingMetrics(pred_ids, ref_ids, kDefaultKs, 10, warnings);
    if (!row) continue;
    row->contract_id = predicted.contract_id;
    row->party = predicted.party;
    row->category = std::string(categorize::CategoryName(category));
    rows.push_back(std::move(*row));
  }
  return rows;
}

std::string ReportToCsv(const Report& report) {
  std::ostringstream out;
  out << "contract_id,party,category";
  for (const auto& name : report.metric_names) out << ',' << name;
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.contract_id << ',' << row.party << ',' << row.category;
    for (double v : row.MetricValues()) out << ',' << FormatValue(v);
    out << '\n';
  }
  out << "AVERAGE,,";
  for (const auto& name : report.metric_names) {
    out << ',' << FormatValue(report.averages.at(name));
  }
  out << '\n';
  return out.str();
}

Json ReportToJson(const Report& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json values = Json::object();
    const auto names = row.MetricNames();
    const auto metric_values = row.MetricValues();
    for (size_t j = 0; j < names.size(); ++j) values[names[j]] = metric_values[j];
    rows.push_back({{"contract_id", row.contract_id},
                    {"party", row.party},
                    {"category", row.category},
                    {"metrics", values}});
  }
  return {{"rows", rows},
          {"averages", report.averages},
          {"contract_averages", report.contract_averages}};
}

}  // namespace clausesum::pipeline
