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


// clausesum: contract summarization workflows from the command line.
//
// Every flag with an environment override reads CLAUSESUM_<NAME> (for example
// CLAUSESUM_SEED or CLAUSESUM_RANKER) when it is not given explicitly.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "clausesum/commands.h"
#include "clausesum/error.h"
#include "clausesum/rankers.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

namespace cmd = clausesum::commands;

constexpr char kEnvPrefix[] = "CLAUSESUM_";

std::string Env(const std::string& name) { return kEnvPrefix + name; }

CLI::Option* AddSeed(CLI::App* app, uint64_t* seed, bool required) {
  auto* opt = app->add_option("--seed", *seed, "Random seed")->envname(Env("SEED"));
  if (required) opt->required();
  return opt;
}

void AddCorpusConfig(CLI::App* app, std::filesystem::path* path) {
  app->add_option("--config", *path, "Corpus config JSON (default: built-in)")
      ->envname(Env("CORPUS_CONFIG"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Party-specific contract summarization toolkit"};
  app.require_subcommand(1);
  app.set_config("--run-config", "", "TOML file with option defaults");
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
      ->envname(Env("LOG_LEVEL"));

  cmd::IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Segment and filter raw contracts");
  ingest_cmd->add_option("input", ingest.input, "Contract .txt file or directory")
      ->required();
  AddCorpusConfig(ingest_cmd, &ingest.config);
  ingest_cmd->add_option("--out", ingest.out, "Output directory")
      ->envname(Env("OUT"))
      ->required();

  cmd::CategorizeOptions categorize;
  auto* categorize_cmd =
      app.add_subcommand("categorize", "Label sentences with the rule baseline");
  categorize_cmd->add_option("--sentences", categorize.sentences)->required();
  AddCorpusConfig(categorize_cmd, &categorize.config);
  categorize_cmd->add_option("--lexicon", categorize.lexicon, "Trigger lexicon JSON");
  categorize_cmd->add_option("--out", categorize.out, "Prediction JSON Lines file")
      ->envname(Env("OUT"))
      ->required();

  cmd::GenTuplesOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-tuples", "Generate best-worst 4-tuples");
  gen_cmd->add_option("--sentences", gen.sentences)->required();
  AddCorpusConfig(gen_cmd, &gen.config);
  gen_cmd->add_option("--factor", gen.factor, "Tuples per sentence")
      ->capture_default_str();
  gen_cmd->add_option("--min-occ", gen.min_occurrences, "Minimum occurrences")
      ->capture_default_str();
  AddSeed(gen_cmd, &gen.seed, true);
  gen_cmd->add_option("--out", gen.out, "Tuple JSON Lines file")
      ->envname(Env("OUT"))
      ->required();

  cmd::SimulateOptions simulate;
  std::string simulate_mode = "consistent";
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Write a synthetic annotation log");
  simulate_cmd->add_option("--tuples", simulate.tuples)->required();
  simulate_cmd->add_option("--annotators", simulate.annotators)->capture_default_str();
  simulate_cmd->add_option("--mode", simulate_mode, "consistent|random")
      ->check(CLI::IsMember({"consistent", "random"}))
      ->capture_default_str();
  simulate_cmd->add_option("--noise", simulate.noise, "Random-pick probability")
      ->capture_default_str();
  AddSeed(simulate_cmd, &simulate.seed, true);
  simulate_cmd->add_option("--out", simulate.out, "Annotation log")
      ->envname(Env("OUT"))
      ->required();

  cmd::AggregateOptions aggregate;
  auto* aggregate_cmd = app.add_subcommand(
      "aggregate", "Fit Bradley-Terry scores and split-half reliability");
  aggregate_cmd->add_option("--log", aggregate.log)->required();
  aggregate_cmd->add_option("--tuples", aggregate.tuples)->required();
  aggregate_cmd->add_option("--repetitions", aggregate.repetitions)
      ->capture_default_str();
  aggregate_cmd->add_option("--pseudo", aggregate.pseudo, "Anchor pseudo-count")
      ->capture_default_str();
  AddSeed(aggregate_cmd, &aggregate.seed, true);
  aggregate_cmd->add_option("--out", aggregate.out, "Output directory")
      ->envname(Env("OUT"))
      ->required();

  cmd::SummarizeOptions summarize;
  std::string ranker = "textrank";
  std::string categories = "rule";
  bool seed_given = false;
  auto* summarize_cmd = app.add_subcommand("summarize", "Build summaries");
  summarize_cmd->add_option("--sentences", summarize.sentences)->required();
  AddCorpusConfig(summarize_cmd, &summarize.config);
  summarize_cmd->add_option("--lexicon", summarize.lexicon);
  summarize_cmd->add_option("--party", summarize.party, "Canonical party (default: all)");
  summarize_cmd
      ->add_option("--ranker", ranker,
                   "random|klsum|lsa|textrank|lexrank|oracle|model")
      ->envname(Env("RANKER"))
      ->check(CLI::IsMember(
          {"random", "klsum", "lsa", "textrank", "lexrank", "oracle", "model"}))
      ->capture_default_str();
  summarize_cmd->add_option("--categories", categories, "rule|imported|gold")
      ->envname(Env("CATEGORIES"))
      ->check(CLI::IsMember({"rule", "imported", "gold"}))
      ->capture_default_str();
  summarize_cmd->add_option("--predictions", summarize.predictions,
                            "Category label file")
      ->envname(Env("PREDICTIONS"));
  summarize_cmd->add_option("--pairwise", summarize.pairwise,
                            "Pairwise predictions for the model ranker");
  summarize_cmd->add_option("--gold-scores", summarize.gold_scores,
                            "scores.json for the oracle ranker");
  summarize_cmd->add_option("--cr", summarize.cr, "Compression ratio")
      ->envname(Env("CR"))
      ->capture_default_str();
  summarize_cmd->add_option("--cap", summarize.cap, "Per-category cap")
      ->envname(Env("CAP"))
      ->capture_default_str();
  auto* summarize_seed = AddSeed(summarize_cmd, &summarize.ranker.seed, false);
  summarize_cmd->add_option("--damping", summarize.ranker.pagerank.damping)
      ->capture_default_str();
  summarize_cmd->add_option("--threshold", summarize.ranker.lexrank_threshold,
                            "LexRank edge threshold")
      ->capture_default_str();
  summarize_cmd->add_option("--topics", summarize.ranker.lsa_topics,
                            "LSA topics (0: min(3, N))")
      ->capture_default_str();
  summarize_cmd->add_option("--budget-tokens", summarize.ranker.klsum_budget_tokens,
                            "KL-Sum token budget (0: none)")
      ->capture_default_str();
  summarize_cmd->add_option("--pseudo", summarize.ranker.fit.pseudo)
      ->capture_default_str();
  summarize_cmd->add_option("--out", summarize.out, "Output directory")
      ->envname(Env("OUT"))
      ->required();

  cmd::ReferenceOptions reference;
  auto* reference_cmd =
      app.add_subcommand("reference", "Build gold reference summaries");
  reference_cmd->add_option("--sentences", reference.sentences)->required();
  AddCorpusConfig(reference_cmd, &reference.config);
  reference_cmd->add_option("--party", reference.party);
  reference_cmd->add_option("--gold-labels", reference.gold_labels)->required();
  reference_cmd->add_option("--gold-scores", reference.gold_scores)->required();
  reference_cmd->add_option("--cr", reference.cr)->envname(Env("CR"))
      ->capture_default_str();
  reference_cmd->add_option("--cap", reference.cap)->envname(Env("CAP"))
      ->capture_default_str();
  reference_cmd->add_option("--out", reference.out)->envname(Env("OUT"))->required();

  cmd::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score summaries against references");
  eval_cmd->add_option("--pred", eval.predicted, "Predicted summary directory")
      ->required();
  eval_cmd->add_option("--ref", eval.reference, "Reference summary directory")
      ->required();
  eval_cmd->add_option("--out", eval.out, "Report directory")
      ->envname(Env("OUT"))
      ->required();

  cmd::ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--tuples", serve.tuples)->required();
  serve_cmd->add_option("--sentences", serve.sentences, "Sentence files for texts");
  AddCorpusConfig(serve_cmd, &serve.config);
  serve_cmd->add_option("--log", serve.log, "Annotation log")
      ->envname(Env("LOG"))
      ->required();
  serve_cmd->add_option("--static", serve.static_dir, "Web UI bundle directory");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->envname(Env("PORT"))
      ->capture_default_str();
  serve_cmd->add_option("--annotations-per-tuple", serve.annotations_per_tuple)
      ->capture_default_str();
  serve_cmd->add_option("--lease-seconds", serve.lease_seconds)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  auto logger = spdlog::stderr_color_mt("clausesum");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*ingest_cmd) {
      for (const auto& path : cmd::Ingest(ingest)) std::cout << path.string() << "\n";
    } else if (*categorize_cmd) {
      std::cout << cmd::Categorize(categorize) << " predictions\n";
    } else if (*gen_cmd) {
      std::cout << cmd::GenTuples(gen) << " tuples\n";
    } else if (*simulate_cmd) {
      simulate.random = simulate_mode == "random";
      std::cout << cmd::Simulate(simulate) << " annotations\n";
    } else if (*aggregate_cmd) {
      cmd::Aggregate(aggregate);
    } else if (*summarize_cmd) {
      summarize.ranker.kind = clausesum::rankers::ParseRanker(ranker);
      summarize.categories = cmd::ParseCategorySource(categories);
      seed_given = summarize_seed->count() > 0 || std::getenv("CLAUSESUM_SEED");
      if (summarize.ranker.kind == clausesum::rankers::RankerKind::kRandom &&
          !seed_given) {
        throw clausesum::Error(clausesum::ErrorCode::kInvalidArgument,
                               "--seed is required for the random ranker");
      }
      for (const auto& path : cmd::Summarize(summarize)) {
        std::cout << path.string() << "\n";
      }
    } else if (*reference_cmd) {
      for (const auto& path : cmd::Reference(reference)) {
        std::cout << path.string() << "\n";
      }
    } else if (*eval_cmd) {
      cmd::Eval(eval);
    } else if (*serve_cmd) {
      cmd::Serve(serve);
    }
  } catch (const clausesum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return clausesum::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
