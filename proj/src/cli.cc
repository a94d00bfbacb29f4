// Copyright 2026 The Parakit Authors
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

#include "parakit/cli.h"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "parakit/config.h"
#include "parakit/corpus.h"
#include "parakit/embedding.h"
#include "parakit/error.h"
#include "parakit/generation.h"
#include "parakit/selector.h"
#include "parakit/unicode.h"
#include "parallel.h"

namespace parakit {
namespace {

using nlohmann::json;

// Raised for command-line mistakes detected after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string Dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PairFormat ResolveFormat(const std::string& flag, const std::string& path) {
  if (!flag.empty()) {
    auto f = ParsePairFormat(flag);
    if (!f) throw UsageError("--format must be msr_tsv or jsonl");
    return *f;
  }
  auto ends_with = [&](std::string_view suffix) { return path.ends_with(suffix); };
  if (ends_with(".jsonl")) return PairFormat::kJsonl;
  if (ends_with(".tsv") || ends_with(".txt")) return PairFormat::kMsrTsv;
  throw UsageError("cannot infer the dataset format of '" + path + "'; pass --format");
}

void PrintWarnings(const std::vector<std::string>& warnings, std::ostream& err) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < warnings.size() && i < kShown; ++i) {
    err << "warning: " << warnings[i] << "\n";
  }
  if (warnings.size() > kShown) {
    err << "warning: ... " << (warnings.size() - kShown) << " more\n";
  }
  if (!warnings.empty()) err << "warning: skipped " << warnings.size() << " row(s)\n";
}

// A command-line flag that overrides one config key.
struct Override {
  std::string flag;
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paraphrase candidate generation, scoring and selection", "parakit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Config file of key = value lines");

  std::vector<std::unique_ptr<Override>> overrides;
  auto add_override = [&](const std::string& flag, const std::string& key,
                          const std::string& help) {
    auto o = std::make_unique<Override>();
    o->flag = flag;
    o->key = key;
    o->option = app.add_option(flag, o->value, help);
    overrides.push_back(std::move(o));
    return overrides.back()->option;
  };
  add_override("--separator", "separator", "Separator between original and paraphrase");
  add_override("--end-of-example", "end_of_example", "End-of-example marker");
  add_override("--rouge-max", "rouge_max", "Reject candidates with ROUGE-L F above this");
  add_override("--similarity-min", "similarity_min", "Reject candidates less similar than this");
  add_override("--similarity-max", "similarity_max", "Optional upper similarity bound");
  add_override("--punctuation-mode", "punctuation_mode", "separate_tokens, drop or keep_attached");
  add_override("--n-candidates", "n_candidates", "Completions requested per original");
  add_override("--max-new-tokens", "max_new_tokens", "Length limit per completion");
  add_override("--temperature", "temperature", "Sampling temperature");
  add_override("--top-k", "top_k", "Top-k sampling cutoff (off by default)");
  add_override("--seed", "seed", "Sampling seed");
  add_override("--embedder", "embedder", "remote, fallback or fixture")
      ->check(CLI::IsMember({"remote", "fallback", "fixture"}));
  add_override("--embed-url", "embed_url", "Embedding service base URL");
  add_override("--embed-fixture", "embed_fixture", "Similarity fixture for --embedder fixture");
  add_override("--gen-url", "gen_url", "Generation service base URL");
  add_override("--gen-stub", "gen_stub", "Prompt-to-completions fixture for the stub backend");
  bool no_case_fold = false;
  bool no_bleu = false;
  app.add_flag("--no-case-fold", no_case_fold, "Compare tokens case-sensitively");
  app.add_flag("--no-bleu", no_bleu, "Skip BLEU in candidate reports");

  auto* score = app.add_subcommand("score", "Score one candidate against an original");
  std::string original_text, candidate_text, original_file, candidate_file;
  score->add_option("--original", original_text, "Original text");
  score->add_option("--candidate", candidate_text, "Candidate paraphrase");
  score->add_option("--original-file", original_file, "File holding the original text");
  score->add_option("--candidate-file", candidate_file, "File holding the candidate text");

  auto* paraphrase = app.add_subcommand("paraphrase", "Generate, filter and select paraphrases");
  std::string paraphrase_text, input_path;
  paraphrase->add_option("text", paraphrase_text, "Original text");
  paraphrase->add_option("--input", input_path, "File with one original per line");

  auto* stats = app.add_subcommand("stats", "Average similarity, ROUGE-L and BLEU of a dataset");
  std::string dataset_path, format_flag;
  bool all_rows = false;
  stats->add_option("dataset", dataset_path, "Dataset file")->required();
  stats->add_option("--format", format_flag, "msr_tsv or jsonl")
      ->check(CLI::IsMember({"msr_tsv", "jsonl"}));
  stats->add_flag("--all-rows", all_rows, "MSR: include rows labelled 0");

  auto* build = app.add_subcommand("build-train", "Write a fine-tuning corpus");
  std::string out_path;
  build->add_option("dataset", dataset_path, "Dataset file")->required();
  build->add_option("--format", format_flag, "msr_tsv or jsonl")
      ->check(CLI::IsMember({"msr_tsv", "jsonl"}));
  build->add_option("--out", out_path, "Output training file")->required();
  build->add_flag("--all-rows", all_rows, "MSR: include rows labelled 0");

  auto* calibrate = app.add_subcommand("calibrate", "Fit tokenization to published scores");
  std::string fixtures_path;
  calibrate->add_option("--fixtures", fixtures_path, "JSONL calibration fixtures");

  auto* naive = app.add_subcommand("sample-naive", "Sample unconditional training-style pairs");

  auto* dump = app.add_subcommand("config-dump", "Print the effective configuration");
  bool dump_toml = false;
  dump->add_flag("--toml", dump_toml, "Print config-file syntax instead of JSON");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv{"parakit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "parakit: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    AppConfig config;
    if (!config_path.empty()) ApplyConfigFile(config, config_path);
    ApplyEnvironment(config);
    for (const auto& o : overrides) {
      if (o->option->count() > 0) SetConfigValue(config, o->key, o->value);
    }
    if (no_case_fold) config.policy.tokenization.case_fold = false;
    if (no_bleu) config.policy.compute_bleu = false;
    config.policy.Validate();
    config.fmt.Validate();
    config.sampling.Validate();

    if (dump->parsed()) {
      if (dump_toml) {
        out << DumpConfigText(config);
      } else {
        out << Dump(DumpConfigJson(config)) << "\n";
      }
      return kExitOk;
    }

    if (score->parsed()) {
      if (original_text.empty() == original_file.empty()) {
        throw UsageError("score: give exactly one of --original or --original-file");
      }
      if (candidate_text.empty() == candidate_file.empty()) {
        throw UsageError("score: give exactly one of --candidate or --candidate-file");
      }
      const std::string original =
          original_file.empty() ? original_text : unicode::Trim(ReadText(original_file));
      const std::string candidate =
          candidate_file.empty() ? candidate_text : unicode::Trim(ReadText(candidate_file));
      const auto embedder = MakeEmbedder(config.EffectiveEmbedder());
      json j = ScoreCandidate(original, candidate, config.policy, *embedder);
      j["embedder_kind"] = ToString(embedder->kind());
      out << Dump(j) << "\n";
      return kExitOk;
    }

    if (paraphrase->parsed()) {
      if (paraphrase_text.empty() == input_path.empty()) {
        throw UsageError("paraphrase: give either a text argument or --input");
      }
      std::vector<std::string> originals;
      if (!input_path.empty()) {
        std::istringstream lines(ReadText(input_path));
        std::string line;
        while (std::getline(lines, line)) {
          std::string text = unicode::Trim(line);
          if (!text.empty()) originals.push_back(std::move(text));
        }
      } else {
        originals.push_back(paraphrase_text);
      }
      if (originals.empty()) return kExitOk;

      const BackendConfig gen_config = config.EffectiveGenerator();
      const auto backend = MakeBackend(gen_config);
      const auto embedder = MakeEmbedder(config.EffectiveEmbedder());
      std::vector<std::string> lines(originals.size());
      std::vector<char> failed(originals.size(), 0);
      internal::ParallelFor(originals.size(), gen_config.max_concurrency, [&](std::size_t i) {
        try {
          lines[i] = ToJsonLine(Paraphrase(originals[i], config.sampling, config.policy,
                                           config.fmt, *backend, *embedder));
        } catch (const Error& e) {
          failed[i] = 1;
          lines[i] = Dump({{"original", originals[i]}, {"error", e.what()}});
        }
      });
      int status = kExitOk;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        out << lines[i] << "\n";
        if (failed[i]) {
          err << "parakit: input " << i + 1 << " failed\n";
          status = kExitRuntimeError;
        }
      }
      return status;
    }

    if (stats->parsed()) {
      const LoadResult loaded = LoadPairs(dataset_path, ResolveFormat(format_flag, dataset_path),
                                          {.paraphrases_only = !all_rows});
      PrintWarnings(loaded.warnings, err);
      const auto embedder = MakeEmbedder(config.EffectiveEmbedder());
      if (embedder->kind() != EmbedderKind::kRemote) {
        err << "note: mean_similarity comes from the " << ToString(embedder->kind())
            << " embedder and is not comparable to published sentence-encoder scores\n";
      }
      const DatasetStats result = ComputeDatasetStats(loaded.pairs, config.policy, *embedder);
      out << Dump(json(result)) << "\n";
      return kExitOk;
    }

    if (build->parsed()) {
      const LoadResult loaded = LoadPairs(dataset_path, ResolveFormat(format_flag, dataset_path),
                                          {.paraphrases_only = !all_rows});
      PrintWarnings(loaded.warnings, err);
      const TrainFileResult result = BuildTrainFile(loaded.pairs, config.fmt, out_path);
      PrintWarnings(result.warnings, err);
      out << Dump({{"written", result.written},
                   {"skipped", result.warnings.size()},
                   {"out", out_path}})
          << "\n";
      return kExitOk;
    }

    if (calibrate->parsed()) {
      const std::vector<CalibrationFixture> fixtures = fixtures_path.empty()
                                                           ? DefaultCalibrationFixtures()
                                                           : LoadCalibrationFixtures(fixtures_path);
      json j = CalibrateTokenization(fixtures, config.policy.bleu.max_n);
      j["n_fixtures"] = fixtures.size();
      out << Dump(j) << "\n";
      return kExitOk;
    }

    if (naive->parsed()) {
      const auto backend = MakeBackend(config.EffectiveGenerator());
      for (const auto& pair : SampleNaive(config.sampling, config.fmt, *backend)) {
        out << Dump({{"original", pair.original}, {"paraphrase", pair.paraphrase}}) << "\n";
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "parakit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "parakit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "parakit: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitUsage;
}

}  // namespace parakit
