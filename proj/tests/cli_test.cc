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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "parakit/config.h"
#include "parakit/embedding.h"
#include "parakit/error.h"

namespace parakit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kData = PARAKIT_DATA_DIR;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = RunCli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path TempFile(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("parakit_cli_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::vector<json> JsonLines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

std::vector<std::string> PrisonerFlags() {
  return {"--gen-stub", kData + "/prisoner_generation_stub.json", "--embedder", "fixture",
          "--embed-fixture", kData + "/prisoner_similarity_fixture.json"};
}

std::string PrisonerOriginal() {
  std::ifstream in(kData + "/prisoner_originals.txt");
  std::string line;
  std::getline(in, line);
  return line;
}

TEST(CliScoreTest, IdenticalTexts) {
  const CliRun r = Cli({"score", "--original", "Same words here.", "--candidate", "Same words here."});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["rouge_l"]["f"].get<double>(), 1.0);
  EXPECT_EQ(j["verdict"], "rejected_rouge");
  EXPECT_EQ(j["embedder_kind"], "fallback");
}

TEST(CliScoreTest, MissingCandidateIsUsageError) {
  const CliRun r = Cli({"score", "--original", "x"});
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(Cli({"no-such-command"}).status, kExitUsage);
  EXPECT_EQ(Cli({}).status, kExitUsage);
}

TEST(CliScoreTest, Out8UnderFallbackEmbedder) {
  const std::string original = PrisonerOriginal();
  const std::string out8 =
      "In 90 seconds, a prisoner can asphyxiate himself and be brain dead after eight minutes or so";
  const CliRun r = Cli({"score", "--original", original, "--candidate", out8});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["embedder_kind"], "fallback");
  EXPECT_NEAR(j["similarity"].get<double>(),
              CosineSimilarity(EmbedFallback(original), EmbedFallback(out8)), 1e-12);
}

TEST(CliScoreTest, TextsFromFiles) {
  const fs::path a = TempFile("orig.txt", "one two three\n");
  const fs::path b = TempFile("cand.txt", "three two one\n");
  const CliRun r = Cli({"score", "--original-file", a.string(), "--candidate-file", b.string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["rouge_l"]["lcs"], 1);
  EXPECT_EQ(Cli({"score", "--original-file", "/nonexistent/x", "--candidate", "y"}).status,
            kExitRuntimeError);
}

TEST(CliParaphraseTest, PrisonerSelectsOut8) {
  auto args = PrisonerFlags();
  args.insert(args.begin(), {"paraphrase", PrisonerOriginal()});
  const CliRun r = Cli(args);
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  ASSERT_EQ(lines[0]["selected_index"], 7);
  EXPECT_EQ(lines[0]["candidates"][7]["text"],
            "In 90 seconds, a prisoner can asphyxiate himself and be brain dead after eight "
            "minutes or so");
}

TEST(CliParaphraseTest, InputFileOneLinePerText) {
  const fs::path in = TempFile("inputs.txt", PrisonerOriginal() + "\n\n" + PrisonerOriginal() + "\n");
  auto args = PrisonerFlags();
  args.insert(args.begin(), {"paraphrase", "--input", in.string()});
  const CliRun r = Cli(args);
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], lines[1]);
}

TEST(CliParaphraseTest, EmptyInputFile) {
  const fs::path in = TempFile("empty_inputs.txt", "");
  const CliRun r = Cli({"paraphrase", "--input", in.string(), "--gen-url", "http://127.0.0.1:9"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliParaphraseTest, UnreachableBackend) {
  const CliRun r = Cli({"paraphrase", "hello there", "--gen-url", "http://127.0.0.1:9"});
  EXPECT_NE(r.status, kExitOk);
  const auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0]["original"], "hello there");
  EXPECT_TRUE(lines[0].contains("error"));
}

TEST(CliStatsTest, IdentityDatasetAndEmptyFile) {
  const fs::path ds = TempFile("same.jsonl",
                               "{\"original\": \"a b c\", \"paraphrase\": \"a b c\"}\n"
                               "{\"original\": \"d e\", \"paraphrase\": \"d e\"}\n");
  const CliRun r = Cli({"stats", ds.string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["n_pairs"], 2);
  EXPECT_NEAR(j["mean_similarity"].get<double>(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(j["mean_rouge_l"].get<double>(), 1.0);
  EXPECT_NE(r.err.find("fallback"), std::string::npos);

  const fs::path empty = TempFile("empty.tsv", "");
  EXPECT_EQ(Cli({"stats", empty.string()}).status, kExitRuntimeError);
  EXPECT_EQ(Cli({"stats", ds.string(), "--format", "csv"}).status, kExitUsage);
}

TEST(CliBuildTrainTest, WritesCorpus) {
  const fs::path ds = TempFile("train_src.jsonl",
                               "{\"original\": \"a b\", \"paraphrase\": \"c d\"}\n"
                               "{\"original\": \"x >>>> y\", \"paraphrase\": \"z\"}\n");
  const fs::path out = fs::temp_directory_path() / "parakit_cli_train.txt";
  const CliRun r = Cli({"build-train", ds.string(), "--out", out.string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["written"], 1);
  EXPECT_EQ(j["skipped"], 1);
  std::ifstream in(out);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), "a b >>>> c d<|endoftext|>\n");
  EXPECT_EQ(Cli({"build-train", ds.string()}).status, kExitUsage);
}

TEST(CliCalibrateTest, DefaultFixtures) {
  const CliRun r = Cli({"calibrate"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["n_fixtures"], 4);
  const CliRun file = Cli({"calibrate", "--fixtures", kData + "/short_calibration.jsonl"});
  ASSERT_EQ(file.status, kExitOk) << file.err;
  json k = json::parse(file.out);
  EXPECT_EQ(j, k);
}

TEST(CliConfigTest, Precedence) {
  const fs::path cfg = TempFile("prec.toml",
                                "# parakit settings\n"
                                "rouge_max = 0.6\n"
                                "similarity_min = 0.8\n"
                                "separator = \"=>\"\n");
  const CliRun base = Cli({"config-dump"});
  ASSERT_EQ(base.status, kExitOk) << base.err;
  EXPECT_DOUBLE_EQ(json::parse(base.out)["rouge_max"].get<double>(), 0.7);

  const CliRun file = Cli({"--config", cfg.string(), "config-dump"});
  ASSERT_EQ(file.status, kExitOk) << file.err;
  const json jf = json::parse(file.out);
  EXPECT_DOUBLE_EQ(jf["rouge_max"].get<double>(), 0.6);
  EXPECT_EQ(jf["separator"], "=>");

  const CliRun flag = Cli({"--config", cfg.string(), "config-dump", "--rouge-max", "0.5"});
  ASSERT_EQ(flag.status, kExitOk) << flag.err;
  const json jg = json::parse(flag.out);
  EXPECT_DOUBLE_EQ(jg["rouge_max"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(jg["similarity_min"].get<double>(), 0.8);
}

TEST(CliConfigTest, TextDumpReloads) {
  const CliRun dump = Cli({"config-dump", "--toml", "--top-k", "40", "--seed", "7"});
  ASSERT_EQ(dump.status, kExitOk) << dump.err;
  AppConfig reloaded;
  ApplyConfigText(reloaded, dump.out);
  EXPECT_EQ(reloaded.sampling.top_k, 40);
  EXPECT_EQ(reloaded.sampling.seed, 7);
  EXPECT_EQ(DumpConfigText(reloaded), dump.out);
}

TEST(CliConfigTest, BadValuesAreUsageErrors) {
  EXPECT_EQ(Cli({"config-dump", "--rouge-max", "1.5"}).status, kExitUsage);
  EXPECT_EQ(Cli({"config-dump", "--punctuation-mode", "sideways"}).status, kExitUsage);
  const fs::path cfg = TempFile("bad.toml", "no_such_key = 1\n");
  EXPECT_EQ(Cli({"--config", cfg.string(), "config-dump"}).status, kExitUsage);
}

TEST(CliDeterminismTest, RepeatedRunsAreByteIdentical) {
  auto args = PrisonerFlags();
  args.insert(args.begin(), {"paraphrase", PrisonerOriginal()});
  EXPECT_EQ(Cli(args).out, Cli(args).out);
  const std::vector<std::string> score{"score", "--original", "a b c", "--candidate", "a c d"};
  EXPECT_EQ(Cli(score).out, Cli(score).out);
}

TEST(ConfigTest, KeysRoundTripThroughText) {
  AppConfig c;
  SetConfigValue(c, "punctuation_mode", "keep_attached");
  SetConfigValue(c, "case_fold", "false");
  SetConfigValue(c, "similarity_max", "0.99");
  SetConfigValue(c, "end_of_example", "</s>");
  EXPECT_EQ(GetConfigValue(c, "punctuation_mode"), "keep_attached");
  AppConfig d;
  ApplyConfigText(d, DumpConfigText(c));
  EXPECT_EQ(d.policy, c.policy);
  EXPECT_EQ(d.fmt.end_of_example, "</s>");
  for (const auto& key : ConfigKeys()) EXPECT_EQ(GetConfigValue(d, key), GetConfigValue(c, key));
  EXPECT_THROW(SetConfigValue(c, "n_candidates", "zero"), InputError);
  EXPECT_THROW(GetConfigValue(c, "missing"), InputError);
}

}  // namespace
}  // namespace parakit
