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

#include "parakit/selector.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "parakit/error.h"
#include "prisoner_fixture.h"

namespace parakit {
namespace {

using testing::InjectedPrisonerScores;
using testing::kPrisonerOriginal;
using testing::PrisonerCandidates;

ScoredCandidate Accepted(std::string text, double similarity, double rouge) {
  ScoredCandidate c;
  c.text = std::move(text);
  c.similarity = similarity;
  c.rouge_l.f_measure = rouge;
  c.verdict = Verdict::kAccepted;
  return c;
}

FixtureEmbedder PrisonerEmbedder() {
  std::vector<FixtureEmbedder::Entry> entries;
  for (const auto& row : PrisonerCandidates()) entries.push_back({row.text, row.similarity});
  return FixtureEmbedder(kPrisonerOriginal, std::move(entries));
}

TEST(ScoreCandidateTest, IdentityIsRejectedRouge) {
  const SelectionPolicy policy;
  const ScoredCandidate c =
      ScoreCandidate("The cat sat on the mat.", "The cat sat on the mat.", policy,
                     FallbackEmbedder());
  EXPECT_DOUBLE_EQ(c.rouge_l.f_measure, 1.0);
  EXPECT_NEAR(c.similarity, 1.0, 1e-12);
  EXPECT_EQ(c.verdict, Verdict::kRejectedRouge);
  ASSERT_TRUE(c.bleu.has_value());
  EXPECT_DOUBLE_EQ(c.bleu->score, 1.0);
}

TEST(ScoreCandidateTest, PublishedScoresDriveVerdicts) {
  const SelectionPolicy policy;
  auto rows = InjectedPrisonerScores();
  ApplyVerdict(rows[8], policy);
  EXPECT_EQ(rows[8].verdict, Verdict::kRejectedRouge);
  ApplyVerdict(rows[1], policy);
  EXPECT_EQ(rows[1].verdict, Verdict::kRejectedSimilarity);
  EXPECT_FALSE(rows[1].rejection_detail.empty());
}

TEST(ScoreCandidateTest, EmptyCandidate) {
  const ScoredCandidate c = ScoreCandidate("Original.", "  ", {}, FallbackEmbedder());
  EXPECT_EQ(c.verdict, Verdict::kRejectedEmpty);
  EXPECT_EQ(c.similarity, 0.0);
  EXPECT_EQ(c.rouge_l, RougeScore{});
  EXPECT_THROW(ScoreCandidate("", "x", {}, FallbackEmbedder()), InputError);
}

TEST(ScoreCandidateTest, BleuIsOptional) {
  SelectionPolicy policy;
  policy.compute_bleu = false;
  const ScoredCandidate c = ScoreCandidate("a b c", "a b d", policy, FallbackEmbedder());
  EXPECT_FALSE(c.bleu.has_value());
}

TEST(ScoreCandidateTest, RougeCheckedBeforeSimilarity) {
  ScoredCandidate c = Accepted("x", 0.1, 0.9);
  ApplyVerdict(c, {});
  EXPECT_EQ(c.verdict, Verdict::kRejectedRouge);
}

TEST(ScoreCandidateTest, OptionalSimilarityCeiling) {
  SelectionPolicy policy;
  policy.similarity_max = 0.95;
  ScoredCandidate c = Accepted("x", 0.97, 0.5);
  ApplyVerdict(c, policy);
  EXPECT_EQ(c.verdict, Verdict::kRejectedSimilarity);
  c.similarity = 0.95;
  ApplyVerdict(c, policy);
  EXPECT_EQ(c.verdict, Verdict::kAccepted);
}

TEST(FilterTest, PrisonerPartition) {
  const FilterResult r = FilterCandidates(InjectedPrisonerScores(), {});
  ASSERT_EQ(r.accepted.size(), 3u);
  EXPECT_EQ(r.accepted[0].text, PrisonerCandidates()[5].text);
  EXPECT_EQ(r.accepted[1].text, PrisonerCandidates()[6].text);
  EXPECT_EQ(r.accepted[2].text, PrisonerCandidates()[7].text);
  ASSERT_EQ(r.rejected.size(), 6u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(r.rejected[i].verdict, Verdict::kRejectedSimilarity);
  EXPECT_EQ(r.rejected[5].verdict, Verdict::kRejectedRouge);
}

TEST(FilterTest, EmptyAndBoundary) {
  const FilterResult empty = FilterCandidates({}, {});
  EXPECT_TRUE(empty.accepted.empty());
  EXPECT_TRUE(empty.rejected.empty());

  const std::vector<ScoredCandidate> boundary{Accepted("edge", 0.85, 0.7)};
  EXPECT_EQ(FilterCandidates(boundary, {}).accepted.size(), 1u);
}

TEST(FilterTest, ObservationOnlyFloor) {
  SelectionPolicy policy;
  policy.similarity_min = 0.0;
  const FilterResult r = FilterCandidates(InjectedPrisonerScores(), policy);
  // Only the near-copy is removed when the floor is disabled.
  EXPECT_EQ(r.accepted.size(), 8u);
}

TEST(FilterTest, Idempotent) {
  const FilterResult once = FilterCandidates(InjectedPrisonerScores(), {});
  const FilterResult twice = FilterCandidates(once.accepted, {});
  EXPECT_EQ(twice.accepted, once.accepted);
  EXPECT_TRUE(twice.rejected.empty());
}

TEST(SelectBestTest, PrisonerPicksOut8) {
  const FilterResult r = FilterCandidates(InjectedPrisonerScores(), {});
  const auto best = SelectBest(r.accepted);
  ASSERT_TRUE(best.has_value());
  EXPECT_EQ(r.accepted[*best].text, PrisonerCandidates()[7].text);
}

TEST(SelectBestTest, TieBreaks) {
  const std::vector<ScoredCandidate> tie{Accepted("hi", 0.9, 0.5), Accepted("lo", 0.9, 0.3)};
  EXPECT_EQ(SelectBest(tie), 1u);
  const std::vector<ScoredCandidate> exact{Accepted("a", 0.9, 0.3), Accepted("b", 0.9, 0.3)};
  EXPECT_EQ(SelectBest(exact), 0u);
  EXPECT_EQ(SelectBest({}), std::nullopt);
}

TEST(SelectBestTest, RejectsUnacceptedInput) {
  std::vector<ScoredCandidate> bad{Accepted("a", 0.9, 0.3)};
  bad[0].verdict = Verdict::kRejectedRouge;
  EXPECT_THROW(SelectBest(bad), InputError);
}

TEST(SelectBestTest, PermutationInvariant) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredCandidate> xs;
    for (int i = 0; i < 8; ++i) {
      // Coarse values force ties; the position suffix keeps texts distinct.
      xs.push_back(
          Accepted("c" + std::to_string(i), 0.85 + 0.02 * coarse(rng), 0.1 * coarse(rng)));
    }
    const ScoredCandidate winner = xs[*SelectBest(xs)];
    std::shuffle(xs.begin(), xs.end(), rng);
    const ScoredCandidate shuffled = xs[*SelectBest(xs)];
    EXPECT_EQ(winner.similarity, shuffled.similarity);
    EXPECT_EQ(winner.rouge_l.f_measure, shuffled.rouge_l.f_measure);
    for (const auto& x : xs) EXPECT_GE(shuffled.similarity, x.similarity);
  }
}

TEST(ParaphraseTest, VerbatimCopyIsNotSelected) {
  const std::string original = "The committee approved the budget on Monday.";
  StubGenerationBackend echo([&](const GenerationRequest&) {
    return std::vector<std::string>{original + "<|endoftext|>"};
  });
  const SelectionReport report =
      Paraphrase(original, {}, {}, {}, echo, FallbackEmbedder());
  ASSERT_EQ(report.candidates.size(), 1u);
  EXPECT_EQ(report.candidates[0].verdict, Verdict::kRejectedRouge);
  EXPECT_FALSE(report.selected_index.has_value());
}

TEST(ParaphraseTest, PrisonerEndToEnd) {
  std::vector<std::string> completions;
  for (const auto& row : PrisonerCandidates()) completions.push_back(row.text + "<|endoftext|>");
  StubGenerationBackend stub(
      StubGenerationBackend::Table{{FormatPrompt(kPrisonerOriginal), completions}});
  const SelectionReport report =
      Paraphrase(kPrisonerOriginal, {}, {}, {}, stub, PrisonerEmbedder());
  ASSERT_EQ(report.candidates.size(), 9u);
  ASSERT_TRUE(report.selected_index.has_value());
  EXPECT_EQ(*report.selected_index, 7u);
  EXPECT_EQ(report.candidates[8].verdict, Verdict::kRejectedRouge);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_NEAR(report.candidates[i].similarity, PrisonerCandidates()[i].similarity, 1e-12);
  }
}

TEST(ParaphraseTest, NoCandidates) {
  StubGenerationBackend nothing([](const GenerationRequest&) {
    return std::vector<std::string>{" ", "<|endoftext|>"};
  });
  const SelectionReport report = Paraphrase("Hello there.", {}, {}, {}, nothing,
                                            FallbackEmbedder());
  EXPECT_TRUE(report.candidates.empty());
  EXPECT_FALSE(report.selected_index.has_value());
}

TEST(ParaphraseTest, OriginalEmbeddedOnceInOneCall) {
  struct CountingEmbedder final : Embedder {
    mutable int calls = 0;
    mutable std::vector<std::string> seen;
    std::vector<EmbeddingVector> Embed(std::span<const std::string> texts) const override {
      ++calls;
      seen.assign(texts.begin(), texts.end());
      return FallbackEmbedder().Embed(texts);
    }
    EmbedderKind kind() const override { return EmbedderKind::kFallback; }
  } counting;
  const std::vector<std::string> candidates{"first one", "", "second one"};
  const SelectionReport report = ScoreAndSelect("orig text", candidates, {}, counting);
  EXPECT_EQ(counting.calls, 1);
  EXPECT_EQ(counting.seen, (std::vector<std::string>{"orig text", "first one", "second one"}));
  EXPECT_EQ(report.candidates[1].verdict, Verdict::kRejectedEmpty);
}

TEST(ParaphraseTest, ManyCandidatesScoredInOrder) {
  std::vector<std::string> candidates;
  for (int i = 0; i < 40; ++i) candidates.push_back("candidate variant " + std::to_string(i));
  const SelectionReport report =
      ScoreAndSelect("candidate variant", candidates, {}, FallbackEmbedder());
  ASSERT_EQ(report.candidates.size(), candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    EXPECT_EQ(report.candidates[i].text, candidates[i]);
  }
}

TEST(ReportJsonTest, FieldNamesAndRoundTrip) {
  std::vector<std::string> completions;
  for (const auto& row : PrisonerCandidates()) completions.push_back(row.text);
  StubGenerationBackend stub(
      StubGenerationBackend::Table{{FormatPrompt(kPrisonerOriginal), completions}});
  const SelectionReport report = Paraphrase(kPrisonerOriginal, {}, {}, {}, stub, PrisonerEmbedder());
  const std::string line = ToJsonLine(report);
  EXPECT_EQ(line.find('\n'), std::string::npos);

  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"original", "candidates", "selected_index", "policy"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto& c = j["candidates"][0];
  for (const char* key : {"text", "similarity", "rouge_l", "bleu", "verdict", "rejection_detail"}) {
    EXPECT_TRUE(c.contains(key)) << key;
  }
  for (const char* key : {"p", "r", "f", "lcs"}) EXPECT_TRUE(c["rouge_l"].contains(key));
  for (const char* key : {"score", "precisions", "bp"}) EXPECT_TRUE(c["bleu"].contains(key));

  EXPECT_EQ(ReportFromJsonLine(line), report);
  EXPECT_THROW(ReportFromJsonLine("{}"), InputError);
}

TEST(SelectionPolicyTest, Validation) {
  SelectionPolicy p;
  EXPECT_NO_THROW(p.Validate());
  p.rouge_max = 0.0;
  EXPECT_THROW(p.Validate(), InputError);
  p = {};
  p.similarity_min = 1.0;
  EXPECT_THROW(p.Validate(), InputError);
  p = {};
  p.similarity_max = 0.5;
  EXPECT_THROW(p.Validate(), InputError);
}

}  // namespace
}  // namespace parakit
