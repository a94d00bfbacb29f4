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

// Candidate scoring, threshold filtering and best-candidate selection.
//
// A candidate is rejected when its ROUGE-L F-measure against the original
// is strictly above rouge_max (too close to a copy), otherwise when its
// embedding similarity is strictly below similarity_min (meaning drift).
// Among accepted candidates the most similar one wins.

#ifndef PARAKIT_SELECTOR_H_
#define PARAKIT_SELECTOR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parakit/embedding.h"
#include "parakit/generation.h"
#include "parakit/text_metrics.h"

namespace parakit {

struct SelectionPolicy {
  /// Reject iff ROUGE-L F > rouge_max.
  double rouge_max = 0.7;
  /// Reject iff similarity < similarity_min. Zero keeps everything.
  double similarity_min = 0.85;
  /// Optional upper bound: reject iff similarity > similarity_max.
  std::optional<double> similarity_max;
  /// BLEU is reported only; it never affects the verdict.
  bool compute_bleu = true;
  TokenizationPolicy tokenization;
  double rouge_beta = 1.0;
  BleuOptions bleu;

  void Validate() const;

  friend bool operator==(const SelectionPolicy&, const SelectionPolicy&) = default;
};

enum class Verdict { kAccepted, kRejectedRouge, kRejectedSimilarity, kRejectedEmpty };

std::string_view ToString(Verdict verdict);
std::optional<Verdict> ParseVerdict(std::string_view name);

struct ScoredCandidate {
  std::string text;
  double similarity = 0.0;
  RougeScore rouge_l;
  std::optional<BleuScore> bleu;
  Verdict verdict = Verdict::kRejectedEmpty;
  std::string rejection_detail;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct SelectionReport {
  std::string original;
  std::vector<ScoredCandidate> candidates;
  /// Index into `candidates` of the winner, if any candidate was accepted.
  std::optional<std::size_t> selected_index;
  SelectionPolicy policy;

  friend bool operator==(const SelectionReport&, const SelectionReport&) = default;
};

/// Sets verdict and rejection_detail from the similarity and ROUGE-L
/// F-measure already stored in `candidate`. Empty text is rejected_empty;
/// the ROUGE check runs before the similarity check.
void ApplyVerdict(ScoredCandidate& candidate, const SelectionPolicy& policy);

/// Computes lexical scores of `candidate` against the pre-tokenized
/// original and assigns the verdict for the given similarity.
ScoredCandidate ScoreWithSimilarity(std::span<const Token> original_tokens,
                                    std::string candidate, double similarity,
                                    const SelectionPolicy& policy);

/// Embeds both texts and scores the candidate. An empty candidate is
/// rejected_empty with zero scores and no embedding call.
ScoredCandidate ScoreCandidate(std::string_view original, std::string_view candidate,
                               const SelectionPolicy& policy, const Embedder& embedder);

struct FilterResult {
  std::vector<ScoredCandidate> accepted;
  std::vector<ScoredCandidate> rejected;
};

/// Re-applies `policy` to every candidate and partitions by verdict; both
/// halves keep input order.
FilterResult FilterCandidates(std::span<const ScoredCandidate> scored,
                              const SelectionPolicy& policy);

/// Index of the most similar candidate; ties go to the lower ROUGE-L F,
/// then to the earlier position. Throws InputError if any element is not
/// accepted.
std::optional<std::size_t> SelectBest(std::span<const ScoredCandidate> accepted);

/// Generates, scores, filters and selects. The original is embedded once,
/// together with all candidates, in a single provider call.
SelectionReport Paraphrase(std::string_view original, const SamplingParams& params,
                           const SelectionPolicy& policy, const PromptFormat& fmt,
                           const GenerationBackend& backend, const Embedder& embedder);

/// Scores an already generated candidate list (no generation step).
SelectionReport ScoreAndSelect(std::string_view original,
                               std::span<const std::string> candidates,
                               const SelectionPolicy& policy, const Embedder& embedder);

void to_json(nlohmann::json& j, const RougeScore& s);
void from_json(const nlohmann::json& j, RougeScore& s);
void to_json(nlohmann::json& j, const BleuScore& s);
void from_json(const nlohmann::json& j, BleuScore& s);
void to_json(nlohmann::json& j, const TokenizationPolicy& p);
void from_json(const nlohmann::json& j, TokenizationPolicy& p);
void to_json(nlohmann::json& j, const SelectionPolicy& p);
void from_json(const nlohmann::json& j, SelectionPolicy& p);
void to_json(nlohmann::json& j, const ScoredCandidate& c);
void from_json(const nlohmann::json& j, ScoredCandidate& c);
void to_json(nlohmann::json& j, const SelectionReport& r);
void from_json(const nlohmann::json& j, SelectionReport& r);

/// One report as a single JSON Lines record (no trailing newline).
std::string ToJsonLine(const SelectionReport& report);
SelectionReport ReportFromJsonLine(std::string_view line);

}  // namespace parakit

#endif  // PARAKIT_SELECTOR_H_
