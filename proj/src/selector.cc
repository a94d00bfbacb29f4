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

#include <sstream>

#include "parakit/error.h"
#include "parakit/unicode.h"
#include "parallel.h"

namespace parakit {
namespace {

using nlohmann::json;

// Candidate lists below this size are scored on the calling thread.
constexpr std::size_t kParallelScoringThreshold = 16;

std::string Describe(std::string_view what, double value, std::string_view op,
                     std::string_view bound_name, double bound) {
  std::ostringstream out;
  out << what << ' ' << value << ' ' << op << ' ' << bound_name << ' ' << bound;
  return out.str();
}

}  // namespace

void SelectionPolicy::Validate() const {
  if (!(rouge_max > 0.0 && rouge_max <= 1.0)) throw InputError("rouge_max must be in (0, 1]");
  if (!(similarity_min >= 0.0 && similarity_min < 1.0)) {
    throw InputError("similarity_min must be in [0, 1)");
  }
  if (similarity_max && !(*similarity_max >= similarity_min && *similarity_max <= 1.0)) {
    throw InputError("similarity_max must be in [similarity_min, 1]");
  }
  if (!(rouge_beta > 0.0)) throw InputError("rouge_beta must be positive");
  if (bleu.max_n < 1) throw InputError("bleu max_n must be at least 1");
}

std::string_view ToString(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAccepted:
      return "accepted";
    case Verdict::kRejectedRouge:
      return "rejected_rouge";
    case Verdict::kRejectedSimilarity:
      return "rejected_similarity";
    case Verdict::kRejectedEmpty:
      return "rejected_empty";
  }
  return "rejected_empty";
}

std::optional<Verdict> ParseVerdict(std::string_view name) {
  for (Verdict v : {Verdict::kAccepted, Verdict::kRejectedRouge, Verdict::kRejectedSimilarity,
                    Verdict::kRejectedEmpty}) {
    if (ToString(v) == name) return v;
  }
  return std::nullopt;
}

void ApplyVerdict(ScoredCandidate& candidate, const SelectionPolicy& policy) {
  candidate.rejection_detail.clear();
  if (unicode::Trim(candidate.text).empty()) {
    candidate.verdict = Verdict::kRejectedEmpty;
    candidate.rejection_detail = "empty candidate";
    return;
  }
  if (candidate.rouge_l.f_measure > policy.rouge_max) {
    candidate.verdict = Verdict::kRejectedRouge;
    candidate.rejection_detail =
        Describe("rouge_l.f", candidate.rouge_l.f_measure, ">", "rouge_max", policy.rouge_max);
    return;
  }
  if (candidate.similarity < policy.similarity_min) {
    candidate.verdict = Verdict::kRejectedSimilarity;
    candidate.rejection_detail = Describe("similarity", candidate.similarity, "<",
                                          "similarity_min", policy.similarity_min);
    return;
  }
  if (policy.similarity_max && candidate.similarity > *policy.similarity_max) {
    candidate.verdict = Verdict::kRejectedSimilarity;
    candidate.rejection_detail = Describe("similarity", candidate.similarity, ">",
                                          "similarity_max", *policy.similarity_max);
    return;
  }
  candidate.verdict = Verdict::kAccepted;
}

ScoredCandidate ScoreWithSimilarity(std::span<const Token> original_tokens,
                                    std::string candidate, double similarity,
                                    const SelectionPolicy& policy) {
  ScoredCandidate scored;
  scored.text = std::move(candidate);
  if (!unicode::Trim(scored.text).empty()) {
    const TokenSequence tokens = Tokenize(scored.text, policy.tokenization);
    scored.similarity = similarity;
    scored.rouge_l = RougeL(tokens, original_tokens, policy.rouge_beta);
    if (policy.compute_bleu) scored.bleu = Bleu(tokens, original_tokens, policy.bleu);
  }
  ApplyVerdict(scored, policy);
  return scored;
}

ScoredCandidate ScoreCandidate(std::string_view original, std::string_view candidate,
                               const SelectionPolicy& policy, const Embedder& embedder) {
  policy.Validate();
  if (unicode::Trim(original).empty()) throw InputError("original text is empty");
  const TokenSequence original_tokens = Tokenize(original, policy.tokenization);
  if (unicode::Trim(candidate).empty()) {
    return ScoreWithSimilarity(original_tokens, std::string(candidate), 0.0, policy);
  }
  const std::vector<std::string> texts{std::string(original), std::string(candidate)};
  const auto vectors = embedder.Embed(texts);
  return ScoreWithSimilarity(original_tokens, std::string(candidate),
                             CosineSimilarity(vectors[0], vectors[1]), policy);
}

FilterResult FilterCandidates(std::span<const ScoredCandidate> scored,
                              const SelectionPolicy& policy) {
  FilterResult result;
  for (ScoredCandidate c : scored) {
    ApplyVerdict(c, policy);
    (c.verdict == Verdict::kAccepted ? result.accepted : result.rejected).push_back(std::move(c));
  }
  return result;
}

std::optional<std::size_t> SelectBest(std::span<const ScoredCandidate> accepted) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    const ScoredCandidate& c = accepted[i];
    if (c.verdict != Verdict::kAccepted) {
      throw InputError("SelectBest: candidate " + std::to_string(i) + " is not accepted");
    }
    if (!best) {
      best = i;
      continue;
    }
    const ScoredCandidate& b = accepted[*best];
    if (c.similarity > b.similarity ||
        (c.similarity == b.similarity && c.rouge_l.f_measure < b.rouge_l.f_measure)) {
      best = i;
    }
  }
  return best;
}

SelectionReport ScoreAndSelect(std::string_view original,
                               std::span<const std::string> candidates,
                               const SelectionPolicy& policy, const Embedder& embedder) {
  policy.Validate();
  if (unicode::Trim(original).empty()) throw InputError("original text is empty");

  SelectionReport report;
  report.original = std::string(original);
  report.policy = policy;

  // Embed the original once, followed by every non-empty candidate.
  std::vector<std::string> texts{report.original};
  std::vector<std::optional<std::size_t>> vector_index(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (unicode::Trim(candidates[i]).empty()) continue;
    vector_index[i] = texts.size();
    texts.push_back(candidates[i]);
  }
  std::vector<EmbeddingVector> vectors;
  if (texts.size() > 1) vectors = embedder.Embed(texts);

  const TokenSequence original_tokens = Tokenize(original, policy.tokenization);
  report.candidates.resize(candidates.size());
  const std::size_t workers =
      candidates.size() >= kParallelScoringThreshold ? internal::DefaultWorkers() : 1;
  internal::ParallelFor(candidates.size(), workers, [&](std::size_t i) {
    const double similarity =
        vector_index[i] ? CosineSimilarity(vectors[0], vectors[*vector_index[i]]) : 0.0;
    report.candidates[i] =
        ScoreWithSimilarity(original_tokens, candidates[i], similarity, policy);
  });

  // Selection runs over accepted candidates and maps back to report indices.
  std::vector<ScoredCandidate> accepted;
  std::vector<std::size_t> accepted_at;
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    if (report.candidates[i].verdict == Verdict::kAccepted) {
      accepted.push_back(report.candidates[i]);
      accepted_at.push_back(i);
    }
  }
  if (auto best = SelectBest(accepted)) report.selected_index = accepted_at[*best];
  return report;
}

SelectionReport Paraphrase(std::string_view original, const SamplingParams& params,
                           const SelectionPolicy& policy, const PromptFormat& fmt,
                           const GenerationBackend& backend, const Embedder& embedder) {
  policy.Validate();
  const std::vector<std::string> candidates =
      GenerateCandidates(original, params, fmt, backend);
  return ScoreAndSelect(original, candidates, policy, embedder);
}

void to_json(json& j, const RougeScore& s) {
  j = {{"p", s.precision}, {"r", s.recall}, {"f", s.f_measure}, {"lcs", s.lcs_length}};
}

void from_json(const json& j, RougeScore& s) {
  j.at("p").get_to(s.precision);
  j.at("r").get_to(s.recall);
  j.at("f").get_to(s.f_measure);
  j.at("lcs").get_to(s.lcs_length);
}

void to_json(json& j, const BleuScore& s) {
  j = {{"score", s.score}, {"precisions", s.ngram_precisions}, {"bp", s.brevity_penalty}};
}

void from_json(const json& j, BleuScore& s) {
  j.at("score").get_to(s.score);
  j.at("precisions").get_to(s.ngram_precisions);
  j.at("bp").get_to(s.brevity_penalty);
}

void to_json(json& j, const TokenizationPolicy& p) {
  j = {{"case_fold", p.case_fold}, {"punctuation_mode", ToString(p.punctuation_mode)}};
}

void from_json(const json& j, TokenizationPolicy& p) {
  j.at("case_fold").get_to(p.case_fold);
  const auto mode = ParsePunctuationMode(j.at("punctuation_mode").get<std::string>());
  if (!mode) throw InputError("unknown punctuation_mode in JSON");
  p.punctuation_mode = *mode;
}

void to_json(json& j, const SelectionPolicy& p) {
  j = {
      {"rouge_max", p.rouge_max},
      {"similarity_min", p.similarity_min},
      {"similarity_max", p.similarity_max ? json(*p.similarity_max) : json(nullptr)},
      {"compute_bleu", p.compute_bleu},
      {"tokenization", p.tokenization},
      {"rouge_beta", p.rouge_beta},
      {"bleu", {{"max_n", p.bleu.max_n}, {"smoothing", ToString(p.bleu.smoothing)}}},
  };
}

void from_json(const json& j, SelectionPolicy& p) {
  j.at("rouge_max").get_to(p.rouge_max);
  j.at("similarity_min").get_to(p.similarity_min);
  const json& smax = j.at("similarity_max");
  p.similarity_max = smax.is_null() ? std::nullopt : std::optional<double>(smax.get<double>());
  j.at("compute_bleu").get_to(p.compute_bleu);
  j.at("tokenization").get_to(p.tokenization);
  j.at("rouge_beta").get_to(p.rouge_beta);
  j.at("bleu").at("max_n").get_to(p.bleu.max_n);
  const auto smoothing = ParseBleuSmoothing(j.at("bleu").at("smoothing").get<std::string>());
  if (!smoothing) throw InputError("unknown bleu smoothing in JSON");
  p.bleu.smoothing = *smoothing;
}

void to_json(json& j, const ScoredCandidate& c) {
  j = {
      {"text", c.text},
      {"similarity", c.similarity},
      {"rouge_l", c.rouge_l},
      {"bleu", c.bleu ? json(*c.bleu) : json(nullptr)},
      {"verdict", ToString(c.verdict)},
      {"rejection_detail", c.rejection_detail},
  };
}

void from_json(const json& j, ScoredCandidate& c) {
  j.at("text").get_to(c.text);
  j.at("similarity").get_to(c.similarity);
  j.at("rouge_l").get_to(c.rouge_l);
  const json& bleu = j.at("bleu");
  c.bleu = bleu.is_null() ? std::nullopt : std::optional<BleuScore>(bleu.get<BleuScore>());
  const auto verdict = ParseVerdict(j.at("verdict").get<std::string>());
  if (!verdict) throw InputError("unknown verdict in JSON");
  c.verdict = *verdict;
  j.at("rejection_detail").get_to(c.rejection_detail);
}

void to_json(json& j, const SelectionReport& r) {
  j = {
      {"original", r.original},
      {"candidates", r.candidates},
      {"selected_index", r.selected_index ? json(*r.selected_index) : json(nullptr)},
      {"policy", r.policy},
  };
}

void from_json(const json& j, SelectionReport& r) {
  j.at("original").get_to(r.original);
  j.at("candidates").get_to(r.candidates);
  const json& sel = j.at("selected_index");
  r.selected_index =
      sel.is_null() ? std::nullopt : std::optional<std::size_t>(sel.get<std::size_t>());
  j.at("policy").get_to(r.policy);
}

std::string ToJsonLine(const SelectionReport& report) {
  return json(report).dump(-1, ' ', false, json::error_handler_t::replace);
}

SelectionReport ReportFromJsonLine(std::string_view line) {
  try {
    return json::parse(line).get<SelectionReport>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report line: ") + e.what());
  }
}

}  // namespace parakit
