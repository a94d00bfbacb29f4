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

#include "parakit/text_metrics.h"

#include <algorithm>
#include <cmath>

#include "parakit/error.h"
#include "parakit/unicode.h"

namespace parakit {

std::string_view ToString(PunctuationMode mode) {
  switch (mode) {
    case PunctuationMode::kSeparateTokens:
      return "separate_tokens";
    case PunctuationMode::kDrop:
      return "drop";
    case PunctuationMode::kKeepAttached:
      return "keep_attached";
  }
  return "separate_tokens";
}

std::optional<PunctuationMode> ParsePunctuationMode(std::string_view name) {
  if (name == "separate_tokens") return PunctuationMode::kSeparateTokens;
  if (name == "drop") return PunctuationMode::kDrop;
  if (name == "keep_attached") return PunctuationMode::kKeepAttached;
  return std::nullopt;
}

std::string_view ToString(BleuSmoothing smoothing) {
  return smoothing == BleuSmoothing::kAddOne ? "add_one" : "none";
}

std::optional<BleuSmoothing> ParseBleuSmoothing(std::string_view name) {
  if (name == "add_one") return BleuSmoothing::kAddOne;
  if (name == "none") return BleuSmoothing::kNone;
  return std::nullopt;
}

TokenSequence Tokenize(std::string_view text, const TokenizationPolicy& policy) {
  TokenSequence tokens;
  std::string current;
  // Tracks whether `current` holds punctuation (separate_tokens mode only).
  bool current_is_punct = false;

  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  for (char32_t cp : unicode::Decode(text)) {
    if (unicode::IsSpace(cp)) {
      flush();
      continue;
    }
    if (policy.case_fold) cp = unicode::FoldCase(cp);
    const bool punct = unicode::IsPunct(cp);
    switch (policy.punctuation_mode) {
      case PunctuationMode::kKeepAttached:
        break;
      case PunctuationMode::kDrop:
        if (punct) {
          flush();
          continue;
        }
        break;
      case PunctuationMode::kSeparateTokens:
        if (!current.empty() && punct != current_is_punct) flush();
        current_is_punct = punct;
        break;
    }
    unicode::AppendUtf8(current, cp);
  }
  flush();
  return tokens;
}

std::size_t LcsLength(std::span<const Token> a, std::span<const Token> b) {
  // Keep the shorter sequence on the inner dimension.
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (const Token& x : a) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      cur[j + 1] = (x == b[j]) ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(std::span<const Token> candidate, std::span<const Token> reference,
                  double beta) {
  if (!(beta > 0.0)) throw InputError("ROUGE-L beta must be positive");
  RougeScore score;
  if (candidate.empty() || reference.empty()) return score;
  score.lcs_length = LcsLength(candidate, reference);
  if (score.lcs_length == 0) return score;
  const auto lcs = static_cast<double>(score.lcs_length);
  score.precision = lcs / static_cast<double>(candidate.size());
  score.recall = lcs / static_cast<double>(reference.size());
  const double beta2 = beta * beta;
  score.f_measure = (1.0 + beta2) * score.precision * score.recall /
                    (score.recall + beta2 * score.precision);
  score.f_measure = std::clamp(score.f_measure, 0.0, 1.0);
  return score;
}

NgramCounts CountNgrams(std::span<const Token> tokens, std::size_t n) {
  if (n < 1) throw InputError("n-gram order must be at least 1");
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<Token>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

BleuScore Bleu(std::span<const Token> candidate, std::span<const Token> reference,
               const BleuOptions& options) {
  if (options.max_n < 1) throw InputError("BLEU max_n must be at least 1");
  const auto max_n = static_cast<std::size_t>(options.max_n);
  BleuScore result;
  result.ngram_precisions.assign(max_n, 0.0);
  if (candidate.empty() || reference.empty()) return result;

  double log_sum = 0.0;
  bool any_zero = false;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const NgramCounts cand = CountNgrams(candidate, n);
    const NgramCounts ref = CountNgrams(reference, n);
    std::size_t matched = 0;
    std::size_t total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (auto it = ref.find(gram); it != ref.end()) matched += std::min(count, it->second);
    }
    double precision = 0.0;
    if (n >= 2 && options.smoothing == BleuSmoothing::kAddOne) {
      precision = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
    } else if (total > 0) {
      precision = static_cast<double>(matched) / static_cast<double>(total);
    }
    result.ngram_precisions[n - 1] = precision;
    if (precision <= 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(precision);
    }
  }

  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  result.brevity_penalty = c < r ? std::exp(1.0 - r / c) : 1.0;
  if (any_zero) return result;
  const double geometric_mean = std::exp(log_sum / static_cast<double>(max_n));
  result.score = std::clamp(result.brevity_penalty * geometric_mean, 0.0, 1.0);
  return result;
}

}  // namespace parakit
