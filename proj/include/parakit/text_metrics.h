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

// Lexical overlap metrics: tokenization, longest common subsequence,
// ROUGE-L and sentence-level BLEU. Everything here is a pure function.

#ifndef PARAKIT_TEXT_METRICS_H_
#define PARAKIT_TEXT_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parakit {

using Token = std::string;
using TokenSequence = std::vector<Token>;

enum class PunctuationMode {
  /// Every maximal run of punctuation inside a word becomes its own token.
  kSeparateTokens,
  /// Punctuation splits words and is discarded.
  kDrop,
  /// Whitespace split only; punctuation stays glued to its word.
  kKeepAttached,
};

std::string_view ToString(PunctuationMode mode);
std::optional<PunctuationMode> ParsePunctuationMode(std::string_view name);

struct TokenizationPolicy {
  bool case_fold = true;
  PunctuationMode punctuation_mode = PunctuationMode::kSeparateTokens;

  friend bool operator==(const TokenizationPolicy&, const TokenizationPolicy&) = default;
};

/// Splits on Unicode whitespace, then applies the punctuation rule and
/// optional case folding. Empty input yields an empty sequence.
TokenSequence Tokenize(std::string_view text, const TokenizationPolicy& policy = {});

/// Length of the longest common subsequence. Two-row dynamic program: time
/// O(|a|*|b|), memory O(min(|a|, |b|)).
std::size_t LcsLength(std::span<const Token> a, std::span<const Token> b);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t lcs_length = 0;

  friend bool operator==(const RougeScore&, const RougeScore&) = default;
};

/// ROUGE-L of `candidate` against `reference`:
///   R = LCS/|reference|, P = LCS/|candidate|,
///   F = (1 + beta^2) P R / (R + beta^2 P).
/// All fields are zero when either side is empty. Throws InputError when
/// beta <= 0.
RougeScore RougeL(std::span<const Token> candidate, std::span<const Token> reference,
                  double beta = 1.0);

enum class BleuSmoothing {
  kNone,
  /// Adds one to both the matched and the total n-gram counts for n >= 2.
  kAddOne,
};

std::string_view ToString(BleuSmoothing smoothing);
std::optional<BleuSmoothing> ParseBleuSmoothing(std::string_view name);

struct BleuOptions {
  int max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::kAddOne;

  friend bool operator==(const BleuOptions&, const BleuOptions&) = default;
};

struct BleuScore {
  double score = 0.0;
  /// Modified (clipped) precision for n = 1..max_n, after smoothing.
  std::vector<double> ngram_precisions;
  double brevity_penalty = 1.0;

  friend bool operator==(const BleuScore&, const BleuScore&) = default;
};

/// Single-reference sentence BLEU. Empty candidate or reference gives a zero
/// score with zero precisions; the brevity penalty is reported as 1 then.
/// Throws InputError when max_n < 1.
BleuScore Bleu(std::span<const Token> candidate, std::span<const Token> reference,
               const BleuOptions& options = {});

using NgramCounts = std::map<std::vector<Token>, std::size_t>;

/// Multiset of the contiguous n-grams of `tokens`; empty when n exceeds the
/// sequence length. Throws InputError when n < 1.
NgramCounts CountNgrams(std::span<const Token> tokens, std::size_t n);

}  // namespace parakit

#endif  // PARAKIT_TEXT_METRICS_H_
