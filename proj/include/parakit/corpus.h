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

// Paraphrase datasets: loading, fine-tuning corpus emission, dataset-level
// score averages and tokenizer calibration against published scores.

#ifndef PARAKIT_CORPUS_H_
#define PARAKIT_CORPUS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parakit/embedding.h"
#include "parakit/generation.h"
#include "parakit/paraphrase_pair.h"
#include "parakit/selector.h"
#include "parakit/text_metrics.h"

namespace parakit {

enum class PairFormat {
  /// Microsoft Research Paraphrase Corpus: a header row, then
  /// Quality<TAB>#1 ID<TAB>#2 ID<TAB>#1 String<TAB>#2 String.
  kMsrTsv,
  /// One {"original": ..., "paraphrase": ...} object per line.
  kJsonl,
};

std::string_view ToString(PairFormat format);
std::optional<PairFormat> ParsePairFormat(std::string_view name);

struct LoadOptions {
  /// MSR only: keep rows labelled 1 (paraphrases). When false every
  /// well-formed row is kept regardless of label.
  bool paraphrases_only = true;
};

struct LoadResult {
  std::vector<ParaphrasePair> pairs;
  /// One message per skipped malformed row.
  std::vector<std::string> warnings;
  /// Data rows seen, excluding the MSR header and blank lines.
  std::size_t rows_read = 0;
};

/// Throws IoError for an unreadable file and EmptyDatasetError when no
/// valid row remains.
LoadResult LoadPairs(const std::string& path, PairFormat format, const LoadOptions& options = {});
LoadResult ParsePairs(std::string_view content, PairFormat format, const LoadOptions& options = {});

struct TrainFileResult {
  std::size_t written = 0;
  std::vector<std::string> warnings;
};

/// Serializes one example per pair:
///   original + " " + separator + " " + paraphrase + end_of_example + "\n"
/// Pairs containing either marker are skipped with a warning. Throws
/// InputError when nothing is writable and IoError when `out_path` cannot
/// be written.
TrainFileResult BuildTrainFile(std::span<const ParaphrasePair> pairs, const PromptFormat& fmt,
                               const std::string& out_path);

/// The in-memory form of BuildTrainFile.
TrainFileResult RenderTrainExamples(std::span<const ParaphrasePair> pairs,
                                    const PromptFormat& fmt, std::string& out);

/// Inverse of RenderTrainExamples. Throws InputError on content that is not
/// a sequence of well-formed examples.
std::vector<ParaphrasePair> ParseTrainExamples(std::string_view content, const PromptFormat& fmt);

struct DatasetStats {
  std::size_t n_pairs = 0;
  double mean_similarity = 0.0;
  double mean_rouge_l = 0.0;
  double mean_bleu = 0.0;
  EmbedderKind embedder_kind = EmbedderKind::kFallback;
};

/// Scores every pair with the paraphrase as candidate and the original as
/// reference and averages the three scores. Means are summed in sorted
/// order, so they do not depend on dataset order. Throws InputError for an
/// empty dataset.
DatasetStats ComputeDatasetStats(std::span<const ParaphrasePair> pairs,
                                 const SelectionPolicy& policy, const Embedder& embedder);

void to_json(nlohmann::json& j, const DatasetStats& s);

struct CalibrationFixture {
  std::string candidate;
  std::string reference;
  double published_rouge_l = 0.0;
  double published_bleu = 0.0;
};

/// The four sentence pairs with published ROUGE-L and BLEU scores used to
/// calibrate the tokenizer.
std::vector<CalibrationFixture> DefaultCalibrationFixtures();

/// JSONL with candidate, reference, rouge_l and bleu fields.
std::vector<CalibrationFixture> LoadCalibrationFixtures(const std::string& path);

struct CalibrationSetting {
  TokenizationPolicy tokenization;
  double rouge_beta = 1.0;
  BleuSmoothing smoothing = BleuSmoothing::kAddOne;
};

struct CalibrationEntry {
  CalibrationSetting setting;
  std::vector<double> rouge_l;
  std::vector<double> bleu;
  double rouge_mae = 0.0;
  double bleu_mae = 0.0;
  /// Mean of the two errors; the quantity minimized for `best`.
  double combined_mae = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationEntry> entries;
  /// Indices into `entries`; the first minimum in enumeration order wins.
  std::size_t best = 0;
  std::size_t best_rouge = 0;
  std::size_t best_bleu = 0;
};

/// Enumerates case folding x punctuation mode x beta in {1} x smoothing in
/// {add_one, none}, in that nesting order, and reports mean absolute errors.
/// Throws InputError for an empty fixture list.
CalibrationReport CalibrateTokenization(std::span<const CalibrationFixture> fixtures,
                                        int max_n = 4);

void to_json(nlohmann::json& j, const CalibrationReport& r);

}  // namespace parakit

#endif  // PARAKIT_CORPUS_H_
