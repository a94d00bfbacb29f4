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

#include "parakit/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "parakit/error.h"
#include "parakit/unicode.h"
#include "parallel.h"

namespace parakit {
namespace {

using nlohmann::json;

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    const auto end = content.find('\n', start);
    std::string_view line = content.substr(start, end == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find('\t', start);
    fields.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                      : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buffer.str();
}

bool IsBlank(std::string_view line) { return unicode::Trim(line).empty(); }

void ParseMsr(std::string_view content, const LoadOptions& options, LoadResult& result) {
  bool header_seen = false;
  const auto lines = SplitLines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (IsBlank(line)) continue;
    const auto fields = SplitTabs(line);
    if (!header_seen) {
      header_seen = true;
      if (fields[0] != "0" && fields[0] != "1") continue;
    }
    ++result.rows_read;
    const std::string where = "line " + std::to_string(i + 1);
    if (fields.size() != 5) {
      result.warnings.push_back(where + ": expected 5 tab-separated fields, got " +
                                std::to_string(fields.size()));
      continue;
    }
    if (fields[0] != "0" && fields[0] != "1") {
      result.warnings.push_back(where + ": quality must be 0 or 1");
      continue;
    }
    if (!unicode::IsValidUtf8(line)) {
      result.warnings.push_back(where + ": invalid UTF-8");
      continue;
    }
    ParaphrasePair pair{unicode::Trim(fields[3]), unicode::Trim(fields[4]),
                        std::string(fields[1]) + ":" + std::string(fields[2])};
    if (pair.original.empty() || pair.paraphrase.empty()) {
      result.warnings.push_back(where + ": empty sentence");
      continue;
    }
    if (options.paraphrases_only && fields[0] != "1") continue;
    result.pairs.push_back(std::move(pair));
  }
}

void ParseJsonl(std::string_view content, LoadResult& result) {
  const auto lines = SplitLines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    ++result.rows_read;
    const std::string where = "line " + std::to_string(i + 1);
    json row;
    try {
      row = json::parse(lines[i]);
    } catch (const json::parse_error&) {
      result.warnings.push_back(where + ": not valid JSON");
      continue;
    }
    if (!row.is_object() || !row.contains("original") || !row.contains("paraphrase") ||
        !row["original"].is_string() || !row["paraphrase"].is_string()) {
      result.warnings.push_back(where + ": needs string fields 'original' and 'paraphrase'");
      continue;
    }
    ParaphrasePair pair{unicode::Trim(row["original"].get<std::string>()),
                        unicode::Trim(row["paraphrase"].get<std::string>()), std::nullopt};
    if (pair.original.empty() || pair.paraphrase.empty()) {
      result.warnings.push_back(where + ": empty text");
      continue;
    }
    if (row.contains("source_id") && row["source_id"].is_string()) {
      pair.source_id = row["source_id"].get<std::string>();
    }
    result.pairs.push_back(std::move(pair));
  }
}

bool Contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

// Sum in ascending order so the result is independent of input order.
double SortedMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string_view ToString(PairFormat format) {
  return format == PairFormat::kMsrTsv ? "msr_tsv" : "jsonl";
}

std::optional<PairFormat> ParsePairFormat(std::string_view name) {
  if (name == "msr_tsv") return PairFormat::kMsrTsv;
  if (name == "jsonl") return PairFormat::kJsonl;
  return std::nullopt;
}

LoadResult ParsePairs(std::string_view content, PairFormat format, const LoadOptions& options) {
  // UTF-8 byte order mark.
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  LoadResult result;
  if (format == PairFormat::kMsrTsv) {
    ParseMsr(content, options, result);
  } else {
    ParseJsonl(content, result);
  }
  if (result.pairs.empty()) throw EmptyDatasetError("dataset has no valid paraphrase pairs");
  return result;
}

LoadResult LoadPairs(const std::string& path, PairFormat format, const LoadOptions& options) {
  const std::string content = ReadFile(path);
  try {
    return ParsePairs(content, format, options);
  } catch (const EmptyDatasetError&) {
    throw EmptyDatasetError("'" + path + "' has no valid paraphrase pairs");
  }
}

TrainFileResult RenderTrainExamples(std::span<const ParaphrasePair> pairs,
                                    const PromptFormat& fmt, std::string& out) {
  fmt.Validate();
  TrainFileResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const ParaphrasePair& p = pairs[i];
    const std::string where = "pair " + std::to_string(i);
    if (p.original.empty() || p.paraphrase.empty()) {
      result.warnings.push_back(where + ": empty text");
      continue;
    }
    if (Contains(p.original, fmt.separator) || Contains(p.paraphrase, fmt.separator) ||
        Contains(p.original, fmt.end_of_example) || Contains(p.paraphrase, fmt.end_of_example)) {
      result.warnings.push_back(where + ": contains the separator or end-of-example marker");
      continue;
    }
    out.append(p.original)
        .append(" ")
        .append(fmt.separator)
        .append(" ")
        .append(p.paraphrase)
        .append(fmt.end_of_example)
        .append("\n");
    ++result.written;
  }
  return result;
}

TrainFileResult BuildTrainFile(std::span<const ParaphrasePair> pairs, const PromptFormat& fmt,
                               const std::string& out_path) {
  std::string content;
  TrainFileResult result = RenderTrainExamples(pairs, fmt, content);
  if (result.written == 0) throw InputError("no writable pairs for the training file");
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing '" + out_path + "'");
  return result;
}

std::vector<ParaphrasePair> ParseTrainExamples(std::string_view content, const PromptFormat& fmt) {
  fmt.Validate();
  const std::string terminator = fmt.end_of_example + "\n";
  const std::string joint = " " + fmt.separator + " ";
  std::vector<ParaphrasePair> pairs;
  while (!content.empty()) {
    const auto end = content.find(terminator);
    if (end == std::string_view::npos) {
      throw InputError("training example " + std::to_string(pairs.size()) +
                       " is not terminated by the end-of-example marker");
    }
    const std::string_view example = content.substr(0, end);
    content.remove_prefix(end + terminator.size());
    const auto sep = example.find(fmt.separator);
    if (sep == std::string_view::npos || sep == 0 || example[sep - 1] != ' ' ||
        sep + fmt.separator.size() >= example.size() ||
        example[sep + fmt.separator.size()] != ' ') {
      throw InputError("training example " + std::to_string(pairs.size()) +
                       " lacks ' " + fmt.separator + " '");
    }
    pairs.push_back({std::string(example.substr(0, sep - 1)),
                     std::string(example.substr(sep + fmt.separator.size() + 1)), std::nullopt});
  }
  return pairs;
}

DatasetStats ComputeDatasetStats(std::span<const ParaphrasePair> pairs,
                                 const SelectionPolicy& policy, const Embedder& embedder) {
  policy.Validate();
  if (pairs.empty()) throw InputError("dataset statistics need at least one pair");

  std::vector<std::string> texts;
  texts.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    texts.push_back(p.original);
    texts.push_back(p.paraphrase);
  }
  const std::vector<EmbeddingVector> vectors = embedder.Embed(texts);

  std::vector<double> similarity(pairs.size());
  std::vector<double> rouge(pairs.size());
  std::vector<double> bleu(pairs.size());
  internal::ParallelFor(pairs.size(), internal::DefaultWorkers(), [&](std::size_t i) {
    const TokenSequence reference = Tokenize(pairs[i].original, policy.tokenization);
    const TokenSequence candidate = Tokenize(pairs[i].paraphrase, policy.tokenization);
    similarity[i] = CosineSimilarity(vectors[2 * i], vectors[2 * i + 1]);
    rouge[i] = RougeL(candidate, reference, policy.rouge_beta).f_measure;
    bleu[i] = Bleu(candidate, reference, policy.bleu).score;
  });

  DatasetStats stats;
  stats.n_pairs = pairs.size();
  stats.mean_similarity = SortedMean(std::move(similarity));
  stats.mean_rouge_l = SortedMean(std::move(rouge));
  stats.mean_bleu = SortedMean(std::move(bleu));
  stats.embedder_kind = embedder.kind();
  return stats;
}

void to_json(json& j, const DatasetStats& s) {
  j = {
      {"n_pairs", s.n_pairs},
      {"mean_similarity", s.mean_similarity},
      {"mean_rouge_l", s.mean_rouge_l},
      {"mean_bleu", s.mean_bleu},
      {"embedder_kind", ToString(s.embedder_kind)},
  };
}

std::vector<CalibrationFixture> DefaultCalibrationFixtures() {
  return {
      {"In 90 seconds, a prisoner can asphyxiate himself and be brain dead after eight minutes "
       "or so.",
       "A prisoner can asphyxiate himself in 90 seconds and, after eight minutes or so, he will "
       "be brain dead.",
       0.4706, 0.4730},
      {"It is a carved-off space, up a couple of flights of stairs, to the other side of the "
       "restaurant, dominated by fake bare-brick columns, fake wood floors and an air of foetid "
       "despondency.",
       "The restaurant is a carved-off space up a couple of stairs to one side, dominated by "
       "faux bare-brick columns, faux-wood floors and an air of foetid despondency.",
       0.5000, 0.5348},
      {"He signed a bill that made the problem worse and he wants to admit it.",
       "I signed a bill that made the problem worse, and I want to admit it, he said.", 0.4667,
       0.5299},
      {"The document says the damage to the wing provided a pathway for hot gases to penetrate "
       "Columbia's thermal armour during its fatal re-entry.",
       "It said the damage to the wing provided a pathway for hot gasses to penetrate the ship's "
       "thermal armor during Columbia's ill-fated reentry.",
       0.4545, 0.5445},
  };
}

std::vector<CalibrationFixture> LoadCalibrationFixtures(const std::string& path) {
  const std::string content = ReadFile(path);
  std::vector<CalibrationFixture> fixtures;
  const auto lines = SplitLines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    try {
      const json row = json::parse(lines[i]);
      fixtures.push_back({row.at("candidate").get<std::string>(),
                          row.at("reference").get<std::string>(),
                          row.at("rouge_l").get<double>(), row.at("bleu").get<double>()});
    } catch (const json::exception& e) {
      throw InputError("'" + path + "' line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (fixtures.empty()) throw EmptyDatasetError("'" + path + "' has no calibration fixtures");
  return fixtures;
}

CalibrationReport CalibrateTokenization(std::span<const CalibrationFixture> fixtures,
                                        int max_n) {
  if (fixtures.empty()) throw InputError("calibration needs at least one fixture");
  CalibrationReport report;
  const auto n = static_cast<double>(fixtures.size());
  for (bool case_fold : {true, false}) {
    for (PunctuationMode mode : {PunctuationMode::kSeparateTokens, PunctuationMode::kDrop,
                                 PunctuationMode::kKeepAttached}) {
      for (double beta : {1.0}) {
        for (BleuSmoothing smoothing : {BleuSmoothing::kAddOne, BleuSmoothing::kNone}) {
          CalibrationEntry entry;
          entry.setting = {{case_fold, mode}, beta, smoothing};
          for (const auto& f : fixtures) {
            const TokenSequence cand = Tokenize(f.candidate, entry.setting.tokenization);
            const TokenSequence ref = Tokenize(f.reference, entry.setting.tokenization);
            const double r = RougeL(cand, ref, beta).f_measure;
            const double b = Bleu(cand, ref, {max_n, smoothing}).score;
            entry.rouge_l.push_back(r);
            entry.bleu.push_back(b);
            entry.rouge_mae += std::abs(r - f.published_rouge_l) / n;
            entry.bleu_mae += std::abs(b - f.published_bleu) / n;
          }
          entry.combined_mae = 0.5 * (entry.rouge_mae + entry.bleu_mae);
          report.entries.push_back(std::move(entry));
        }
      }
    }
  }
  auto argmin = [&](auto key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
      if (key(report.entries[i]) < key(report.entries[best])) best = i;
    }
    return best;
  };
  report.best = argmin([](const CalibrationEntry& e) { return e.combined_mae; });
  report.best_rouge = argmin([](const CalibrationEntry& e) { return e.rouge_mae; });
  report.best_bleu = argmin([](const CalibrationEntry& e) { return e.bleu_mae; });
  return report;
}

void to_json(json& j, const CalibrationReport& r) {
  auto setting_json = [](const CalibrationEntry& e) {
    return json{{"case_fold", e.setting.tokenization.case_fold},
                {"punctuation_mode", ToString(e.setting.tokenization.punctuation_mode)},
                {"rouge_beta", e.setting.rouge_beta},
                {"smoothing", ToString(e.setting.smoothing)}};
  };
  json entries = json::array();
  for (const auto& e : r.entries) {
    json row = setting_json(e);
    row["rouge_l"] = e.rouge_l;
    row["bleu"] = e.bleu;
    row["rouge_mae"] = e.rouge_mae;
    row["bleu_mae"] = e.bleu_mae;
    row["combined_mae"] = e.combined_mae;
    entries.push_back(std::move(row));
  }
  j = {{"entries", entries},
       {"best", r.best},
       {"best_rouge", r.best_rouge},
       {"best_bleu", r.best_bleu}};
}

}  // namespace parakit
