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

// Conditional prompting of an external text-generation backend.
//
// A prompt is the original text followed by the separator; the backend's
// continuation is the candidate paraphrase. Completions are cut at the end
// marker and at any repeated separator before use.

#ifndef PARAKIT_GENERATION_H_
#define PARAKIT_GENERATION_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parakit/paraphrase_pair.h"

namespace parakit {

struct PromptFormat {
  std::string separator = ">>>>";
  std::string end_of_example = "<|endoftext|>";

  /// Throws InputError if either marker is empty or they contain each other.
  void Validate() const;
};

struct SamplingParams {
  std::size_t n_candidates = 10;
  std::size_t max_new_tokens = 128;
  double temperature = 1.0;
  /// Off by default: plain temperature sampling.
  std::optional<std::size_t> top_k;
  std::optional<std::int64_t> seed;

  void Validate() const;
};

enum class FinishReason { kStopToken, kLength, kEndOfExample };

struct RawCompletion {
  /// Continuation text only; never includes the prompt.
  std::string text;
  FinishReason finish_reason = FinishReason::kLength;
};

/// Infers why a continuation ended from the markers it contains.
FinishReason ClassifyFinish(std::string_view raw, const PromptFormat& fmt);

struct GenerationRequest {
  std::string prompt;
  std::size_t n = 1;
  std::size_t max_tokens = 128;
  double temperature = 1.0;
  std::optional<std::size_t> top_k;
  std::vector<std::string> stop;
  std::optional<std::int64_t> seed;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  /// Returns up to request.n continuations of request.prompt.
  virtual std::vector<std::string> Complete(const GenerationRequest& request) const = 0;
};

enum class BackendKind { kRemote, kStub };

struct BackendConfig {
  BackendKind kind = BackendKind::kRemote;
  std::string endpoint;
  /// Prompt-to-completions fixture; required for kStub.
  std::string stub_fixture;
  std::chrono::milliseconds timeout{60000};
  std::size_t retries = 2;
  std::chrono::milliseconds backoff{200};
  /// Upper bound on concurrent generation requests.
  std::size_t max_concurrency = 4;

  void Validate() const;
};

/// Reads PARAKIT_GEN_URL and, when set, replaces `config.endpoint`.
void ApplyGenEnvOverride(BackendConfig& config);

/// Client for POST {endpoint}/v1/generate. Request fields: prompt, n,
/// max_tokens, temperature, top_k (int or null), stop, seed (int or null);
/// response {"completions": [string, ...]}.
class HttpGenerationBackend final : public GenerationBackend {
 public:
  explicit HttpGenerationBackend(BackendConfig config);
  std::vector<std::string> Complete(const GenerationRequest& request) const override;

 private:
  BackendConfig config_;
};

/// Deterministic backend that answers from a prompt-to-completions table.
/// Unknown prompts get an empty list. At most request.n completions are
/// returned, in table order.
class StubGenerationBackend final : public GenerationBackend {
 public:
  using Table = std::map<std::string, std::vector<std::string>>;
  using Responder = std::function<std::vector<std::string>(const GenerationRequest&)>;

  explicit StubGenerationBackend(Table table);
  explicit StubGenerationBackend(Responder responder);

  /// Reads a JSON object mapping each prompt to an array of completions.
  static StubGenerationBackend FromFile(const std::string& path);

  std::vector<std::string> Complete(const GenerationRequest& request) const override;

 private:
  Responder responder_;
};

std::unique_ptr<GenerationBackend> MakeBackend(const BackendConfig& config);

/// Returns original + " " + separator + " ". Throws InputError when the
/// original is empty or contains the separator.
std::string FormatPrompt(std::string_view original, const PromptFormat& fmt = {});

/// Cuts `raw` at the first end marker, then at the first separator, and
/// trims surrounding whitespace; inner newlines are kept. Returns nullopt
/// when nothing remains.
std::optional<std::string> ParseCompletion(std::string_view raw, const PromptFormat& fmt = {});

GenerationRequest MakeRequest(std::string prompt, const SamplingParams& params,
                              std::vector<std::string> stop);

/// Requests params.n_candidates continuations of the formatted prompt,
/// parses them, drops empty ones and exact duplicates (first appearance
/// wins). May return fewer than requested, including none.
std::vector<std::string> GenerateCandidates(std::string_view original,
                                            const SamplingParams& params,
                                            const PromptFormat& fmt,
                                            const GenerationBackend& backend);

/// Splits an unconditional sample into a pair when it contains exactly one
/// separator and both sides are non-empty after trimming.
std::optional<ParaphrasePair> SplitNaiveSample(std::string_view raw, const PromptFormat& fmt = {});

/// Samples from the empty prompt and keeps completions that look like a
/// single training example.
std::vector<ParaphrasePair> SampleNaive(const SamplingParams& params, const PromptFormat& fmt,
                                   const GenerationBackend& backend);

}  // namespace parakit

#endif  // PARAKIT_GENERATION_H_
