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

#include "parakit/generation.h"

#include <cstdlib>
#include <fstream>
#include <set>

#include "http_client.h"
#include "json.hpp"
#include "parakit/error.h"
#include "parakit/unicode.h"

namespace parakit {
namespace {

using nlohmann::json;

std::string_view CutAt(std::string_view s, std::string_view marker) {
  if (marker.empty()) return s;
  const auto pos = s.find(marker);
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

}  // namespace

void PromptFormat::Validate() const {
  if (separator.empty()) throw InputError("prompt separator must be non-empty");
  if (end_of_example.empty()) throw InputError("end-of-example marker must be non-empty");
  if (separator.find(end_of_example) != std::string::npos ||
      end_of_example.find(separator) != std::string::npos) {
    throw InputError("separator and end-of-example marker must not contain each other");
  }
}

void SamplingParams::Validate() const {
  if (n_candidates < 1) throw InputError("n_candidates must be at least 1");
  if (max_new_tokens < 1) throw InputError("max_new_tokens must be at least 1");
  if (!(temperature > 0.0)) throw InputError("temperature must be positive");
  if (top_k && *top_k < 1) throw InputError("top_k must be positive when set");
}

FinishReason ClassifyFinish(std::string_view raw, const PromptFormat& fmt) {
  if (raw.find(fmt.end_of_example) != std::string_view::npos) return FinishReason::kEndOfExample;
  if (raw.find(fmt.separator) != std::string_view::npos) return FinishReason::kStopToken;
  return FinishReason::kLength;
}

void BackendConfig::Validate() const {
  if (max_concurrency < 1) throw InputError("generator max_concurrency must be at least 1");
  if (kind == BackendKind::kRemote && endpoint.empty()) {
    throw InputError("remote generation backend requires an endpoint");
  }
  if (kind == BackendKind::kStub && stub_fixture.empty()) {
    throw InputError("stub generation backend requires a fixture path");
  }
}

void ApplyGenEnvOverride(BackendConfig& config) {
  if (const char* url = std::getenv("PARAKIT_GEN_URL"); url != nullptr && *url != '\0') {
    config.endpoint = url;
  }
}

HttpGenerationBackend::HttpGenerationBackend(BackendConfig config) : config_(std::move(config)) {
  config_.Validate();
  internal::ParseEndpoint(config_.endpoint);
}

std::vector<std::string> HttpGenerationBackend::Complete(const GenerationRequest& request) const {
  json body = {
      {"prompt", request.prompt},
      {"n", request.n},
      {"max_tokens", request.max_tokens},
      {"temperature", request.temperature},
      {"top_k", request.top_k ? json(*request.top_k) : json(nullptr)},
      {"stop", request.stop},
      {"seed", request.seed ? json(*request.seed) : json(nullptr)},
  };
  const internal::RetryPolicy retry{config_.retries, config_.timeout, config_.backoff};
  const std::string text = internal::PostJson(internal::ParseEndpoint(config_.endpoint),
                                              "/v1/generate", body.dump(), retry);
  json response;
  try {
    response = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractError(std::string("generate: malformed JSON: ") + e.what());
  }
  if (!response.is_object() || !response.contains("completions") ||
      !response["completions"].is_array()) {
    throw ContractError("generate: missing 'completions' array");
  }
  std::vector<std::string> out;
  for (const auto& c : response["completions"]) {
    if (!c.is_string()) throw ContractError("generate: non-string completion");
    out.push_back(c.get<std::string>());
  }
  return out;
}

StubGenerationBackend::StubGenerationBackend(Table table)
    : responder_([table = std::move(table)](const GenerationRequest& request) {
        auto it = table.find(request.prompt);
        if (it == table.end()) return std::vector<std::string>{};
        return it->second;
      }) {}

StubGenerationBackend::StubGenerationBackend(Responder responder)
    : responder_(std::move(responder)) {}

StubGenerationBackend StubGenerationBackend::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open generation stub fixture '" + path + "'");
  try {
    const json doc = json::parse(in);
    Table table;
    for (const auto& [prompt, completions] : doc.items()) {
      table[prompt] = completions.get<std::vector<std::string>>();
    }
    return StubGenerationBackend(std::move(table));
  } catch (const json::exception& e) {
    throw InputError("malformed generation stub fixture '" + path + "': " + e.what());
  }
}

std::vector<std::string> StubGenerationBackend::Complete(const GenerationRequest& request) const {
  std::vector<std::string> out = responder_(request);
  if (out.size() > request.n) out.resize(request.n);
  return out;
}

std::unique_ptr<GenerationBackend> MakeBackend(const BackendConfig& config) {
  config.Validate();
  if (config.kind == BackendKind::kStub) {
    return std::make_unique<StubGenerationBackend>(
        StubGenerationBackend::FromFile(config.stub_fixture));
  }
  return std::make_unique<HttpGenerationBackend>(config);
}

std::string FormatPrompt(std::string_view original, const PromptFormat& fmt) {
  fmt.Validate();
  if (unicode::Trim(original).empty()) throw InputError("cannot prompt with an empty original");
  if (original.find(fmt.separator) != std::string_view::npos) {
    throw InputError("original text contains the separator '" + fmt.separator + "'");
  }
  std::string prompt;
  prompt.reserve(original.size() + fmt.separator.size() + 2);
  prompt.append(original).append(" ").append(fmt.separator).append(" ");
  return prompt;
}

std::optional<std::string> ParseCompletion(std::string_view raw, const PromptFormat& fmt) {
  std::string_view cut = CutAt(raw, fmt.end_of_example);
  cut = CutAt(cut, fmt.separator);
  std::string candidate = unicode::Trim(cut);
  if (candidate.empty()) return std::nullopt;
  return candidate;
}

GenerationRequest MakeRequest(std::string prompt, const SamplingParams& params,
                              std::vector<std::string> stop) {
  GenerationRequest request;
  request.prompt = std::move(prompt);
  request.n = params.n_candidates;
  request.max_tokens = params.max_new_tokens;
  request.temperature = params.temperature;
  request.top_k = params.top_k;
  request.stop = std::move(stop);
  request.seed = params.seed;
  return request;
}

std::vector<std::string> GenerateCandidates(std::string_view original,
                                            const SamplingParams& params,
                                            const PromptFormat& fmt,
                                            const GenerationBackend& backend) {
  params.Validate();
  const GenerationRequest request =
      MakeRequest(FormatPrompt(original, fmt), params, {fmt.end_of_example, fmt.separator});
  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const std::string& raw : backend.Complete(request)) {
    auto parsed = ParseCompletion(raw, fmt);
    if (!parsed) continue;
    if (seen.insert(*parsed).second) candidates.push_back(std::move(*parsed));
  }
  return candidates;
}

std::optional<ParaphrasePair> SplitNaiveSample(std::string_view raw, const PromptFormat& fmt) {
  const std::string_view example = CutAt(raw, fmt.end_of_example);
  const auto first = example.find(fmt.separator);
  if (first == std::string_view::npos) return std::nullopt;
  const auto rest = first + fmt.separator.size();
  if (example.find(fmt.separator, rest) != std::string_view::npos) return std::nullopt;
  ParaphrasePair pair;
  pair.original = unicode::Trim(example.substr(0, first));
  pair.paraphrase = unicode::Trim(example.substr(rest));
  if (pair.original.empty() || pair.paraphrase.empty()) return std::nullopt;
  return pair;
}

std::vector<ParaphrasePair> SampleNaive(const SamplingParams& params, const PromptFormat& fmt,
                                        const GenerationBackend& backend) {
  params.Validate();
  fmt.Validate();
  const GenerationRequest request = MakeRequest("", params, {fmt.end_of_example});
  std::vector<ParaphrasePair> pairs;
  for (const std::string& raw : backend.Complete(request)) {
    if (auto pair = SplitNaiveSample(raw, fmt)) pairs.push_back(std::move(*pair));
  }
  return pairs;
}

}  // namespace parakit
