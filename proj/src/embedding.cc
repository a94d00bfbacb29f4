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

#include "parakit/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "http_client.h"
#include "json.hpp"
#include "parakit/error.h"
#include "parakit/unicode.h"
#include "parallel.h"

namespace parakit {
namespace {

using nlohmann::json;

constexpr char32_t kBeginMarker = 0x02;
constexpr char32_t kEndMarker = 0x03;

void ValidateTexts(std::span<const std::string> texts) {
  if (texts.empty()) throw InputError("embed: no texts given");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (unicode::Trim(texts[i]).empty()) {
      throw InputError("embed: text " + std::to_string(i) + " is empty");
    }
  }
}

// Scales `v` to unit length; returns false for the zero vector.
bool Normalize(EmbeddingVector& v) {
  const double norm = Norm(v);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (double& x : v.values) x /= norm;
  return true;
}

}  // namespace

double Norm(const EmbeddingVector& v) {
  double sum = 0.0;
  for (double x : v.values) sum += x * x;
  return std::sqrt(sum);
}

double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    dot += a.values[i] * b.values[i];
    aa += a.values[i] * a.values[i];
    bb += b.values[i] * b.values[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) throw InputError("cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

std::string_view ToString(EmbedderKind kind) {
  switch (kind) {
    case EmbedderKind::kRemote:
      return "remote";
    case EmbedderKind::kFallback:
      return "fallback";
    case EmbedderKind::kFixture:
      return "fixture";
  }
  return "fallback";
}

std::optional<EmbedderKind> ParseEmbedderKind(std::string_view name) {
  if (name == "remote") return EmbedderKind::kRemote;
  if (name == "fallback") return EmbedderKind::kFallback;
  if (name == "fixture") return EmbedderKind::kFixture;
  return std::nullopt;
}

void ProviderConfig::Validate() const {
  if (max_batch < 1) throw InputError("embedder max_batch must be at least 1");
  if (max_in_flight < 1) throw InputError("embedder max_in_flight must be at least 1");
  if ((kind == EmbedderKind::kRemote) != !endpoint.empty()) {
    throw InputError(kind == EmbedderKind::kRemote
                         ? "remote embedder requires an endpoint"
                         : "embedder endpoint is only valid for the remote provider");
  }
  if (kind == EmbedderKind::kFixture && fixture_path.empty()) {
    throw InputError("fixture embedder requires a fixture path");
  }
}

void ApplyEmbedEnvOverride(ProviderConfig& config) {
  if (const char* url = std::getenv("PARAKIT_EMBED_URL"); url != nullptr && *url != '\0') {
    config.endpoint = url;
  }
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

EmbeddingVector EmbedFallback(std::string_view text) {
  if (text.empty()) throw InputError("fallback embedder: empty text");
  std::u32string cps;
  cps.push_back(kBeginMarker);
  for (char32_t cp : unicode::Decode(text)) cps.push_back(unicode::FoldCase(cp));
  cps.push_back(kEndMarker);

  EmbeddingVector v;
  std::string gram;
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    gram.clear();
    for (std::size_t k = i; k < i + 3; ++k) unicode::AppendUtf8(gram, cps[k]);
    const std::uint64_t h = Fnv1a64(gram);
    v.values[h % kEmbeddingDim] += (h >> 63) != 0 ? -1.0 : 1.0;
  }
  if (!Normalize(v)) {
    throw InputError("fallback embedder: text hashes to the zero vector");
  }
  return v;
}

std::vector<EmbeddingVector> FallbackEmbedder::Embed(std::span<const std::string> texts) const {
  ValidateTexts(texts);
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EmbedFallback(t));
  return out;
}

RemoteEmbedder::RemoteEmbedder(ProviderConfig config) : config_(std::move(config)) {
  config_.Validate();
  // Fail on a malformed URL at construction rather than on first use.
  internal::ParseEndpoint(config_.endpoint);
}

std::vector<EmbeddingVector> RemoteEmbedder::Embed(std::span<const std::string> texts) const {
  ValidateTexts(texts);
  const internal::HttpTarget target = internal::ParseEndpoint(config_.endpoint);
  const internal::RetryPolicy retry{config_.retries, config_.timeout, config_.backoff};
  const std::size_t n_batches = (texts.size() + config_.max_batch - 1) / config_.max_batch;

  std::vector<EmbeddingVector> out(texts.size());
  internal::ParallelFor(n_batches, config_.max_in_flight, [&](std::size_t b) {
    const std::size_t begin = b * config_.max_batch;
    const std::size_t end = std::min(texts.size(), begin + config_.max_batch);
    json request = {{"texts", json::array()}};
    for (std::size_t i = begin; i < end; ++i) request["texts"].push_back(texts[i]);

    const std::string body = internal::PostJson(target, "/v1/embed", request.dump(), retry, b);

    json response;
    try {
      response = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ContractError("embed batch " + std::to_string(b) + ": malformed JSON: " + e.what());
    }
    if (!response.is_object() || !response.contains("vectors") ||
        !response["vectors"].is_array()) {
      throw ContractError("embed batch " + std::to_string(b) + ": missing 'vectors' array");
    }
    const json& vectors = response["vectors"];
    if (vectors.size() != end - begin) {
      throw ContractError("embed batch " + std::to_string(b) + ": expected " +
                          std::to_string(end - begin) + " vectors, got " +
                          std::to_string(vectors.size()));
    }
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      const json& row = vectors[k];
      if (!row.is_array() || row.size() != kEmbeddingDim) {
        throw ContractError("embed batch " + std::to_string(b) + ": vector " +
                            std::to_string(k) + " has dimension " +
                            std::to_string(row.is_array() ? row.size() : 0) + ", expected " +
                            std::to_string(kEmbeddingDim));
      }
      EmbeddingVector& v = out[begin + k];
      for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
        if (!row[d].is_number()) {
          throw ContractError("embed batch " + std::to_string(b) + ": non-numeric component");
        }
        v.values[d] = row[d].get<double>();
      }
      if (!Normalize(v)) {
        throw ContractError("embed batch " + std::to_string(b) + ": zero vector returned");
      }
    }
  });
  return out;
}

FixtureEmbedder::FixtureEmbedder(std::string anchor, std::vector<Entry> entries)
    : anchor_(std::move(anchor)) {
  if (entries.size() + 1 > kEmbeddingDim) {
    throw InputError("fixture embedder supports at most 511 entries");
  }
  EmbeddingVector anchor_vec;
  anchor_vec.values[0] = 1.0;
  vectors_[anchor_] = anchor_vec;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double s = entries[i].similarity;
    if (!(s >= -1.0 && s <= 1.0)) {
      throw InputError("fixture similarity out of [-1, 1] for '" + entries[i].text + "'");
    }
    if (entries[i].text == anchor_) throw InputError("fixture lists the anchor text");
    EmbeddingVector v;
    v.values[0] = s;
    v.values[i + 1] = std::sqrt(std::max(0.0, 1.0 - s * s));
    vectors_.insert_or_assign(entries[i].text, v);
  }
}

FixtureEmbedder FixtureEmbedder::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding fixture '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
    std::vector<Entry> entries;
    for (const auto& e : doc.at("similarities")) {
      entries.push_back({e.at("text").get<std::string>(), e.at("similarity").get<double>()});
    }
    return FixtureEmbedder(doc.at("anchor").get<std::string>(), std::move(entries));
  } catch (const json::exception& e) {
    throw InputError("malformed embedding fixture '" + path + "': " + e.what());
  }
}

std::vector<EmbeddingVector> FixtureEmbedder::Embed(std::span<const std::string> texts) const {
  ValidateTexts(texts);
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (auto it = vectors_.find(t); it != vectors_.end()) {
      out.push_back(it->second);
    } else {
      out.push_back(EmbedFallback(t));
    }
  }
  return out;
}

std::unique_ptr<Embedder> MakeEmbedder(const ProviderConfig& config) {
  config.Validate();
  switch (config.kind) {
    case EmbedderKind::kRemote:
      return std::make_unique<RemoteEmbedder>(config);
    case EmbedderKind::kFixture:
      return std::make_unique<FixtureEmbedder>(FixtureEmbedder::FromFile(config.fixture_path));
    case EmbedderKind::kFallback:
      break;
  }
  return std::make_unique<FallbackEmbedder>();
}

std::vector<EmbeddingVector> Embed(std::span<const std::string> texts,
                                   const ProviderConfig& config) {
  return MakeEmbedder(config)->Embed(texts);
}

}  // namespace parakit
