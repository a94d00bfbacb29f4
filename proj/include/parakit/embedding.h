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

// Sentence embeddings behind a provider interface, plus cosine similarity.
//
// Three providers exist: a remote service speaking the JSON embedding
// contract, a deterministic hashed character 3-gram embedder used when no
// service is available, and a fixture embedder that reproduces prescribed
// similarities to an anchor text (for replaying published score tables).

#ifndef PARAKIT_EMBEDDING_H_
#define PARAKIT_EMBEDDING_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parakit {

inline constexpr std::size_t kEmbeddingDim = 512;

/// A 512-dimensional embedding. Providers hand out unit-norm vectors.
struct EmbeddingVector {
  std::array<double, kEmbeddingDim> values{};

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

double Norm(const EmbeddingVector& v);

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Throws InputError on a zero
/// vector.
double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b);

enum class EmbedderKind { kRemote, kFallback, kFixture };

std::string_view ToString(EmbedderKind kind);
std::optional<EmbedderKind> ParseEmbedderKind(std::string_view name);

struct ProviderConfig {
  EmbedderKind kind = EmbedderKind::kFallback;
  /// Base URL of the embedding service; required for kRemote only.
  std::string endpoint;
  /// Score fixture path; required for kFixture only.
  std::string fixture_path;
  std::chrono::milliseconds timeout{10000};
  std::size_t max_batch = 64;
  std::size_t retries = 2;
  /// Upper bound on batches in flight at once (remote only).
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds backoff{100};

  /// Throws InputError if the configuration is inconsistent.
  void Validate() const;
};

/// Reads PARAKIT_EMBED_URL and, when set, replaces `config.endpoint`.
void ApplyEmbedEnvOverride(ProviderConfig& config);

class Embedder {
 public:
  virtual ~Embedder() = default;

  /// One unit-norm vector per text, in input order. Throws InputError for
  /// an empty list or a text that is empty after trimming.
  virtual std::vector<EmbeddingVector> Embed(std::span<const std::string> texts) const = 0;

  virtual EmbedderKind kind() const = 0;
};

/// Hashed character 3-grams: the case-folded text is wrapped in boundary
/// markers, each code-point 3-gram is hashed with 64-bit FNV-1a and adds +1
/// or -1 (top hash bit) to bucket hash % 512, left to right; the sum is
/// L2-normalized. Throws InputError for empty text or a zero accumulation.
EmbeddingVector EmbedFallback(std::string_view text);

std::uint64_t Fnv1a64(std::string_view bytes);

class FallbackEmbedder final : public Embedder {
 public:
  std::vector<EmbeddingVector> Embed(std::span<const std::string> texts) const override;
  EmbedderKind kind() const override { return EmbedderKind::kFallback; }
};

/// Client for POST {endpoint}/v1/embed with body {"texts": [...]} and
/// response {"vectors": [[512 reals], ...]}. Texts are sent in batches of at
/// most `max_batch`, several batches in flight, and reassembled in order.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(ProviderConfig config);

  /// Throws TransportError (with the failing batch index) when a batch
  /// cannot be delivered after the configured retries, and ContractError
  /// for malformed bodies, wrong vector counts or wrong dimensions.
  std::vector<EmbeddingVector> Embed(std::span<const std::string> texts) const override;
  EmbedderKind kind() const override { return EmbedderKind::kRemote; }

 private:
  ProviderConfig config_;
};

/// Places the anchor text on basis vector e0 and the i-th listed text on
/// s_i*e0 + sqrt(1 - s_i^2)*e_{i+1}, so cosine(anchor, text_i) = s_i and the
/// listed texts are mutually orthogonal off the anchor axis. Unlisted texts
/// fall back to EmbedFallback.
class FixtureEmbedder final : public Embedder {
 public:
  struct Entry {
    std::string text;
    double similarity = 0.0;
  };

  FixtureEmbedder(std::string anchor, std::vector<Entry> entries);

  /// Reads {"anchor": "...", "similarities": [{"text": "...",
  /// "similarity": 0.9}, ...]}.
  static FixtureEmbedder FromFile(const std::string& path);

  std::vector<EmbeddingVector> Embed(std::span<const std::string> texts) const override;
  EmbedderKind kind() const override { return EmbedderKind::kFixture; }

 private:
  std::string anchor_;
  std::map<std::string, EmbeddingVector> vectors_;
};

std::unique_ptr<Embedder> MakeEmbedder(const ProviderConfig& config);

/// Convenience wrapper: builds the configured provider and embeds `texts`.
std::vector<EmbeddingVector> Embed(std::span<const std::string> texts,
                                   const ProviderConfig& config);

}  // namespace parakit

#endif  // PARAKIT_EMBEDDING_H_
