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

#include "parakit/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "parakit/error.h"
#include "parakit/unicode.h"

namespace parakit {
namespace {

using nlohmann::json;

[[noreturn]] void BadValue(std::string_view key, std::string_view value, std::string_view want) {
  throw InputError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) +
                   "' as " + std::string(want));
}

double ParseDouble(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) BadValue(key, v, "a number");
  return out;
}

template <typename Int>
Int ParseInt(std::string_view key, std::string_view v) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) BadValue(key, v, "an integer");
  return out;
}

bool ParseBool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  BadValue(key, v, "true or false");
}

bool IsNone(std::string_view v) { return v == "none" || v.empty(); }

std::string FormatDouble(double v) { return json(v).dump(); }

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

std::string Unquote(std::string_view v, std::string_view source, std::size_t line) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') return std::string(v);
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] != '\\') {
      out += v[i];
      continue;
    }
    if (i + 2 >= v.size()) {
      throw InputError(std::string(source) + ":" + std::to_string(line) + ": dangling escape");
    }
    switch (v[++i]) {
      case 'n':
        out += '\n';
        break;
      case 't':
        out += '\t';
        break;
      case '"':
        out += '"';
        break;
      case '\\':
        out += '\\';
        break;
      default:
        throw InputError(std::string(source) + ":" + std::to_string(line) +
                         ": unknown escape");
    }
  }
  return out;
}

using Setter = std::function<void(AppConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const AppConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
  bool is_string = false;
};

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    auto add = [&](std::string key, Setter set, Getter get, bool is_string = false) {
      f.push_back({std::move(key), std::move(set), std::move(get), is_string});
    };

    // Selection policy.
    add("rouge_max",
        [](AppConfig& c, auto k, auto v) { c.policy.rouge_max = ParseDouble(k, v); },
        [](const AppConfig& c) { return FormatDouble(c.policy.rouge_max); });
    add("similarity_min",
        [](AppConfig& c, auto k, auto v) { c.policy.similarity_min = ParseDouble(k, v); },
        [](const AppConfig& c) { return FormatDouble(c.policy.similarity_min); });
    add("similarity_max",
        [](AppConfig& c, auto k, auto v) {
          c.policy.similarity_max =
              IsNone(v) ? std::nullopt : std::optional<double>(ParseDouble(k, v));
        },
        [](const AppConfig& c) {
          return c.policy.similarity_max ? FormatDouble(*c.policy.similarity_max)
                                         : std::string("none");
        });
    add("compute_bleu",
        [](AppConfig& c, auto k, auto v) { c.policy.compute_bleu = ParseBool(k, v); },
        [](const AppConfig& c) { return std::string(c.policy.compute_bleu ? "true" : "false"); });
    add("case_fold",
        [](AppConfig& c, auto k, auto v) { c.policy.tokenization.case_fold = ParseBool(k, v); },
        [](const AppConfig& c) {
          return std::string(c.policy.tokenization.case_fold ? "true" : "false");
        });
    add("punctuation_mode",
        [](AppConfig& c, auto k, auto v) {
          auto mode = ParsePunctuationMode(v);
          if (!mode) BadValue(k, v, "separate_tokens, drop or keep_attached");
          c.policy.tokenization.punctuation_mode = *mode;
        },
        [](const AppConfig& c) {
          return std::string(ToString(c.policy.tokenization.punctuation_mode));
        },
        true);
    add("rouge_beta",
        [](AppConfig& c, auto k, auto v) { c.policy.rouge_beta = ParseDouble(k, v); },
        [](const AppConfig& c) { return FormatDouble(c.policy.rouge_beta); });
    add("bleu_max_n",
        [](AppConfig& c, auto k, auto v) { c.policy.bleu.max_n = ParseInt<int>(k, v); },
        [](const AppConfig& c) { return std::to_string(c.policy.bleu.max_n); });
    add("bleu_smoothing",
        [](AppConfig& c, auto k, auto v) {
          auto s = ParseBleuSmoothing(v);
          if (!s) BadValue(k, v, "add_one or none");
          c.policy.bleu.smoothing = *s;
        },
        [](const AppConfig& c) { return std::string(ToString(c.policy.bleu.smoothing)); },
        true);

    // Prompt format.
    add("separator", [](AppConfig& c, auto, auto v) { c.fmt.separator = std::string(v); },
        [](const AppConfig& c) { return c.fmt.separator; }, true);
    add("end_of_example",
        [](AppConfig& c, auto, auto v) { c.fmt.end_of_example = std::string(v); },
        [](const AppConfig& c) { return c.fmt.end_of_example; }, true);

    // Sampling.
    add("n_candidates",
        [](AppConfig& c, auto k, auto v) { c.sampling.n_candidates = ParseInt<std::size_t>(k, v); },
        [](const AppConfig& c) { return std::to_string(c.sampling.n_candidates); });
    add("max_new_tokens",
        [](AppConfig& c, auto k, auto v) {
          c.sampling.max_new_tokens = ParseInt<std::size_t>(k, v);
        },
        [](const AppConfig& c) { return std::to_string(c.sampling.max_new_tokens); });
    add("temperature",
        [](AppConfig& c, auto k, auto v) { c.sampling.temperature = ParseDouble(k, v); },
        [](const AppConfig& c) { return FormatDouble(c.sampling.temperature); });
    add("top_k",
        [](AppConfig& c, auto k, auto v) {
          c.sampling.top_k =
              IsNone(v) ? std::nullopt : std::optional<std::size_t>(ParseInt<std::size_t>(k, v));
        },
        [](const AppConfig& c) {
          return c.sampling.top_k ? std::to_string(*c.sampling.top_k) : std::string("none");
        });
    add("seed",
        [](AppConfig& c, auto k, auto v) {
          c.sampling.seed = IsNone(v)
                                ? std::nullopt
                                : std::optional<std::int64_t>(ParseInt<std::int64_t>(k, v));
        },
        [](const AppConfig& c) {
          return c.sampling.seed ? std::to_string(*c.sampling.seed) : std::string("none");
        });

    // Embedding provider.
    add("embedder",
        [](AppConfig& c, auto k, auto v) {
          auto kind = ParseEmbedderKind(v);
          if (!kind) BadValue(k, v, "remote, fallback or fixture");
          c.embedder.kind = *kind;
        },
        [](const AppConfig& c) { return std::string(ToString(c.embedder.kind)); }, true);
    add("embed_url", [](AppConfig& c, auto, auto v) { c.embedder.endpoint = std::string(v); },
        [](const AppConfig& c) { return c.embedder.endpoint; }, true);
    add("embed_fixture",
        [](AppConfig& c, auto, auto v) { c.embedder.fixture_path = std::string(v); },
        [](const AppConfig& c) { return c.embedder.fixture_path; }, true);
    add("embed_timeout_ms",
        [](AppConfig& c, auto k, auto v) {
          c.embedder.timeout = std::chrono::milliseconds(ParseInt<std::int64_t>(k, v));
        },
        [](const AppConfig& c) { return std::to_string(c.embedder.timeout.count()); });
    add("embed_max_batch",
        [](AppConfig& c, auto k, auto v) { c.embedder.max_batch = ParseInt<std::size_t>(k, v); },
        [](const AppConfig& c) { return std::to_string(c.embedder.max_batch); });
    add("embed_retries",
        [](AppConfig& c, auto k, auto v) { c.embedder.retries = ParseInt<std::size_t>(k, v); },
        [](const AppConfig& c) { return std::to_string(c.embedder.retries); });
    add("embed_max_in_flight",
        [](AppConfig& c, auto k, auto v) {
          c.embedder.max_in_flight = ParseInt<std::size_t>(k, v);
        },
        [](const AppConfig& c) { return std::to_string(c.embedder.max_in_flight); });

    // Generation backend.
    add("gen_url", [](AppConfig& c, auto, auto v) { c.generator.endpoint = std::string(v); },
        [](const AppConfig& c) { return c.generator.endpoint; }, true);
    add("gen_stub",
        [](AppConfig& c, auto, auto v) { c.generator.stub_fixture = std::string(v); },
        [](const AppConfig& c) { return c.generator.stub_fixture; }, true);
    add("gen_timeout_ms",
        [](AppConfig& c, auto k, auto v) {
          c.generator.timeout = std::chrono::milliseconds(ParseInt<std::int64_t>(k, v));
        },
        [](const AppConfig& c) { return std::to_string(c.generator.timeout.count()); });
    add("gen_retries",
        [](AppConfig& c, auto k, auto v) { c.generator.retries = ParseInt<std::size_t>(k, v); },
        [](const AppConfig& c) { return std::to_string(c.generator.retries); });
    add("gen_max_concurrency",
        [](AppConfig& c, auto k, auto v) {
          c.generator.max_concurrency = ParseInt<std::size_t>(k, v);
        },
        [](const AppConfig& c) { return std::to_string(c.generator.max_concurrency); });
    return f;
  }();
  return fields;
}

const Field& FindField(std::string_view key) {
  for (const auto& f : Fields()) {
    if (f.key == key) return f;
  }
  throw InputError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

ProviderConfig AppConfig::EffectiveEmbedder() const {
  ProviderConfig out = embedder;
  if (out.kind != EmbedderKind::kRemote) out.endpoint.clear();
  return out;
}

BackendConfig AppConfig::EffectiveGenerator() const {
  BackendConfig out = generator;
  out.kind = out.stub_fixture.empty() ? BackendKind::kRemote : BackendKind::kStub;
  return out;
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : Fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void SetConfigValue(AppConfig& config, std::string_view key, std::string_view value) {
  FindField(key).set(config, key, value);
}

std::string GetConfigValue(const AppConfig& config, std::string_view key) {
  return FindField(key).get(config);
}

void ApplyConfigText(AppConfig& config, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = unicode::Trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    const std::string key = unicode::Trim(std::string_view(line).substr(0, eq));
    std::string value = unicode::Trim(std::string_view(line).substr(eq + 1));
    // Trailing comment after an unquoted value.
    if (!value.empty() && value.front() != '"') {
      if (auto hash = value.find(" #"); hash != std::string::npos) {
        value = unicode::Trim(std::string_view(value).substr(0, hash));
      }
    }
    try {
      SetConfigValue(config, key, Unquote(value, source, line_no));
    } catch (const InputError& e) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ApplyConfigFile(AppConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(config, buffer.str(), path);
}

void ApplyEnvironment(AppConfig& config) {
  ApplyEmbedEnvOverride(config.embedder);
  ApplyGenEnvOverride(config.generator);
}

std::string DumpConfigText(const AppConfig& config) {
  std::string out;
  for (const auto& f : Fields()) {
    const std::string value = f.get(config);
    out += f.key + " = " + (f.is_string ? Quote(value) : value) + "\n";
  }
  return out;
}

json DumpConfigJson(const AppConfig& config) {
  json j = json::object();
  for (const auto& f : Fields()) {
    const std::string value = f.get(config);
    if (f.is_string) {
      j[f.key] = value;
    } else if (value == "none") {
      j[f.key] = nullptr;
    } else {
      j[f.key] = json::parse(value);
    }
  }
  return j;
}

}  // namespace parakit
