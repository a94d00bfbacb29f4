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

// Application configuration: built-in defaults, a flat `key = value`
// config file, environment overrides and command-line overrides.

#ifndef PARAKIT_CONFIG_H_
#define PARAKIT_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parakit/embedding.h"
#include "parakit/generation.h"
#include "parakit/selector.h"

namespace parakit {

struct AppConfig {
  SelectionPolicy policy;
  PromptFormat fmt;
  SamplingParams sampling;
  ProviderConfig embedder;
  BackendConfig generator;

  /// Provider configuration as handed to MakeEmbedder: the endpoint is
  /// dropped unless the kind is remote.
  ProviderConfig EffectiveEmbedder() const;
  /// Generator configuration as handed to MakeBackend.
  BackendConfig EffectiveGenerator() const;
};

/// Every key accepted by SetConfigValue, in dump order.
const std::vector<std::string>& ConfigKeys();

/// Parses `value` for `key` into `config`. Throws InputError for unknown
/// keys or unparsable values. Optional numeric keys accept "none".
void SetConfigValue(AppConfig& config, std::string_view key, std::string_view value);

/// Formats the current value of `key` the way the config file spells it.
std::string GetConfigValue(const AppConfig& config, std::string_view key);

/// Applies a config file: one `key = value` per line, `#` comments, blank
/// lines ignored, optional section headers ignored, string values may be
/// double-quoted with \" \\ \n \t escapes.
void ApplyConfigText(AppConfig& config, std::string_view text, std::string_view source = "config");
void ApplyConfigFile(AppConfig& config, const std::string& path);

/// Replaces endpoints with PARAKIT_EMBED_URL / PARAKIT_GEN_URL when set.
void ApplyEnvironment(AppConfig& config);

/// Renders config-file text that ApplyConfigText reads back unchanged.
std::string DumpConfigText(const AppConfig& config);
nlohmann::json DumpConfigJson(const AppConfig& config);

}  // namespace parakit

#endif  // PARAKIT_CONFIG_H_
