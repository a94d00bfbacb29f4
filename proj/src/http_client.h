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

#ifndef PARAKIT_SRC_HTTP_CLIENT_H_
#define PARAKIT_SRC_HTTP_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>

namespace parakit::internal {

struct HttpTarget {
  /// scheme://host[:port]
  std::string origin;
  /// Path component of the endpoint without a trailing slash ("" or "/api").
  std::string path_prefix;
};

/// Splits an endpoint URL. Throws InputError for anything that is not an
/// http:// or https:// URL with a host.
HttpTarget ParseEndpoint(const std::string& url);

struct RetryPolicy {
  std::size_t retries = 2;
  std::chrono::milliseconds timeout{10000};
  /// Delay before the first retry; doubled for every further attempt.
  std::chrono::milliseconds backoff{100};
};

/// POSTs a JSON body to origin + path_prefix + path and returns the response
/// body of a 200 answer. Connection failures, 429 and 5xx answers are retried
/// with exponential backoff; other statuses fail immediately. Throws
/// TransportError carrying `batch_index`.
std::string PostJson(const HttpTarget& target, const std::string& path,
                     const std::string& body, const RetryPolicy& policy,
                     std::optional<std::size_t> batch_index = std::nullopt);

}  // namespace parakit::internal

#endif  // PARAKIT_SRC_HTTP_CLIENT_H_
