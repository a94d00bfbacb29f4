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

#include "http_client.h"

#include <httplib.h>

#include <thread>

#include "parakit/error.h"

namespace parakit::internal {
namespace {

constexpr std::chrono::milliseconds kMaxBackoff{5000};

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpTarget ParseEndpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("endpoint is not a URL: '" + url + "'");
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw InputError("unsupported endpoint scheme '" + scheme + "'");
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  HttpTarget target;
  target.origin = url.substr(0, path_begin);
  if (target.origin.size() <= host_begin) {
    throw InputError("endpoint has no host: '" + url + "'");
  }
  if (path_begin != std::string::npos) {
    target.path_prefix = url.substr(path_begin);
    while (!target.path_prefix.empty() && target.path_prefix.back() == '/') {
      target.path_prefix.pop_back();
    }
  }
  return target;
}

std::string PostJson(const HttpTarget& target, const std::string& path,
                     const std::string& body, const RetryPolicy& policy,
                     std::optional<std::size_t> batch_index) {
  httplib::Client client(target.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      policy.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const std::string full_path = target.path_prefix + path;
  std::string last_error;
  auto delay = policy.backoff;
  for (std::size_t attempt = 0; attempt <= policy.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay = std::min(delay * 2, kMaxBackoff);
    }
    auto result = client.Post(full_path, body, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status == 200) return result->body;
    last_error = "HTTP status " + std::to_string(result->status);
    if (!Retryable(result->status)) break;
  }
  std::string what = "POST " + target.origin + full_path + " failed: " + last_error;
  if (batch_index) what += " (batch " + std::to_string(*batch_index) + ")";
  throw TransportError(what, batch_index);
}

}  // namespace parakit::internal
