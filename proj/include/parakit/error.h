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

#ifndef PARAKIT_ERROR_H_
#define PARAKIT_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace parakit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A remote service could not be reached, timed out, or answered with a
/// non-success status after all retries were spent.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what,
                          std::optional<std::size_t> batch_index = std::nullopt)
      : Error(what), batch_index_(batch_index) {}

  /// Index of the request batch that failed, when the call was batched.
  std::optional<std::size_t> batch_index() const { return batch_index_; }

 private:
  std::optional<std::size_t> batch_index_;
};

/// A remote service answered, but the answer breaks the wire contract
/// (malformed JSON, wrong vector dimension, wrong element count).
class ContractError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A dataset contained no usable rows.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace parakit

#endif  // PARAKIT_ERROR_H_
