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

#ifndef PARAKIT_PARAPHRASE_PAIR_H_
#define PARAKIT_PARAPHRASE_PAIR_H_

#include <optional>
#include <string>

namespace parakit {

/// An original text and a paraphrase of it.
struct ParaphrasePair {
  std::string original;
  std::string paraphrase;
  std::optional<std::string> source_id;

  friend bool operator==(const ParaphrasePair&, const ParaphrasePair&) = default;
};

}  // namespace parakit

#endif  // PARAKIT_PARAPHRASE_PAIR_H_
