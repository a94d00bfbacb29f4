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

// The nine scored candidates for the "prisoner" sentence, with their
// published similarity and ROUGE-L values; Out 8 is the expected pick.

#ifndef PARAKIT_TESTS_PRISONER_FIXTURE_H_
#define PARAKIT_TESTS_PRISONER_FIXTURE_H_

#include <string>
#include <vector>

#include "parakit/selector.h"

namespace parakit::testing {

struct PublishedCandidate {
  std::string label;
  std::string text;
  double similarity;
  double rouge_l;
};

inline const std::string kPrisonerOriginal =
    "A prisoner can asphyxiate himself in 90 seconds and, after eight minutes or so, he will be "
    "brain dead.";

inline const std::vector<PublishedCandidate>& PrisonerCandidates() {
  static const std::vector<PublishedCandidate> rows{
      {"Out 1", "After 8 minutes, a brain fart will subdue the sufferer.", 0.524, 0.0},
      {"Out 2", "After 8 minutes, he will be brain-dead and his heart will stop.", 0.565, 0.138},
      {"Out 3",
       "A brain aneurysm can asphyxiate itself in 90 seconds and, after eight minutes, it will "
       "be dead.",
       0.721, 0.412},
      {"Out 4",
       "After eight minutes, a brain anesthetist can asphyxiate a prisoner in 90 seconds and for "
       "several minutes after that.",
       0.758, 0.167},
      {"Out 5",
       "A brain-dead prisoner canasphyxiate himself in 90 seconds and then out loud after eight "
       "minutes.",
       0.809, 0.312},
      {"Out 6",
       "At asphyxiation, the prisoner canasphyxiate himself in 90 seconds and, after 8 minutes, "
       "he will be brain dead.",
       0.884, 0.514},
      {"Out 7",
       "After eight minutes, a prisoner can asphyxiate himself in 90 seconds and, after that, he "
       "will be brain dead.",
       0.884, 0.514},
      {"Out 8",
       "In 90 seconds, a prisoner can asphyxiate himself and be brain dead after eight minutes "
       "or so",
       0.932, 0.473},
      {"Out 9",
       "A prisoner can asphyxiate himself in 90 seconds and, after eight minutes, he will be "
       "brain dead.",
       0.972, 0.824},
  };
  return rows;
}

/// Candidates carrying the published scores instead of recomputed ones.
inline std::vector<ScoredCandidate> InjectedPrisonerScores() {
  std::vector<ScoredCandidate> out;
  for (const auto& row : PrisonerCandidates()) {
    ScoredCandidate c;
    c.text = row.text;
    c.similarity = row.similarity;
    c.rouge_l.f_measure = row.rouge_l;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace parakit::testing

#endif  // PARAKIT_TESTS_PRISONER_FIXTURE_H_
