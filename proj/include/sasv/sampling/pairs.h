// Copyright (c) 2026 The sasv-fusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_SAMPLING_PAIRS_H_
#define SASV_SAMPLING_PAIRS_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sasv/data/protocol.h"

namespace sasv::sampling {

// Training-pair scenarios: enrollment is always bonafide; the test side is
// bonafide or spoofed, from the same or a different speaker.
enum class PairScenario {
  kBonafideSame = 0,
  kBonafideDiff = 1,
  kSpoofSame = 2,
  kSpoofDiff = 3,
};

inline constexpr std::array<PairScenario, 4> kAllScenarios = {
    PairScenario::kBonafideSame, PairScenario::kBonafideDiff,
    PairScenario::kSpoofSame, PairScenario::kSpoofDiff};

// 3 : 1.66 : 1 : 1 scaled by 100.
inline constexpr std::array<std::int64_t, 4> kScenarioWeights = {300, 166, 100,
                                                                 100};

std::string_view ToString(PairScenario scenario);

// Largest-remainder apportionment of `count` over `weights`. Ties in the
// remainder go to the earlier scenario. The result always sums to `count`.
std::array<int, 4> ApportionScenarios(
    int count, const std::array<std::int64_t, 4>& weights = kScenarioWeights);

struct TrainingPair {
  std::string enroll_utterance_id;  // bonafide
  std::string test_utterance_id;
  PairScenario scenario = PairScenario::kBonafideSame;

  // SASV ground truth: target only for a bonafide same-speaker pair.
  bool IsTarget() const { return scenario == PairScenario::kBonafideSame; }
  // ASV ground truth.
  bool SameSpeaker() const {
    return scenario == PairScenario::kBonafideSame ||
           scenario == PairScenario::kSpoofSame;
  }
};

enum class NegativeKind { kSameSpeakerSpoof, kOtherSpeakerBonafide };

std::string_view ToString(NegativeKind kind);

struct Triplet {
  std::string anchor_id;
  std::string positive_id;
  std::string negative_id;
  NegativeKind negative_kind = NegativeKind::kOtherSpeakerBonafide;
};

// Per-speaker view of a partition's utterances.
class RecordIndex {
 public:
  // Throws std::invalid_argument on a duplicate utterance id.
  explicit RecordIndex(std::span<const data::UtteranceRecord> records);

  struct Speaker {
    std::string id;
    std::vector<std::string> bonafide;
    std::vector<std::string> spoof;
  };

  const std::vector<Speaker>& speakers() const { return speakers_; }
  // nullptr when unknown.
  const data::UtteranceRecord* Find(const std::string& utterance_id) const;

  // Flat lists of (speaker index, utterance id).
  const std::vector<std::pair<std::size_t, std::string>>& bonafide() const {
    return bonafide_;
  }
  const std::vector<std::pair<std::size_t, std::string>>& spoof() const {
    return spoof_;
  }

 private:
  std::vector<data::UtteranceRecord> records_;
  std::unordered_map<std::string, std::size_t> by_utterance_;
  std::vector<Speaker> speakers_;
  std::vector<std::pair<std::size_t, std::string>> bonafide_;
  std::vector<std::pair<std::size_t, std::string>> spoof_;
};

// Draws `count` pairs with scenario counts from ApportionScenarios. Within a
// scenario the enrollment utterance is uniform over eligible bonafide
// utterances and the test utterance uniform over its valid partners.
// Throws std::runtime_error naming a scenario that cannot be satisfied.
std::vector<TrainingPair> SampleTrainingPairs(
    std::span<const data::UtteranceRecord> records, int count,
    std::mt19937_64& rng);
std::vector<TrainingPair> SampleTrainingPairs(const RecordIndex& index,
                                              int count, std::mt19937_64& rng);

// Draws `count` triplets: anchor and positive are distinct bonafide
// utterances of one speaker; the negative is that speaker's spoof or another
// speaker's bonafide, 50/50 when both exist.
std::vector<Triplet> SampleTriplets(
    std::span<const data::UtteranceRecord> records, int count,
    std::mt19937_64& rng);
std::vector<Triplet> SampleTriplets(const RecordIndex& index, int count,
                                    std::mt19937_64& rng);

// Returns an empty string when the sample satisfies its invariants,
// otherwise a description of the violation.
std::string CheckPair(const TrainingPair& pair, const RecordIndex& index);
std::string CheckTriplet(const Triplet& triplet, const RecordIndex& index);

}  // namespace sasv::sampling

#endif  // SASV_SAMPLING_PAIRS_H_
