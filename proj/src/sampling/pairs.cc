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

#include "sasv/sampling/pairs.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sasv::sampling {

namespace {

template <typename T>
const T& PickUniform(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
  return items[dist(rng)];
}

// Uniform over `pool` entries whose speaker differs from `speaker`; the
// caller guarantees at least one exists.
const std::string& PickOtherSpeaker(
    const std::vector<std::pair<std::size_t, std::string>>& pool,
    std::size_t speaker, std::mt19937_64& rng) {
  for (;;) {
    const auto& candidate = PickUniform(pool, rng);
    if (candidate.first != speaker) return candidate.second;
  }
}

// Speakers present in a pool, for "does anyone else qualify" checks.
class SpeakerSet {
 public:
  explicit SpeakerSet(
      const std::vector<std::pair<std::size_t, std::string>>& pool) {
    for (const auto& e : pool) speakers_.insert(e.first);
  }
  bool HasOtherThan(std::size_t speaker) const {
    return speakers_.size() > 1 ||
           (speakers_.size() == 1 && *speakers_.begin() != speaker);
  }

 private:
  std::set<std::size_t> speakers_;
};

}  // namespace

std::string_view ToString(PairScenario scenario) {
  switch (scenario) {
    case PairScenario::kBonafideSame:
      return "bonafide-same";
    case PairScenario::kBonafideDiff:
      return "bonafide-diff";
    case PairScenario::kSpoofSame:
      return "spoof-same";
    case PairScenario::kSpoofDiff:
      return "spoof-diff";
  }
  return "?";
}

std::string_view ToString(NegativeKind kind) {
  return kind == NegativeKind::kSameSpeakerSpoof ? "same-speaker-spoof"
                                                 : "other-speaker-bonafide";
}

std::array<int, 4> ApportionScenarios(
    int count, const std::array<std::int64_t, 4>& weights) {
  if (count < 0) throw std::invalid_argument("negative sample count");
  std::int64_t total = 0;
  for (auto w : weights) {
    if (w < 0) throw std::invalid_argument("negative scenario weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("all scenario weights are zero");

  std::array<int, 4> counts{};
  std::array<std::int64_t, 4> remainders{};
  int assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::int64_t scaled = static_cast<std::int64_t>(count) * weights[i];
    counts[i] = static_cast<int>(scaled / total);
    remainders[i] = scaled % total;
    assigned += counts[i];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) {
    ++counts[order[k]];
  }
  return counts;
}

RecordIndex::RecordIndex(std::span<const data::UtteranceRecord> records)
    : records_(records.begin(), records.end()) {
  std::unordered_map<std::string, std::size_t> speaker_slot;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!by_utterance_.emplace(r.utterance_id, i).second) {
      throw std::invalid_argument("duplicate utterance id '" + r.utterance_id +
                                  "' in protocol");
    }
    auto [it, inserted] = speaker_slot.emplace(r.speaker_id, speakers_.size());
    if (inserted) speakers_.push_back({r.speaker_id, {}, {}});
    const std::size_t s = it->second;
    if (r.spoof_key == data::SpoofKey::kBonafide) {
      speakers_[s].bonafide.push_back(r.utterance_id);
      bonafide_.emplace_back(s, r.utterance_id);
    } else {
      speakers_[s].spoof.push_back(r.utterance_id);
      spoof_.emplace_back(s, r.utterance_id);
    }
  }
}

const data::UtteranceRecord* RecordIndex::Find(
    const std::string& utterance_id) const {
  auto it = by_utterance_.find(utterance_id);
  return it == by_utterance_.end() ? nullptr : &records_[it->second];
}

std::vector<TrainingPair> SampleTrainingPairs(
    std::span<const data::UtteranceRecord> records, int count,
    std::mt19937_64& rng) {
  return SampleTrainingPairs(RecordIndex(records), count, rng);
}

std::vector<TrainingPair> SampleTrainingPairs(const RecordIndex& index,
                                              int count,
                                              std::mt19937_64& rng) {
  const auto counts = ApportionScenarios(count);
  const auto& speakers = index.speakers();

  // Eligible enrollment utterances per scenario.
  std::array<std::vector<std::pair<std::size_t, std::string>>, 4> eligible;
  const SpeakerSet bonafide_speakers(index.bonafide());
  const SpeakerSet spoof_speakers(index.spoof());
  for (const auto& entry : index.bonafide()) {
    const auto& spk = speakers[entry.first];
    if (spk.bonafide.size() >= 2) eligible[0].push_back(entry);
    if (bonafide_speakers.HasOtherThan(entry.first)) {
      eligible[1].push_back(entry);
    }
    if (!spk.spoof.empty()) eligible[2].push_back(entry);
    if (spoof_speakers.HasOtherThan(entry.first)) {
      eligible[3].push_back(entry);
    }
  }

  std::vector<TrainingPair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (std::size_t s = 0; s < 4; ++s) {
    if (counts[s] == 0) continue;
    const PairScenario scenario = kAllScenarios[s];
    if (eligible[s].empty()) {
      throw std::runtime_error("cannot sample training pairs: scenario '" +
                               std::string(ToString(scenario)) +
                               "' is unsatisfiable with the given protocol");
    }
    for (int n = 0; n < counts[s]; ++n) {
      const auto& [speaker, enroll] = PickUniform(eligible[s], rng);
      std::string test;
      switch (scenario) {
        case PairScenario::kBonafideSame: {
          const auto& own = speakers[speaker].bonafide;
          do {
            test = PickUniform(own, rng);
          } while (test == enroll);
          break;
        }
        case PairScenario::kBonafideDiff:
          test = PickOtherSpeaker(index.bonafide(), speaker, rng);
          break;
        case PairScenario::kSpoofSame:
          test = PickUniform(speakers[speaker].spoof, rng);
          break;
        case PairScenario::kSpoofDiff:
          test = PickOtherSpeaker(index.spoof(), speaker, rng);
          break;
      }
      pairs.push_back({enroll, std::move(test), scenario});
    }
  }
  return pairs;
}

std::vector<Triplet> SampleTriplets(
    std::span<const data::UtteranceRecord> records, int count,
    std::mt19937_64& rng) {
  return SampleTriplets(RecordIndex(records), count, rng);
}

std::vector<Triplet> SampleTriplets(const RecordIndex& index, int count,
                                    std::mt19937_64& rng) {
  if (count < 0) throw std::invalid_argument("negative triplet count");
  const auto& speakers = index.speakers();
  std::vector<std::pair<std::size_t, std::string>> anchors;
  for (const auto& entry : index.bonafide()) {
    if (speakers[entry.first].bonafide.size() >= 2) anchors.push_back(entry);
  }
  if (anchors.empty()) {
    throw std::runtime_error(
        "cannot sample triplets: no speaker has two bonafide utterances");
  }

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(count));
  std::bernoulli_distribution coin(0.5);
  const SpeakerSet bonafide_speakers(index.bonafide());
  for (int n = 0; n < count; ++n) {
    const auto& [speaker, anchor] = PickUniform(anchors, rng);
    const auto& own = speakers[speaker];
    std::string positive;
    do {
      positive = PickUniform(own.bonafide, rng);
    } while (positive == anchor);

    const bool can_spoof = !own.spoof.empty();
    const bool can_other = bonafide_speakers.HasOtherThan(speaker);
    if (!can_spoof && !can_other) {
      throw std::runtime_error("cannot sample triplets: speaker '" + own.id +
                               "' has no admissible negative");
    }
    NegativeKind kind;
    if (can_spoof && can_other) {
      kind = coin(rng) ? NegativeKind::kSameSpeakerSpoof
                       : NegativeKind::kOtherSpeakerBonafide;
    } else {
      kind = can_spoof ? NegativeKind::kSameSpeakerSpoof
                       : NegativeKind::kOtherSpeakerBonafide;
    }
    std::string negative = kind == NegativeKind::kSameSpeakerSpoof
                               ? PickUniform(own.spoof, rng)
                               : PickOtherSpeaker(index.bonafide(), speaker,
                                                  rng);
    triplets.push_back({anchor, std::move(positive), std::move(negative), kind});
  }
  return triplets;
}

std::string CheckPair(const TrainingPair& pair, const RecordIndex& index) {
  const auto* enroll = index.Find(pair.enroll_utterance_id);
  const auto* test = index.Find(pair.test_utterance_id);
  if (enroll == nullptr || test == nullptr) return "unknown utterance";
  if (enroll->spoof_key != data::SpoofKey::kBonafide) {
    return "enrollment is not bonafide";
  }
  const bool same = enroll->speaker_id == test->speaker_id;
  const bool spoof = test->spoof_key == data::SpoofKey::kSpoof;
  PairScenario actual = spoof ? (same ? PairScenario::kSpoofSame
                                      : PairScenario::kSpoofDiff)
                              : (same ? PairScenario::kBonafideSame
                                      : PairScenario::kBonafideDiff);
  if (actual != pair.scenario) {
    return "scenario " + std::string(ToString(pair.scenario)) +
           " but utterances form " + std::string(ToString(actual));
  }
  if (pair.enroll_utterance_id == pair.test_utterance_id) {
    return "enrollment and test are the same utterance";
  }
  return {};
}

std::string CheckTriplet(const Triplet& triplet, const RecordIndex& index) {
  const auto* a = index.Find(triplet.anchor_id);
  const auto* p = index.Find(triplet.positive_id);
  const auto* n = index.Find(triplet.negative_id);
  if (a == nullptr || p == nullptr || n == nullptr) return "unknown utterance";
  if (a->spoof_key != data::SpoofKey::kBonafide ||
      p->spoof_key != data::SpoofKey::kBonafide) {
    return "anchor/positive not bonafide";
  }
  if (a->speaker_id != p->speaker_id) return "anchor/positive speakers differ";
  if (triplet.anchor_id == triplet.positive_id) return "anchor == positive";
  if (triplet.negative_kind == NegativeKind::kSameSpeakerSpoof) {
    if (n->spoof_key != data::SpoofKey::kSpoof ||
        n->speaker_id != a->speaker_id) {
      return "negative is not the anchor speaker's spoof";
    }
  } else if (n->spoof_key != data::SpoofKey::kBonafide ||
             n->speaker_id == a->speaker_id) {
    return "negative is not another speaker's bonafide";
  }
  return {};
}

}  // namespace sasv::sampling
