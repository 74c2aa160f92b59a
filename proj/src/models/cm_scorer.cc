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

#include "sasv/models/cm_scorer.h"

#include <cmath>
#include <stdexcept>

namespace sasv::models {

CmScorer::CmScorer(nn::Vector midpoint, nn::Vector weight)
    : midpoint_(std::move(midpoint)), weight_(std::move(weight)) {
  if (midpoint_.size() != weight_.size() || weight_.size() == 0) {
    throw std::invalid_argument("CmScorer: bad midpoint/weight shapes");
  }
  if (!midpoint_.allFinite() || !weight_.allFinite()) {
    throw std::invalid_argument("CmScorer: non-finite parameters");
  }
  if (weight_.norm() == 0.0) throw std::invalid_argument("CmScorer: zero weight");
}

CmScorer CmScorer::Fit(std::span<const data::UtteranceRecord> records,
                       const data::EmbeddingStore& cm) {
  nn::Vector bonafide = nn::Vector::Zero(cm.dim());
  nn::Vector spoof = nn::Vector::Zero(cm.dim());
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
  for (const auto& r : records) {
    const nn::Vector& y = cm.At(r.utterance_id);
    if (r.spoof_key == data::SpoofKey::kBonafide) {
      bonafide += y;
      ++n_bonafide;
    } else {
      spoof += y;
      ++n_spoof;
    }
  }
  if (n_bonafide == 0 || n_spoof == 0) {
    throw std::runtime_error(
        "fitting the CM scorer needs both bonafide and spoof utterances");
  }
  bonafide /= static_cast<double>(n_bonafide);
  spoof /= static_cast<double>(n_spoof);
  const nn::Vector diff = bonafide - spoof;
  const double gap = diff.norm();
  if (gap == 0.0) {
    throw std::runtime_error("CM scorer: bonafide and spoof means coincide");
  }
  const nn::Vector unit = diff / gap;

  double within = 0.0;
  for (const auto& r : records) {
    const nn::Vector& y = cm.At(r.utterance_id);
    const nn::Vector& mean =
        r.spoof_key == data::SpoofKey::kBonafide ? bonafide : spoof;
    const double p = (y - mean).dot(unit);
    within += p * p;
  }
  const double variance = within / static_cast<double>(records.size());
  if (!(variance > 0.0)) {
    throw std::runtime_error("CM scorer: projected classes have no spread");
  }
  return CmScorer(0.5 * (bonafide + spoof), diff / variance);
}

double CmScorer::Score(const nn::Vector& cm_embedding) const {
  if (!fitted()) throw std::logic_error("CmScorer used before fitting");
  if (cm_embedding.size() != weight_.size()) {
    throw std::invalid_argument("CmScorer: embedding has length " +
                                std::to_string(cm_embedding.size()) +
                                ", expected " + std::to_string(weight_.size()));
  }
  return (cm_embedding - midpoint_).dot(weight_);
}

double CmScorer::Probability(const nn::Vector& cm_embedding) const {
  const double llr = Score(cm_embedding);
  if (llr >= 0.0) return 1.0 / (1.0 + std::exp(-llr));
  const double e = std::exp(llr);
  return e / (1.0 + e);
}

}  // namespace sasv::models
