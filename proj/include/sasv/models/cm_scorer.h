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

#ifndef SASV_MODELS_CM_SCORER_H_
#define SASV_MODELS_CM_SCORER_H_

#include <span>

#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"
#include "sasv/nn/mlp.h"

namespace sasv::models {

// Stand-in for the countermeasure's output layer: a linear discriminant
// along the difference of the bonafide and spoof class means.
//
//   score(y) = (y - midpoint) . weight
//
// Fit() sets midpoint = (mu_bonafide + mu_spoof) / 2 and
// weight = (mu_bonafide - mu_spoof) / sigma^2, where sigma^2 is the pooled
// within-class variance of the projection onto that difference. The score is
// then the bonafide-vs-spoof log-likelihood ratio under equal-variance
// Gaussians: positive means bonafide-like, and it is unbounded like a
// classifier logit.
class CmScorer {
 public:
  CmScorer() = default;
  CmScorer(nn::Vector midpoint, nn::Vector weight);

  // Throws if either class is empty, a record has no embedding, or the
  // projected classes have no spread.
  static CmScorer Fit(std::span<const data::UtteranceRecord> records,
                      const data::EmbeddingStore& cm);

  double Score(const nn::Vector& cm_embedding) const;
  // Bonafide posterior at equal priors: the logistic of Score().
  double Probability(const nn::Vector& cm_embedding) const;

  bool fitted() const { return weight_.size() > 0; }
  const nn::Vector& midpoint() const { return midpoint_; }
  const nn::Vector& weight() const { return weight_; }

 private:
  nn::Vector midpoint_;
  nn::Vector weight_;
};

}  // namespace sasv::models

#endif  // SASV_MODELS_CM_SCORER_H_
