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

#ifndef SASV_MODELS_BASELINES_H_
#define SASV_MODELS_BASELINES_H_

#include <random>
#include <span>
#include <vector>

#include "sasv/models/blocks.h"
#include "sasv/models/checkpoint.h"
#include "sasv/models/cm_scorer.h"
#include "sasv/models/pipeline.h"
#include "sasv/nn/optimizer.h"
#include "sasv/sampling/pairs.h"

namespace sasv::models {

// Score-sum ensemble: ASV cosine plus CM score. Needs no training.
inline double Baseline1Score(double asv_score, double cm_score) {
  return asv_score + cm_score;
}

class Baseline1Scorer : public TrialScorer {
 public:
  explicit Baseline1Scorer(CmScorer cm_scorer);
  double Score(const TrialEmbeddings& trial) const override;

 private:
  CmScorer cm_scorer_;
};

// Back-end ensemble: an MLP over [enroll_asv; test_asv; test_cm] with three
// 1024-unit hidden layers and a two-way softmax output.
class Baseline2Model : public TrialScorer {
 public:
  Baseline2Model(Index asv_dim, Index cm_dim, std::mt19937_64& rng);
  Baseline2Model(Block mlp, Index asv_dim, Index cm_dim);

  Vector Logits(const Vector& enroll_asv, const Vector& test_asv,
                const Vector& test_cm) const;
  double Score(const TrialEmbeddings& trial) const override;

  // Mean CCE over the pairs; `grads` receives the single block gradient.
  double LossAndGradients(const Matrix& inputs, std::span<const int> labels,
                          std::vector<nn::MlpParams>* grads) const;
  Matrix MakeInputs(std::span<const sampling::TrainingPair> pairs,
                    const TrainingData& data) const;

  std::vector<nn::MlpParams*> ParamSets() { return {&mlp_.params}; }
  const Block& mlp() const { return mlp_; }
  Index asv_dim() const { return asv_dim_; }
  Index cm_dim() const { return cm_dim_; }

  Checkpoint ToCheckpoint() const;
  static Baseline2Model FromCheckpoint(const Checkpoint& checkpoint);

 private:
  Block mlp_;
  Index asv_dim_;
  Index cm_dim_;
};

struct Baseline2TrainResult {
  Baseline2Model model;
  std::vector<EpochLog> log;
};

// Trained on the same per-epoch training pairs as MSFM, with the SASV label.
Baseline2TrainResult TrainBaseline2(const TrainingData& data,
                                    const nn::TrainConfig& config);

}  // namespace sasv::models

#endif  // SASV_MODELS_BASELINES_H_
