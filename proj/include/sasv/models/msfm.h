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

#ifndef SASV_MODELS_MSFM_H_
#define SASV_MODELS_MSFM_H_

#include <optional>
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

// Score-fusion back-end with an auxiliary spoofing-scenario speaker
// verification (SSSV) network.
//
// SSSV: s = pj([u1([enroll_asv; enroll_cm]); u2([test_asv; test_cm])]), and
// its scalar score is softmax(s)[1]. The fusion head sf maps
// [asv_cosine, cm_probability(, sssv_score)] to logits v, where
// cm_probability is CmScorer::Probability of the test CM embedding. The SASV
// score is softmax(v)[1].
class MsfmModel : public TrialScorer {
 public:
  // Glorot-initialized blocks for the given embedding widths.
  MsfmModel(Index asv_dim, Index cm_dim, bool use_sssv_score,
            CmScorer cm_scorer, std::mt19937_64& rng);
  // Checks that the blocks wire together; throws std::invalid_argument.
  MsfmModel(Block u1, Block u2, Block pj, Block sf, bool use_sssv_score,
            CmScorer cm_scorer);

  // SSSV logits (length 2).
  Vector SssvForward(const Vector& enroll_asv, const Vector& enroll_cm,
                     const Vector& test_asv, const Vector& test_cm) const;

  struct Fusion {
    Vector logits;  // v
    double sasv_score = 0.0;
  };
  // `sssv_score` must be present exactly when use_sssv_score() is true.
  Fusion FuseScores(double asv_score, double cm_score,
                    std::optional<double> sssv_score) const;

  double Score(const TrialEmbeddings& trial) const override;

  struct Losses {
    double sssv = 0.0;
    double sf = 0.0;
    double total = 0.0;
  };
  // Per-pair losses; `sv_target` and `sasv_target` are one-hot of length 2
  // (index 1 = same speaker / target).
  Losses Loss(const TrialEmbeddings& pair, const Vector& sv_target,
              const Vector& sasv_target) const;

  struct Batch {
    Matrix enroll;  // [asv; cm] x B
    Matrix test;    // [asv; cm] x B
    Vector asv_scores;
    Vector cm_scores;
    std::vector<int> sv_labels;    // 1 = same speaker
    std::vector<int> sasv_labels;  // 1 = target
  };
  Batch MakeBatch(std::span<const sampling::TrainingPair> pairs,
                  const TrainingData& data) const;

  // Mean losses over the batch; `grads` receives d(mean total)/d(params) in
  // ParamSets() order.
  Losses LossAndGradients(const Batch& batch,
                          std::vector<nn::MlpParams>* grads) const;

  // u1, u2, pj, sf.
  std::vector<nn::MlpParams*> ParamSets();

  const Block& u1() const { return u1_; }
  const Block& u2() const { return u2_; }
  const Block& pj() const { return pj_; }
  const Block& sf() const { return sf_; }
  bool use_sssv_score() const { return use_sssv_score_; }
  const CmScorer& cm_scorer() const { return cm_scorer_; }
  Index asv_dim() const { return asv_dim_; }
  Index cm_dim() const { return cm_dim_; }

  Checkpoint ToCheckpoint() const;
  static MsfmModel FromCheckpoint(const Checkpoint& checkpoint);

  // "msfm" or "msfm-no-sssv".
  const char* kind() const;

 private:
  Block u1_;
  Block u2_;
  Block pj_;
  Block sf_;
  bool use_sssv_score_;
  CmScorer cm_scorer_;
  Index asv_dim_;
  Index cm_dim_;
};

struct MsfmTrainResult {
  MsfmModel model;
  std::vector<EpochLog> log;
};

// Trains SSSV and sf jointly on the summed cross-entropy losses. Every epoch
// draws samples_per_epoch fresh pairs. The SSSV branch is trained through
// its own loss even when its score is not fed to sf. Throws TrainingError
// on a non-finite loss.
MsfmTrainResult TrainMsfm(const TrainingData& data,
                          const nn::TrainConfig& config, bool use_sssv_score);

}  // namespace sasv::models

#endif  // SASV_MODELS_MSFM_H_
