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

#ifndef SASV_MODELS_IEP_H_
#define SASV_MODELS_IEP_H_

#include <random>
#include <span>
#include <vector>

#include "sasv/models/blocks.h"
#include "sasv/models/checkpoint.h"
#include "sasv/models/pipeline.h"
#include "sasv/nn/optimizer.h"

namespace sasv::models {

// Mean hinge (1/c) sum_i max(0, cos(A_i, N_i) - cos(A_i, P_i) + margin) over
// the columns of `anchors`, `positives` and `negatives`. When the gradient
// pointers are non-null they receive d loss / d column. Throws on a
// zero-norm column or mismatched shapes.
double TripletLossColumns(const Matrix& anchors, const Matrix& positives,
                          const Matrix& negatives, double margin,
                          Matrix* d_anchors = nullptr,
                          Matrix* d_positives = nullptr,
                          Matrix* d_negatives = nullptr);

double TripletLoss(std::span<const Vector> anchors,
                   std::span<const Vector> positives,
                   std::span<const Vector> negatives, double margin);

// Embedding projector: z = g([f([x; y]); x; y]) maps an ASV embedding x and
// a CM embedding y to a joint embedding scored by cosine similarity.
class IepModel : public TrialScorer {
 public:
  IepModel(Index asv_dim, Index cm_dim, double margin, std::mt19937_64& rng);
  IepModel(Block f, Block g, Index asv_dim, Index cm_dim, double margin);

  Vector Project(const Vector& asv, const Vector& cm) const;
  // Columns of `stacked` are [asv; cm].
  Matrix ProjectStacked(const Matrix& stacked) const;

  double Score(const TrialEmbeddings& trial) const override;

  struct TripletBatch {
    Matrix anchors;  // [asv; cm] x c
    Matrix positives;
    Matrix negatives;
  };
  // Mean triplet loss; `grads` receives gradients for (f, g).
  double TripletLossAndGradients(const TripletBatch& batch,
                                 std::vector<nn::MlpParams>* grads) const;

  std::vector<nn::MlpParams*> ParamSets();  // f, g

  const Block& f() const { return f_; }
  const Block& g() const { return g_; }
  Block& mutable_f() { return f_; }
  Block& mutable_g() { return g_; }
  double margin() const { return margin_; }
  Index asv_dim() const { return asv_dim_; }
  Index cm_dim() const { return cm_dim_; }

  Checkpoint ToCheckpoint() const;
  static IepModel FromCheckpoint(const Checkpoint& checkpoint);

 private:
  Block f_;
  Block g_;
  Index asv_dim_;
  Index cm_dim_;
  double margin_;
};

struct IepTrainResult {
  IepModel model;
  std::vector<EpochLog> log;
};

// Each epoch runs ceil(samples_per_epoch / triplets_per_batch) steps, each
// on a freshly drawn batch of triplets_per_batch triplets.
IepTrainResult TrainIep(const TrainingData& data,
                        const nn::TrainConfig& config);

}  // namespace sasv::models

#endif  // SASV_MODELS_IEP_H_
