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

#include "sasv/models/baselines.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sasv/common/error.h"
#include "sasv/common/logging.h"
#include "sasv/nn/loss.h"

namespace sasv::models {

Baseline1Scorer::Baseline1Scorer(CmScorer cm_scorer)
    : cm_scorer_(std::move(cm_scorer)) {
  if (!cm_scorer_.fitted()) {
    throw std::invalid_argument("baseline1 needs a fitted CM scorer");
  }
}

double Baseline1Scorer::Score(const TrialEmbeddings& trial) const {
  return Baseline1Score(CosineScore(trial.enroll_asv, trial.test_asv),
                        cm_scorer_.Score(trial.test_cm));
}

Baseline2Model::Baseline2Model(Index asv_dim, Index cm_dim,
                               std::mt19937_64& rng)
    : Baseline2Model(Block::Initialized(Baseline2Spec(asv_dim, cm_dim), rng),
                     asv_dim, cm_dim) {}

Baseline2Model::Baseline2Model(Block mlp, Index asv_dim, Index cm_dim)
    : mlp_(std::move(mlp)), asv_dim_(asv_dim), cm_dim_(cm_dim) {
  nn::ValidateParams(mlp_.spec, mlp_.params);
  if (mlp_.spec.input_dim() != 2 * asv_dim + cm_dim ||
      mlp_.spec.output_dim() != 2) {
    throw std::invalid_argument(
        "baseline2 wiring: expected 2*asv + cm inputs and 2 outputs");
  }
}

Vector Baseline2Model::Logits(const Vector& enroll_asv, const Vector& test_asv,
                              const Vector& test_cm) const {
  if (enroll_asv.size() != asv_dim_ || test_asv.size() != asv_dim_ ||
      test_cm.size() != cm_dim_) {
    throw std::invalid_argument("baseline2: expected ASV dim " +
                                std::to_string(asv_dim_) + " and CM dim " +
                                std::to_string(cm_dim_));
  }
  Vector input(2 * asv_dim_ + cm_dim_);
  input << enroll_asv, test_asv, test_cm;
  return nn::Predict(mlp_.spec, mlp_.params, input);
}

double Baseline2Model::Score(const TrialEmbeddings& trial) const {
  return nn::Softmax(Logits(trial.enroll_asv, trial.test_asv, trial.test_cm))[1];
}

Matrix Baseline2Model::MakeInputs(
    std::span<const sampling::TrainingPair> pairs,
    const TrainingData& data) const {
  Matrix inputs(2 * asv_dim_ + cm_dim_, static_cast<Index>(pairs.size()));
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto col = static_cast<Index>(j);
    inputs.col(col) << data.asv().At(pairs[j].enroll_utterance_id),
        data.asv().At(pairs[j].test_utterance_id),
        data.cm().At(pairs[j].test_utterance_id);
  }
  return inputs;
}

double Baseline2Model::LossAndGradients(
    const Matrix& inputs, std::span<const int> labels,
    std::vector<nn::MlpParams>* grads) const {
  const nn::ForwardResult forward = nn::Forward(mlp_.spec, mlp_.params, inputs);
  const nn::BatchLoss loss = nn::CceBatch(forward.output, labels);
  if (grads != nullptr) {
    grads->clear();
    grads->push_back(
        nn::Backward(mlp_.spec, mlp_.params, forward.tape, loss.gradient)
            .params);
  }
  return loss.loss;
}

Checkpoint Baseline2Model::ToCheckpoint() const {
  Checkpoint c;
  c.kind = "baseline2";
  c.blocks = {{"mlp", mlp_.spec, mlp_.params}};
  c.extras = {{"asv_dim", {static_cast<double>(asv_dim_)}},
              {"cm_dim", {static_cast<double>(cm_dim_)}}};
  return c;
}

Baseline2Model Baseline2Model::FromCheckpoint(const Checkpoint& c) {
  if (c.kind != "baseline2") {
    throw std::runtime_error("checkpoint kind '" + c.kind +
                             "' is not baseline2");
  }
  const auto& b = c.Block("mlp");
  return Baseline2Model(Block{b.spec, b.params},
                        static_cast<Index>(c.Scalar("asv_dim")),
                        static_cast<Index>(c.Scalar("cm_dim")));
}

Baseline2TrainResult TrainBaseline2(const TrainingData& data,
                                    const nn::TrainConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  Baseline2Model model(data.asv().dim(), data.cm().dim(), rng);
  nn::Optimizer optimizer(config);
  const auto params = model.ParamSets();
  std::vector<nn::MlpParams> grads;
  std::vector<EpochLog> log;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    auto pairs = sampling::SampleTrainingPairs(data.index(),
                                               config.samples_per_epoch, rng);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const auto batch_size = static_cast<std::size_t>(config.batch_size);
    double sum = 0.0;
    int step = 0;
    for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
      ++step;
      const std::size_t count = std::min(batch_size, pairs.size() - start);
      const auto slice =
          std::span<const sampling::TrainingPair>(pairs).subspan(start, count);
      labels.clear();
      for (const auto& p : slice) labels.push_back(p.IsTarget() ? 1 : 0);
      const double loss =
          model.LossAndGradients(model.MakeInputs(slice, data), labels, &grads);
      if (!std::isfinite(loss)) {
        throw TrainingError("baseline2 loss became non-finite at epoch " +
                            std::to_string(epoch) + ", step " +
                            std::to_string(step));
      }
      optimizer.Step(params, grads);
      sum += loss * static_cast<double>(count);
    }
    EpochLog entry{epoch, sum / static_cast<double>(pairs.size()), 0.0, 0.0};
    SASV_LOG_INFO("baseline2 epoch {}/{}: loss {:.5f}", epoch, config.epochs,
                  entry.loss);
    log.push_back(entry);
  }
  return {std::move(model), std::move(log)};
}

}  // namespace sasv::models
