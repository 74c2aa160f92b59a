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

#ifndef SASV_NN_OPTIMIZER_H_
#define SASV_NN_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sasv/nn/mlp.h"

namespace sasv::nn {

enum class OptimizerKind { kSgd, kAdam };

std::string ToString(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(const std::string& name);

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 30;
  int batch_size = 32;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 2022;
  // Fresh pairs (or triplets) are drawn every epoch.
  int samples_per_epoch = 2000;
  // Triplets per mini-batch for the embedding projector.
  int triplets_per_batch = 64;
  double margin = 0.5;

  // Throws std::invalid_argument describing the first bad field.
  void Validate() const;
};

// SGD or Adam over a fixed list of parameter sets. Moment buffers are
// allocated on the first step and tied to the position of each set.
class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& config);

  // Updates `params[i]` with `grads[i]`. Throws TrainingError on a
  // non-finite gradient (parameters are left untouched in that case).
  void Step(std::span<MlpParams* const> params,
            std::span<const MlpParams> grads);

  std::int64_t steps() const { return step_; }

 private:
  TrainConfig config_;
  std::int64_t step_ = 0;
  std::vector<MlpParams> first_moment_;
  std::vector<MlpParams> second_moment_;
};

}  // namespace sasv::nn

#endif  // SASV_NN_OPTIMIZER_H_
