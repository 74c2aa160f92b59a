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

#include "sasv/nn/optimizer.h"

#include <cmath>
#include <stdexcept>

#include "sasv/common/error.h"

namespace sasv::nn {

std::string ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizerKind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("TrainConfig: " + what);
  };
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be positive");
  }
  if (epochs <= 0) fail("epochs must be positive");
  if (batch_size <= 0) fail("batch_size must be positive");
  if (samples_per_epoch <= 0) fail("samples_per_epoch must be positive");
  if (triplets_per_batch <= 0) fail("triplets_per_batch must be positive");
  if (!(margin >= 0.0 && margin <= 2.0)) fail("margin must lie in [0, 2]");
  if (optimizer == OptimizerKind::kAdam) {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) fail("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) fail("beta2 must lie in [0, 1)");
    if (!(adam_epsilon > 0.0)) fail("adam_epsilon must be positive");
  }
}

Optimizer::Optimizer(const TrainConfig& config) : config_(config) {
  config_.Validate();
}

void Optimizer::Step(std::span<MlpParams* const> params,
                     std::span<const MlpParams> grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("Optimizer: params/grads count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->dense.size() != grads[i].dense.size()) {
      throw std::invalid_argument("Optimizer: layer count mismatch");
    }
    for (std::size_t k = 0; k < grads[i].dense.size(); ++k) {
      const auto& p = params[i]->dense[k];
      const auto& g = grads[i].dense[k];
      if (p.weight.rows() != g.weight.rows() ||
          p.weight.cols() != g.weight.cols() ||
          p.bias.size() != g.bias.size()) {
        throw std::invalid_argument("Optimizer: shape mismatch");
      }
    }
    if (!grads[i].AllFinite()) {
      throw TrainingError("non-finite gradient at optimizer step " +
                          std::to_string(step_ + 1));
    }
  }
  ++step_;
  const double lr = config_.learning_rate;

  if (config_.optimizer == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (std::size_t k = 0; k < grads[i].dense.size(); ++k) {
        params[i]->dense[k].weight -= lr * grads[i].dense[k].weight;
        params[i]->dense[k].bias -= lr * grads[i].dense[k].bias;
      }
    }
    return;
  }

  if (first_moment_.empty()) {
    for (const auto& g : grads) {
      MlpParams zero = g;
      zero.SetZero();
      first_moment_.push_back(zero);
      second_moment_.push_back(std::move(zero));
    }
  } else if (first_moment_.size() != grads.size()) {
    throw std::invalid_argument("Optimizer: parameter list changed");
  }

  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double t = static_cast<double>(step_);
  const double bias1 = 1.0 - std::pow(b1, t);
  const double bias2 = 1.0 - std::pow(b2, t);
  const double eps = config_.adam_epsilon;

  auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    p.array() -= lr * (m.array() / bias1) /
                 ((v.array() / bias2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t k = 0; k < grads[i].dense.size(); ++k) {
      update(params[i]->dense[k].weight, first_moment_[i].dense[k].weight,
             second_moment_[i].dense[k].weight, grads[i].dense[k].weight);
      update(params[i]->dense[k].bias, first_moment_[i].dense[k].bias,
             second_moment_[i].dense[k].bias, grads[i].dense[k].bias);
    }
  }
}

}  // namespace sasv::nn
