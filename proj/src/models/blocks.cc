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

#include "sasv/models/blocks.h"

#include <stdexcept>

namespace sasv::models {

using nn::LayerSpec;

nn::MlpSpec FusionBlockSpec(Index asv_dim, Index cm_dim) {
  return nn::MlpSpec({LayerSpec::Dense(asv_dim + cm_dim, 128), LayerSpec::Elu(),
                      LayerSpec::Dense(128, 128), LayerSpec::Elu(),
                      LayerSpec::Dense(128, 64), LayerSpec::Elu(),
                      LayerSpec::Dense(64, kFusionOutDim)});
}

nn::MlpSpec ScoreProjectionSpec() {
  return nn::MlpSpec({LayerSpec::Dense(2 * kFusionOutDim, 128),
                      LayerSpec::Elu(), LayerSpec::Dense(128, 64),
                      LayerSpec::Elu(), LayerSpec::Dense(64, 2)});
}

nn::MlpSpec ScoreFusionSpec(Index n_scores) {
  if (n_scores != 2 && n_scores != 3) {
    throw std::invalid_argument("score fusion takes 2 or 3 scores");
  }
  return nn::MlpSpec({LayerSpec::Dense(n_scores, 16), LayerSpec::Elu(),
                      LayerSpec::Dense(16, 16), LayerSpec::Elu(),
                      LayerSpec::Dense(16, 2)});
}

nn::MlpSpec ProjectorTrunkSpec(Index asv_dim, Index cm_dim) {
  return nn::MlpSpec({LayerSpec::Dense(asv_dim + cm_dim, 256), LayerSpec::Elu(),
                      LayerSpec::Dense(256, 256), LayerSpec::Elu(),
                      LayerSpec::Dense(256, kProjectionDim), LayerSpec::Elu()});
}

nn::MlpSpec ProjectorHeadSpec(Index asv_dim, Index cm_dim) {
  return nn::MlpSpec(
      {LayerSpec::Dense(kProjectionDim + asv_dim + cm_dim, kProjectionDim)});
}

nn::MlpSpec Baseline2Spec(Index asv_dim, Index cm_dim) {
  return nn::MlpSpec({LayerSpec::Dense(2 * asv_dim + cm_dim, 1024),
                      LayerSpec::Elu(), LayerSpec::Dense(1024, 1024),
                      LayerSpec::Elu(), LayerSpec::Dense(1024, 1024),
                      LayerSpec::Elu(), LayerSpec::Dense(1024, 2)});
}

}  // namespace sasv::models
