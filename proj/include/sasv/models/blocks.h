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

#ifndef SASV_MODELS_BLOCKS_H_
#define SASV_MODELS_BLOCKS_H_

#include <random>
#include <string>

#include "sasv/nn/mlp.h"

namespace sasv::models {

using nn::Index;
using nn::Matrix;
using nn::Vector;

inline constexpr Index kDefaultAsvDim = 192;
inline constexpr Index kDefaultCmDim = 160;

// A network block: its architecture and its weights.
struct Block {
  nn::MlpSpec spec;
  nn::MlpParams params;

  static Block Initialized(nn::MlpSpec spec, std::mt19937_64& rng) {
    nn::MlpParams params = nn::InitParams(spec, rng);
    return {std::move(spec), std::move(params)};
  }
};

// Embedding fusion block (u1, u2): (asv + cm) -> 128 -> 128 -> 64 -> 160.
nn::MlpSpec FusionBlockSpec(Index asv_dim = kDefaultAsvDim,
                            Index cm_dim = kDefaultCmDim);
// Score projection block (pj): 320 -> 128 -> 64 -> 2.
nn::MlpSpec ScoreProjectionSpec();
// Score fusion head (sf): n_scores (2 or 3) -> 16 -> 16 -> 2.
nn::MlpSpec ScoreFusionSpec(Index n_scores);
// Projector trunk (f): (asv + cm) -> 256 -> 256 -> 128, ELU after each.
nn::MlpSpec ProjectorTrunkSpec(Index asv_dim = kDefaultAsvDim,
                               Index cm_dim = kDefaultCmDim);
// Projector head (g): (128 + asv + cm) -> 128, single affine layer.
nn::MlpSpec ProjectorHeadSpec(Index asv_dim = kDefaultAsvDim,
                              Index cm_dim = kDefaultCmDim);
// Back-end ensemble baseline: (2 * asv + cm) -> 1024 -> 1024 -> 1024 -> 2.
nn::MlpSpec Baseline2Spec(Index asv_dim = kDefaultAsvDim,
                          Index cm_dim = kDefaultCmDim);

inline constexpr Index kFusionOutDim = 160;
inline constexpr Index kProjectionDim = 128;

}  // namespace sasv::models

#endif  // SASV_MODELS_BLOCKS_H_
