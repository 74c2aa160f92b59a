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

#ifndef SASV_MODELS_CHECKPOINT_H_
#define SASV_MODELS_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include "sasv/nn/mlp.h"

namespace sasv::models {

// Self-describing model file:
//
//   "SASVMDL1"
//   u16 len, kind tag bytes
//   u32 block count; per block: u16 len, name bytes, u32 layer count,
//       per layer: u8 kind (0 = FC, 1 = ELU), u32 in_dim, u32 out_dim
//   u32 extra count; per extra: u16 len, name bytes, u32 n, n x f64
//   parameters: per block, per FC layer: weight (row-major) then bias, f64
//
// All integers and floats little-endian.
struct Checkpoint {
  struct NamedBlock {
    std::string name;
    nn::MlpSpec spec;
    nn::MlpParams params;
  };

  std::string kind;
  std::vector<NamedBlock> blocks;
  std::vector<std::pair<std::string, std::vector<double>>> extras;

  // Throws std::runtime_error when absent.
  const NamedBlock& Block(const std::string& name) const;
  const std::vector<double>& Extra(const std::string& name) const;
  double Scalar(const std::string& name) const;
};

std::string EncodeCheckpoint(const Checkpoint& checkpoint);
Checkpoint DecodeCheckpoint(const std::string& bytes,
                            const std::string& source = "<memory>");

void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace sasv::models

#endif  // SASV_MODELS_CHECKPOINT_H_
