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

#ifndef SASV_NN_MLP_H_
#define SASV_NN_MLP_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sasv::nn {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class LayerKind : std::uint8_t { kFullyConnected = 0, kElu = 1 };

struct LayerSpec {
  LayerKind kind;
  Index in_dim;
  Index out_dim;

  static LayerSpec Dense(Index in_dim, Index out_dim) {
    return {LayerKind::kFullyConnected, in_dim, out_dim};
  }
  // Dimension is taken from the preceding layer when the spec is built.
  static LayerSpec Elu() { return {LayerKind::kElu, 0, 0}; }

  bool operator==(const LayerSpec&) const = default;
};

// Ordered stack of fully-connected and ELU layers. The constructor checks
// that the dimensions chain and fills in the ELU widths.
class MlpSpec {
 public:
  MlpSpec() = default;
  explicit MlpSpec(std::vector<LayerSpec> layers);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  Index input_dim() const;
  Index output_dim() const;
  std::size_t num_dense() const;
  bool empty() const { return layers_.empty(); }

  std::string ToString() const;

  bool operator==(const MlpSpec&) const = default;

 private:
  std::vector<LayerSpec> layers_;
};

struct DenseParams {
  Matrix weight;  // out_dim x in_dim
  Vector bias;    // out_dim
};

// Weights and biases of every fully-connected layer, in layer order.
struct MlpParams {
  std::vector<DenseParams> dense;

  std::size_t NumScalars() const;
  bool AllFinite() const;
  void SetZero();
  bool operator==(const MlpParams& other) const;
};

// Uniform(-sqrt(6 / (in + out)), +sqrt(6 / (in + out))) weights, zero biases.
MlpParams InitParams(const MlpSpec& spec, std::mt19937_64& rng);
MlpParams ZeroParams(const MlpSpec& spec);

// Throws std::invalid_argument naming the first mismatching layer.
void ValidateParams(const MlpSpec& spec, const MlpParams& params);

// Element-wise ELU with alpha = 1. Throws on non-finite input.
Vector Elu(const Vector& x);

// W * x + b for a single layer.
Vector DenseForward(const DenseParams& layer, const Vector& input);

// Per-layer inputs recorded by Forward; consumed by Backward. Columns are
// batch samples.
struct Tape {
  std::vector<Matrix> layer_inputs;
};

struct ForwardResult {
  Matrix output;
  Tape tape;
};

// Batched forward pass: input is in_dim x batch.
ForwardResult Forward(const MlpSpec& spec, const MlpParams& params,
                      const Matrix& input);
// Forward without recording the tape.
Matrix Predict(const MlpSpec& spec, const MlpParams& params,
               const Matrix& input);
Vector Predict(const MlpSpec& spec, const MlpParams& params,
               const Vector& input);

struct Gradients {
  MlpParams params;  // summed over the batch
  Matrix input;      // in_dim x batch
};

Gradients Backward(const MlpSpec& spec, const MlpParams& params,
                   const Tape& tape, const Matrix& output_gradient);

// a += b, shape-checked.
void Accumulate(MlpParams& a, const MlpParams& b);

}  // namespace sasv::nn

#endif  // SASV_NN_MLP_H_
