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

#include "sasv/models/iep.h"

#include <cmath>
#include <stdexcept>

#include "sasv/common/error.h"
#include "sasv/common/logging.h"
#include "sasv/sampling/pairs.h"

namespace sasv::models {

namespace {

// cos(a, b) and its gradients with respect to a and b.
double CosineWithGrad(const Eigen::Ref<const Vector>& a,
                      const Eigen::Ref<const Vector>& b, Vector* da,
                      Vector* db) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("triplet loss: zero-norm embedding");
  }
  const double cos = a.dot(b) / (na * nb);
  if (da != nullptr) *da = b / (na * nb) - cos * a / (na * na);
  if (db != nullptr) *db = a / (na * nb) - cos * b / (nb * nb);
  return cos;
}

}  // namespace

double TripletLossColumns(const Matrix& anchors, const Matrix& positives,
                          const Matrix& negatives, double margin,
                          Matrix* d_anchors, Matrix* d_positives,
                          Matrix* d_negatives) {
  if (anchors.rows() != positives.rows() ||
      anchors.rows() != negatives.rows() ||
      anchors.cols() != positives.cols() ||
      anchors.cols() != negatives.cols()) {
    throw std::invalid_argument("triplet loss: shape mismatch");
  }
  const Index c = anchors.cols();
  if (c == 0) throw std::invalid_argument("triplet loss: no triplets");
  const bool want_grad = d_anchors != nullptr;
  if (want_grad) {
    d_anchors->setZero(anchors.rows(), c);
    d_positives->setZero(anchors.rows(), c);
    d_negatives->setZero(anchors.rows(), c);
  }
  const double scale = 1.0 / static_cast<double>(c);
  double total = 0.0;
  Vector dap_a, dap_p, dan_a, dan_n;
  for (Index i = 0; i < c; ++i) {
    const double cos_ap = CosineWithGrad(anchors.col(i), positives.col(i),
                                         want_grad ? &dap_a : nullptr,
                                         want_grad ? &dap_p : nullptr);
    const double cos_an = CosineWithGrad(anchors.col(i), negatives.col(i),
                                         want_grad ? &dan_a : nullptr,
                                         want_grad ? &dan_n : nullptr);
    const double hinge = cos_an - cos_ap + margin;
    if (hinge <= 0.0) continue;
    total += hinge;
    if (want_grad) {
      d_anchors->col(i) = scale * (dan_a - dap_a);
      d_positives->col(i) = -scale * dap_p;
      d_negatives->col(i) = scale * dan_n;
    }
  }
  return total * scale;
}

double TripletLoss(std::span<const Vector> anchors,
                   std::span<const Vector> positives,
                   std::span<const Vector> negatives, double margin) {
  if (anchors.size() != positives.size() ||
      anchors.size() != negatives.size() || anchors.empty()) {
    throw std::invalid_argument("triplet loss: list sizes differ or empty");
  }
  const Index dim = anchors.front().size();
  const auto c = static_cast<Index>(anchors.size());
  Matrix a(dim, c), p(dim, c), n(dim, c);
  for (Index i = 0; i < c; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (anchors[k].size() != dim || positives[k].size() != dim ||
        negatives[k].size() != dim) {
      throw std::invalid_argument("triplet loss: embedding length mismatch");
    }
    a.col(i) = anchors[k];
    p.col(i) = positives[k];
    n.col(i) = negatives[k];
  }
  return TripletLossColumns(a, p, n, margin);
}

IepModel::IepModel(Index asv_dim, Index cm_dim, double margin,
                   std::mt19937_64& rng)
    : IepModel(Block::Initialized(ProjectorTrunkSpec(asv_dim, cm_dim), rng),
               Block::Initialized(ProjectorHeadSpec(asv_dim, cm_dim), rng),
               asv_dim, cm_dim, margin) {}

IepModel::IepModel(Block f, Block g, Index asv_dim, Index cm_dim,
                   double margin)
    : f_(std::move(f)),
      g_(std::move(g)),
      asv_dim_(asv_dim),
      cm_dim_(cm_dim),
      margin_(margin) {
  nn::ValidateParams(f_.spec, f_.params);
  nn::ValidateParams(g_.spec, g_.params);
  if (f_.spec.input_dim() != asv_dim + cm_dim) {
    throw std::invalid_argument("IEP wiring: f input must be asv + cm dims");
  }
  if (g_.spec.input_dim() != f_.spec.output_dim() + asv_dim + cm_dim) {
    throw std::invalid_argument(
        "IEP wiring: g input must be f output + asv + cm dims");
  }
  if (!(margin >= 0.0 && margin <= 2.0)) {
    throw std::invalid_argument("IEP margin must lie in [0, 2]");
  }
}

Matrix IepModel::ProjectStacked(const Matrix& stacked) const {
  if (stacked.rows() != asv_dim_ + cm_dim_) {
    throw std::invalid_argument("IEP: input has " +
                                std::to_string(stacked.rows()) +
                                " rows, expected " +
                                std::to_string(asv_dim_ + cm_dim_));
  }
  const Matrix trunk = nn::Predict(f_.spec, f_.params, stacked);
  Matrix head_in(g_.spec.input_dim(), stacked.cols());
  head_in.topRows(trunk.rows()) = trunk;
  head_in.bottomRows(stacked.rows()) = stacked;
  return nn::Predict(g_.spec, g_.params, head_in);
}

Vector IepModel::Project(const Vector& asv, const Vector& cm) const {
  if (asv.size() != asv_dim_ || cm.size() != cm_dim_) {
    throw std::invalid_argument("IEP: expected ASV dim " +
                                std::to_string(asv_dim_) + " and CM dim " +
                                std::to_string(cm_dim_));
  }
  Matrix stacked(asv_dim_ + cm_dim_, 1);
  stacked.col(0) << asv, cm;
  return ProjectStacked(stacked).col(0);
}

double IepModel::Score(const TrialEmbeddings& trial) const {
  return CosineScore(Project(trial.enroll_asv, trial.enroll_cm),
                     Project(trial.test_asv, trial.test_cm));
}

double IepModel::TripletLossAndGradients(
    const TripletBatch& batch, std::vector<nn::MlpParams>* grads) const {
  const Index c = batch.anchors.cols();
  const Index width = asv_dim_ + cm_dim_;
  if (batch.positives.cols() != c || batch.negatives.cols() != c ||
      batch.anchors.rows() != width || batch.positives.rows() != width ||
      batch.negatives.rows() != width) {
    throw std::invalid_argument("IEP: malformed triplet batch");
  }
  // One pass over [A | P | N].
  Matrix stacked(width, 3 * c);
  stacked << batch.anchors, batch.positives, batch.negatives;
  const nn::ForwardResult trunk = nn::Forward(f_.spec, f_.params, stacked);
  Matrix head_in(g_.spec.input_dim(), 3 * c);
  head_in.topRows(trunk.output.rows()) = trunk.output;
  head_in.bottomRows(width) = stacked;
  const nn::ForwardResult head = nn::Forward(g_.spec, g_.params, head_in);

  Matrix da, dp, dn;
  const bool want = grads != nullptr;
  const double loss = TripletLossColumns(
      head.output.leftCols(c), head.output.middleCols(c, c),
      head.output.rightCols(c), margin_, want ? &da : nullptr,
      want ? &dp : nullptr, want ? &dn : nullptr);
  if (!want) return loss;

  Matrix dz(head.output.rows(), 3 * c);
  dz << da, dp, dn;
  nn::Gradients gg = nn::Backward(g_.spec, g_.params, head.tape, dz);
  nn::Gradients gf = nn::Backward(f_.spec, f_.params, trunk.tape,
                                  gg.input.topRows(trunk.output.rows()));
  grads->clear();
  grads->push_back(std::move(gf.params));
  grads->push_back(std::move(gg.params));
  return loss;
}

std::vector<nn::MlpParams*> IepModel::ParamSets() {
  return {&f_.params, &g_.params};
}

Checkpoint IepModel::ToCheckpoint() const {
  Checkpoint c;
  c.kind = "iep";
  c.blocks = {{"f", f_.spec, f_.params}, {"g", g_.spec, g_.params}};
  c.extras = {{"asv_dim", {static_cast<double>(asv_dim_)}},
              {"cm_dim", {static_cast<double>(cm_dim_)}},
              {"margin", {margin_}}};
  return c;
}

IepModel IepModel::FromCheckpoint(const Checkpoint& c) {
  if (c.kind != "iep") {
    throw std::runtime_error("checkpoint kind '" + c.kind + "' is not IEP");
  }
  const auto& f = c.Block("f");
  const auto& g = c.Block("g");
  return IepModel(Block{f.spec, f.params}, Block{g.spec, g.params},
                  static_cast<Index>(c.Scalar("asv_dim")),
                  static_cast<Index>(c.Scalar("cm_dim")), c.Scalar("margin"));
}

IepTrainResult TrainIep(const TrainingData& data,
                        const nn::TrainConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  IepModel model(data.asv().dim(), data.cm().dim(), config.margin, rng);
  nn::Optimizer optimizer(config);
  const auto params = model.ParamSets();
  std::vector<nn::MlpParams> grads;
  std::vector<EpochLog> log;
  const int c = config.triplets_per_batch;
  const int steps = (config.samples_per_epoch + c - 1) / c;

  std::vector<std::string> a_ids, p_ids, n_ids;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double sum = 0.0;
    for (int step = 1; step <= steps; ++step) {
      const auto triplets = sampling::SampleTriplets(data.index(), c, rng);
      a_ids.clear();
      p_ids.clear();
      n_ids.clear();
      for (const auto& t : triplets) {
        a_ids.push_back(t.anchor_id);
        p_ids.push_back(t.positive_id);
        n_ids.push_back(t.negative_id);
      }
      IepModel::TripletBatch batch{data.Stacked(a_ids), data.Stacked(p_ids),
                                   data.Stacked(n_ids)};
      const double loss = model.TripletLossAndGradients(batch, &grads);
      if (!std::isfinite(loss)) {
        throw TrainingError("IEP loss became non-finite at epoch " +
                            std::to_string(epoch) + ", step " +
                            std::to_string(step));
      }
      optimizer.Step(params, grads);
      sum += loss;
    }
    EpochLog entry{epoch, sum / steps, 0.0, 0.0};
    SASV_LOG_INFO("iep epoch {}/{}: triplet loss {:.5f}", epoch, config.epochs,
                  entry.loss);
    log.push_back(entry);
  }
  return {std::move(model), std::move(log)};
}

}  // namespace sasv::models
