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

#include "sasv/models/msfm.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sasv/common/error.h"
#include "sasv/common/logging.h"
#include "sasv/nn/loss.h"

namespace sasv::models {

namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("MSFM wiring: " + what);
}

Vector Concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

MsfmModel::MsfmModel(Index asv_dim, Index cm_dim, bool use_sssv_score,
                     CmScorer cm_scorer, std::mt19937_64& rng)
    : MsfmModel(Block::Initialized(FusionBlockSpec(asv_dim, cm_dim), rng),
                Block::Initialized(FusionBlockSpec(asv_dim, cm_dim), rng),
                Block::Initialized(ScoreProjectionSpec(), rng),
                Block::Initialized(ScoreFusionSpec(use_sssv_score ? 3 : 2), rng),
                use_sssv_score, std::move(cm_scorer)) {}

MsfmModel::MsfmModel(Block u1, Block u2, Block pj, Block sf,
                     bool use_sssv_score, CmScorer cm_scorer)
    : u1_(std::move(u1)),
      u2_(std::move(u2)),
      pj_(std::move(pj)),
      sf_(std::move(sf)),
      use_sssv_score_(use_sssv_score),
      cm_scorer_(std::move(cm_scorer)) {
  for (const Block* b : {&u1_, &u2_, &pj_, &sf_}) {
    nn::ValidateParams(b->spec, b->params);
  }
  Require(u1_.spec.input_dim() == u2_.spec.input_dim(),
          "u1 and u2 must take the same input width");
  Require(pj_.spec.input_dim() ==
              u1_.spec.output_dim() + u2_.spec.output_dim(),
          "pj input must equal u1 + u2 output widths");
  Require(pj_.spec.output_dim() == 2, "pj must output 2 logits");
  Require(sf_.spec.input_dim() == (use_sssv_score_ ? 3 : 2),
          "sf input must be 3 with the SSSV score, 2 without");
  Require(sf_.spec.output_dim() == 2, "sf must output 2 logits");
  Require(cm_scorer_.fitted(), "CM scorer must be fitted");
  cm_dim_ = cm_scorer_.weight().size();
  asv_dim_ = u1_.spec.input_dim() - cm_dim_;
  Require(asv_dim_ > 0, "u1 input narrower than the CM embedding");
}

const char* MsfmModel::kind() const {
  return use_sssv_score_ ? "msfm" : "msfm-no-sssv";
}

Vector MsfmModel::SssvForward(const Vector& enroll_asv,
                              const Vector& enroll_cm, const Vector& test_asv,
                              const Vector& test_cm) const {
  if (enroll_asv.size() != asv_dim_ || test_asv.size() != asv_dim_ ||
      enroll_cm.size() != cm_dim_ || test_cm.size() != cm_dim_) {
    throw std::invalid_argument("SSSV: expected ASV dim " +
                                std::to_string(asv_dim_) + " and CM dim " +
                                std::to_string(cm_dim_));
  }
  const Vector h1 = nn::Predict(u1_.spec, u1_.params, Concat(enroll_asv, enroll_cm));
  const Vector h2 = nn::Predict(u2_.spec, u2_.params, Concat(test_asv, test_cm));
  return nn::Predict(pj_.spec, pj_.params, Concat(h1, h2));
}

MsfmModel::Fusion MsfmModel::FuseScores(double asv_score, double cm_score,
                                        std::optional<double> sssv_score) const {
  if (sssv_score.has_value() != use_sssv_score_) {
    throw std::invalid_argument(
        use_sssv_score_ ? "score fusion expects an SSSV score"
                        : "score fusion without SSSV takes exactly 2 scores");
  }
  Vector input(use_sssv_score_ ? 3 : 2);
  input[0] = asv_score;
  input[1] = cm_score;
  if (use_sssv_score_) input[2] = *sssv_score;
  Fusion out;
  out.logits = nn::Predict(sf_.spec, sf_.params, input);
  out.sasv_score = nn::Softmax(out.logits)[1];
  return out;
}

double MsfmModel::Score(const TrialEmbeddings& trial) const {
  const double asv = CosineScore(trial.enroll_asv, trial.test_asv);
  const double cm = cm_scorer_.Probability(trial.test_cm);
  std::optional<double> sssv;
  if (use_sssv_score_) {
    sssv = nn::Softmax(SssvForward(trial.enroll_asv, trial.enroll_cm,
                                   trial.test_asv, trial.test_cm))[1];
  }
  return FuseScores(asv, cm, sssv).sasv_score;
}

MsfmModel::Losses MsfmModel::Loss(const TrialEmbeddings& pair,
                                  const Vector& sv_target,
                                  const Vector& sasv_target) const {
  const Vector s = SssvForward(pair.enroll_asv, pair.enroll_cm, pair.test_asv,
                               pair.test_cm);
  std::optional<double> sssv;
  if (use_sssv_score_) sssv = nn::Softmax(s)[1];
  const Fusion fused =
      FuseScores(CosineScore(pair.enroll_asv, pair.test_asv),
                 cm_scorer_.Probability(pair.test_cm), sssv);
  Losses losses;
  losses.sssv = nn::CceLoss(s, sv_target);
  losses.sf = nn::CceLoss(fused.logits, sasv_target);
  losses.total = losses.sssv + losses.sf;
  return losses;
}

MsfmModel::Batch MsfmModel::MakeBatch(
    std::span<const sampling::TrainingPair> pairs,
    const TrainingData& data) const {
  std::vector<std::string> enroll_ids;
  std::vector<std::string> test_ids;
  Batch batch;
  const auto n = static_cast<Index>(pairs.size());
  batch.asv_scores.resize(n);
  batch.cm_scores.resize(n);
  for (Index j = 0; j < n; ++j) {
    const auto& pair = pairs[static_cast<std::size_t>(j)];
    enroll_ids.push_back(pair.enroll_utterance_id);
    test_ids.push_back(pair.test_utterance_id);
    batch.asv_scores[j] = CosineScore(data.asv().At(pair.enroll_utterance_id),
                                      data.asv().At(pair.test_utterance_id));
    batch.cm_scores[j] = cm_scorer_.Probability(
        data.cm().At(pair.test_utterance_id));
    batch.sv_labels.push_back(pair.SameSpeaker() ? 1 : 0);
    batch.sasv_labels.push_back(pair.IsTarget() ? 1 : 0);
  }
  batch.enroll = data.Stacked(enroll_ids);
  batch.test = data.Stacked(test_ids);
  return batch;
}

MsfmModel::Losses MsfmModel::LossAndGradients(
    const Batch& batch, std::vector<nn::MlpParams>* grads) const {
  const Index n = batch.enroll.cols();
  const Index half = u1_.spec.output_dim();

  const nn::ForwardResult r1 = nn::Forward(u1_.spec, u1_.params, batch.enroll);
  const nn::ForwardResult r2 = nn::Forward(u2_.spec, u2_.params, batch.test);
  Matrix hidden(pj_.spec.input_dim(), n);
  hidden.topRows(half) = r1.output;
  hidden.bottomRows(r2.output.rows()) = r2.output;
  const nn::ForwardResult rp = nn::Forward(pj_.spec, pj_.params, hidden);
  const nn::BatchLoss sssv_loss = nn::CceBatch(rp.output, batch.sv_labels);
  const Matrix sssv_prob = nn::SoftmaxColumns(rp.output);

  Matrix scores(sf_.spec.input_dim(), n);
  scores.row(0) = batch.asv_scores.transpose();
  scores.row(1) = batch.cm_scores.transpose();
  if (use_sssv_score_) scores.row(2) = sssv_prob.row(1);
  const nn::ForwardResult rf = nn::Forward(sf_.spec, sf_.params, scores);
  const nn::BatchLoss sf_loss = nn::CceBatch(rf.output, batch.sasv_labels);

  Losses losses{sssv_loss.loss, sf_loss.loss, sssv_loss.loss + sf_loss.loss};
  if (grads == nullptr) return losses;

  nn::Gradients gf = nn::Backward(sf_.spec, sf_.params, rf.tape, sf_loss.gradient);
  Matrix d_logits = sssv_loss.gradient;
  if (use_sssv_score_) {
    // d softmax(s)_1 / d s_k = p_1 (delta_k1 - p_k)
    for (Index j = 0; j < n; ++j) {
      const double upstream = gf.input(2, j) * sssv_prob(1, j);
      for (Index k = 0; k < 2; ++k) {
        d_logits(k, j) += upstream * ((k == 1 ? 1.0 : 0.0) - sssv_prob(k, j));
      }
    }
  }
  nn::Gradients gp = nn::Backward(pj_.spec, pj_.params, rp.tape, d_logits);
  nn::Gradients g1 =
      nn::Backward(u1_.spec, u1_.params, r1.tape, gp.input.topRows(half));
  nn::Gradients g2 = nn::Backward(u2_.spec, u2_.params, r2.tape,
                                  gp.input.bottomRows(r2.output.rows()));
  grads->clear();
  grads->push_back(std::move(g1.params));
  grads->push_back(std::move(g2.params));
  grads->push_back(std::move(gp.params));
  grads->push_back(std::move(gf.params));
  return losses;
}

std::vector<nn::MlpParams*> MsfmModel::ParamSets() {
  return {&u1_.params, &u2_.params, &pj_.params, &sf_.params};
}

Checkpoint MsfmModel::ToCheckpoint() const {
  Checkpoint c;
  c.kind = kind();
  c.blocks = {{"u1", u1_.spec, u1_.params},
              {"u2", u2_.spec, u2_.params},
              {"pj", pj_.spec, pj_.params},
              {"sf", sf_.spec, sf_.params}};
  const auto& mid = cm_scorer_.midpoint();
  const auto& dir = cm_scorer_.weight();
  c.extras = {{"cm_midpoint", {mid.data(), mid.data() + mid.size()}},
              {"cm_weight", {dir.data(), dir.data() + dir.size()}}};
  return c;
}

MsfmModel MsfmModel::FromCheckpoint(const Checkpoint& c) {
  bool use_sssv;
  if (c.kind == "msfm") {
    use_sssv = true;
  } else if (c.kind == "msfm-no-sssv") {
    use_sssv = false;
  } else {
    throw std::runtime_error("checkpoint kind '" + c.kind + "' is not MSFM");
  }
  auto block = [&](const char* name) {
    const auto& b = c.Block(name);
    return Block{b.spec, b.params};
  };
  const auto& mid = c.Extra("cm_midpoint");
  const auto& dir = c.Extra("cm_weight");
  CmScorer scorer(Eigen::Map<const Vector>(mid.data(), static_cast<Index>(mid.size())),
                  Eigen::Map<const Vector>(dir.data(), static_cast<Index>(dir.size())));
  return MsfmModel(block("u1"), block("u2"), block("pj"), block("sf"), use_sssv,
                   std::move(scorer));
}

MsfmTrainResult TrainMsfm(const TrainingData& data,
                          const nn::TrainConfig& config, bool use_sssv_score) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  MsfmModel model(data.asv().dim(), data.cm().dim(), use_sssv_score,
                  CmScorer::Fit(data.records(), data.cm()), rng);
  nn::Optimizer optimizer(config);
  std::vector<EpochLog> log;
  std::vector<nn::MlpParams> grads;
  const auto params = model.ParamSets();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    auto pairs = sampling::SampleTrainingPairs(data.index(),
                                               config.samples_per_epoch, rng);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EpochLog entry{epoch, 0.0, 0.0, 0.0};
    const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
    int step = 0;
    for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
      ++step;
      const std::size_t count = std::min(batch_size, pairs.size() - start);
      const auto batch = model.MakeBatch(
          std::span<const sampling::TrainingPair>(pairs).subspan(start, count),
          data);
      const auto losses = model.LossAndGradients(batch, &grads);
      if (!std::isfinite(losses.total)) {
        throw TrainingError("MSFM loss became non-finite at epoch " +
                            std::to_string(epoch) + ", step " +
                            std::to_string(step));
      }
      optimizer.Step(params, grads);
      const double w = static_cast<double>(count);
      entry.loss += w * losses.total;
      entry.aux_loss += w * losses.sssv;
      entry.head_loss += w * losses.sf;
    }
    const double total = static_cast<double>(pairs.size());
    entry.loss /= total;
    entry.aux_loss /= total;
    entry.head_loss /= total;
    SASV_LOG_INFO("msfm epoch {}/{}: L_total {:.5f} (L_sssv {:.5f}, L_sf {:.5f})",
                  epoch, config.epochs, entry.loss, entry.aux_loss,
                  entry.head_loss);
    log.push_back(entry);
  }
  return {std::move(model), std::move(log)};
}

}  // namespace sasv::models
