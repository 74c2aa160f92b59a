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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "sasv/models/baselines.h"
#include "sasv/models/blocks.h"
#include "sasv/models/checkpoint.h"
#include "sasv/models/cm_scorer.h"
#include "sasv/models/iep.h"
#include "sasv/models/msfm.h"
#include "sasv/models/pipeline.h"
#include "sasv/nn/grad_check.h"
#include "sasv/nn/loss.h"
#include "sasv/sampling/synthetic.h"

namespace sasv::models {
namespace {

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Vector RandomVector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

CmScorer UnitCmScorer(Index cm_dim) {
  Vector direction = Vector::Zero(cm_dim);
  direction[0] = 1.0;
  return CmScorer(Vector::Zero(cm_dim), direction);
}

Block ZeroBlock(const nn::MlpSpec& spec) { return {spec, nn::ZeroParams(spec)}; }

MsfmModel ZeroMsfm(bool use_sssv) {
  return MsfmModel(ZeroBlock(FusionBlockSpec()), ZeroBlock(FusionBlockSpec()),
                   ZeroBlock(ScoreProjectionSpec()),
                   ZeroBlock(ScoreFusionSpec(use_sssv ? 3 : 2)), use_sssv,
                   UnitCmScorer(kDefaultCmDim));
}

TrialEmbeddings RandomTrial(std::mt19937_64& rng, Index asv_dim = 192,
                            Index cm_dim = 160) {
  return {RandomVector(asv_dim, rng), RandomVector(cm_dim, rng),
          RandomVector(asv_dim, rng), RandomVector(cm_dim, rng)};
}

Vector OneHot(int hot) {
  Vector v = Vector::Zero(2);
  v[hot] = 1.0;
  return v;
}

TEST(CosineTest, Examples) {
  EXPECT_DOUBLE_EQ(CosineScore(Vec({1, 0}), Vec({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(CosineScore(Vec({1, 0}), Vec({0, 1})), 0.0);
  EXPECT_NEAR(CosineScore(Vec({1, 0}), Vec({1, 1})), 1.0 / std::sqrt(2.0),
              1e-15);
  EXPECT_THROW(CosineScore(Vec({0, 0}), Vec({1, 1})), std::invalid_argument);
  EXPECT_THROW(CosineScore(Vec({1, 0}), Vec({1, 1, 1})),
               std::invalid_argument);
}

TEST(MsfmTest, SssvOutputLength) {
  std::mt19937_64 rng(41);
  MsfmModel model(192, 160, true, UnitCmScorer(160), rng);
  const TrialEmbeddings t = RandomTrial(rng);
  const Vector s =
      model.SssvForward(t.enroll_asv, t.enroll_cm, t.test_asv, t.test_cm);
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s, model.SssvForward(t.enroll_asv, t.enroll_cm, t.test_asv,
                                 t.test_cm));
  EXPECT_THROW(model.SssvForward(t.enroll_asv, t.enroll_cm, t.test_asv,
                                 Vector::Zero(159)),
               std::invalid_argument);
}

TEST(MsfmTest, ZeroWeightsGiveZeroLogits) {
  std::mt19937_64 rng(42);
  const MsfmModel model = ZeroMsfm(true);
  const TrialEmbeddings t = RandomTrial(rng);
  EXPECT_EQ(model.SssvForward(t.enroll_asv, t.enroll_cm, t.test_asv, t.test_cm),
            Vector::Zero(2));
}

TEST(MsfmTest, FuseScoresArity) {
  std::mt19937_64 rng(43);
  MsfmModel with(192, 160, true, UnitCmScorer(160), rng);
  MsfmModel without(192, 160, false, UnitCmScorer(160), rng);
  EXPECT_EQ(with.FuseScores(0.3, 0.8, 0.6).logits.size(), 2);
  EXPECT_EQ(without.FuseScores(0.3, 0.8, std::nullopt).logits.size(), 2);
  EXPECT_THROW(with.FuseScores(0.3, 0.8, std::nullopt), std::invalid_argument);
  EXPECT_THROW(without.FuseScores(0.3, 0.8, 0.6), std::invalid_argument);
  EXPECT_EQ(with.sf().spec.input_dim(), 3);
  EXPECT_EQ(without.sf().spec.input_dim(), 2);
}

TEST(MsfmTest, SasvScoreIsProbabilityAndMonotoneInMargin) {
  std::mt19937_64 rng(44);
  MsfmModel model(192, 160, true, UnitCmScorer(160), rng);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const auto a = model.FuseScores(u(rng), u(rng), 0.5 + 0.5 * u(rng));
    const auto b = model.FuseScores(u(rng), u(rng), 0.5 + 0.5 * u(rng));
    EXPECT_GE(a.sasv_score, 0.0);
    EXPECT_LE(a.sasv_score, 1.0);
    const double ma = a.logits[1] - a.logits[0];
    const double mb = b.logits[1] - b.logits[0];
    if (ma < mb) EXPECT_LE(a.sasv_score, b.sasv_score);
  }
}

TEST(MsfmTest, WiringMismatchRejected) {
  EXPECT_THROW(MsfmModel(ZeroBlock(FusionBlockSpec()),
                         ZeroBlock(FusionBlockSpec()),
                         ZeroBlock(ScoreProjectionSpec()),
                         ZeroBlock(ScoreFusionSpec(2)), true,
                         UnitCmScorer(160)),
               std::invalid_argument);
  EXPECT_THROW(MsfmModel(ZeroBlock(FusionBlockSpec(192, 150)),
                         ZeroBlock(FusionBlockSpec()),
                         ZeroBlock(ScoreProjectionSpec()),
                         ZeroBlock(ScoreFusionSpec(3)), true,
                         UnitCmScorer(160)),
               std::invalid_argument);
  EXPECT_THROW(MsfmModel(ZeroBlock(FusionBlockSpec()),
                         ZeroBlock(FusionBlockSpec()),
                         ZeroBlock(ScoreProjectionSpec()),
                         ZeroBlock(ScoreFusionSpec(3)), true, CmScorer()),
               std::invalid_argument);
}

TEST(MsfmTest, UniformHeadsGiveTwoLn2) {
  std::mt19937_64 rng(45);
  const MsfmModel model = ZeroMsfm(true);
  const auto losses = model.Loss(RandomTrial(rng), OneHot(1), OneHot(0));
  EXPECT_NEAR(losses.sssv, std::log(2.0), 1e-15);
  EXPECT_NEAR(losses.sf, std::log(2.0), 1e-15);
  EXPECT_NEAR(losses.total, 2.0 * std::log(2.0), 1e-15);
}

TEST(MsfmTest, TotalIsSumOfTerms) {
  std::mt19937_64 rng(46);
  MsfmModel model(192, 160, true, UnitCmScorer(160), rng);
  for (int i = 0; i < 20; ++i) {
    const auto l = model.Loss(RandomTrial(rng), OneHot(i % 2), OneHot(i % 3 == 0));
    EXPECT_EQ(l.total, l.sssv + l.sf);
    EXPECT_GE(l.total, std::max(l.sssv, l.sf));
    EXPECT_GE(std::min(l.sssv, l.sf), 0.0);
  }
}

sampling::SyntheticConfig SmallSynthetic() {
  sampling::SyntheticConfig c;
  c.n_speakers = 12;
  c.utts_per_speaker = 8;
  c.spoofs_per_speaker = 6;
  c.asv_dim = 24;
  c.cm_dim = 12;
  c.speaker_rank = 6;
  c.session_rank = 2;
  c.train_fraction = 0.5;
  c.dev_fraction = 0.25;
  return c;
}

nn::TrainConfig SmallTrain() {
  nn::TrainConfig c;
  c.epochs = 6;
  c.samples_per_epoch = 256;
  c.triplets_per_batch = 32;
  c.learning_rate = 3e-3;
  return c;
}

TEST(MsfmTest, BatchGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(47);
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  for (bool use_sssv : {true, false}) {
    SCOPED_TRACE(use_sssv);
    MsfmModel model(24, 12, use_sssv, CmScorer::Fit(ds.train_records, ds.cm),
                    rng);
    const auto pairs = sampling::SampleTrainingPairs(data.index(), 12, rng);
    const auto batch = model.MakeBatch(pairs, data);
    std::vector<nn::MlpParams> grads;
    model.LossAndGradients(batch, &grads);
    const auto sets = model.ParamSets();
    nn::GradCheckOptions opts;
    opts.max_checks_per_layer = 40;
    const auto r = nn::GradCheck(
        sets, grads,
        [&] { return model.LossAndGradients(batch, nullptr).total; }, opts);
    EXPECT_LT(r.max_relative_error, 1e-4) << r.worst;
  }
}

TEST(MsfmTest, BatchLossMatchesPerPairLoss) {
  std::mt19937_64 rng(48);
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  MsfmModel model(24, 12, true, CmScorer::Fit(ds.train_records, ds.cm), rng);
  const auto pairs = sampling::SampleTrainingPairs(data.index(), 16, rng);
  const auto batch = model.MakeBatch(pairs, data);
  const auto mean = model.LossAndGradients(batch, nullptr);
  const EmbeddingResolver resolver(ds.asv, ds.cm);
  double total = 0.0;
  for (const auto& p : pairs) {
    const std::vector<std::string> enroll = {p.enroll_utterance_id};
    const auto l = model.Loss(resolver.Resolve(enroll, p.test_utterance_id),
                              OneHot(p.SameSpeaker()), OneHot(p.IsTarget()));
    total += l.total;
  }
  EXPECT_NEAR(mean.total, total / 16.0, 1e-12);
}

TEST(MsfmTest, TrainingReducesLossAndIsDeterministic) {
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  const auto a = TrainMsfm(data, SmallTrain(), true);
  const auto b = TrainMsfm(data, SmallTrain(), true);
  EXPECT_LT(a.log.back().loss, a.log.front().loss);
  EXPECT_EQ(EncodeCheckpoint(a.model.ToCheckpoint()),
            EncodeCheckpoint(b.model.ToCheckpoint()));
}

TEST(MsfmTest, AblationStillTrainsSssvBranch) {
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  nn::TrainConfig config = SmallTrain();
  std::mt19937_64 rng(config.seed);
  const MsfmModel initial(24, 12, false,
                          CmScorer::Fit(ds.train_records, ds.cm), rng);
  const auto trained = TrainMsfm(data, config, false);
  EXPECT_FALSE(trained.model.u1().params == initial.u1().params);
  EXPECT_FALSE(trained.model.pj().params == initial.pj().params);
  EXPECT_LT(trained.log.back().aux_loss, trained.log.front().aux_loss);

  // sf gradients never reach SSSV in the ablation: only L_SSSV does.
  MsfmModel model = trained.model;
  const auto pairs = sampling::SampleTrainingPairs(data.index(), 8, rng);
  const auto batch = model.MakeBatch(pairs, data);
  std::vector<nn::MlpParams> grads;
  model.LossAndGradients(batch, &grads);
  const Matrix x = [&] {
    Matrix h(model.pj().spec.input_dim(), batch.enroll.cols());
    h.topRows(160) = nn::Predict(model.u1().spec, model.u1().params, batch.enroll);
    h.bottomRows(160) = nn::Predict(model.u2().spec, model.u2().params, batch.test);
    return h;
  }();
  const auto rp = nn::Forward(model.pj().spec, model.pj().params, x);
  const auto only_sssv = nn::Backward(
      model.pj().spec, model.pj().params, rp.tape,
      nn::CceBatch(rp.output, batch.sv_labels).gradient);
  EXPECT_LT((only_sssv.params.dense[0].weight - grads[2].dense[0].weight)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(MsfmTest, CheckpointRoundTripIsBitExact) {
  std::mt19937_64 rng(49);
  MsfmModel model(192, 160, false, CmScorer(RandomVector(160, rng),
                                            RandomVector(160, rng).normalized()),
                  rng);
  const std::string bytes = EncodeCheckpoint(model.ToCheckpoint());
  const MsfmModel back = MsfmModel::FromCheckpoint(DecodeCheckpoint(bytes));
  EXPECT_EQ(EncodeCheckpoint(back.ToCheckpoint()), bytes);
  EXPECT_FALSE(back.use_sssv_score());
  EXPECT_TRUE(back.u1().params == model.u1().params);
  EXPECT_EQ(back.cm_scorer().weight(), model.cm_scorer().weight());
}

TEST(TripletLossTest, Examples) {
  const Vector a = Vec({1, 0});
  const std::vector<Vector> anchors = {a};
  // cos(A,P) = 1, cos(A,N) = -1.
  EXPECT_EQ(TripletLoss(anchors, std::vector<Vector>{Vec({2, 0})},
                        std::vector<Vector>{Vec({-1, 0})}, 0.5),
            0.0);
  // cos(A,P) = cos(A,N).
  EXPECT_NEAR(TripletLoss(anchors, std::vector<Vector>{Vec({0.6, 0.8})},
                          std::vector<Vector>{Vec({0.6, -0.8})}, 0.5),
              0.5, 1e-12);
  // cos(A,N) - cos(A,P) = 0.2: cos(A,P) = 0.6, cos(A,N) = 0.8.
  EXPECT_NEAR(TripletLoss(anchors, std::vector<Vector>{Vec({0.6, 0.8})},
                          std::vector<Vector>{Vec({0.8, 0.6})}, 0.5),
              0.7, 1e-12);
  EXPECT_THROW(TripletLoss(anchors, std::vector<Vector>{Vec({0, 0})},
                           std::vector<Vector>{Vec({1, 0})}, 0.5),
               std::invalid_argument);
}

TEST(TripletLossTest, ScaleInvarianceAndZeroIffSatisfied) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int t = 0; t < 100; ++t) {
    Matrix a(6, 5), p(6, 5), n(6, 5);
    for (Index j = 0; j < 5; ++j) {
      a.col(j) = RandomVector(6, rng);
      p.col(j) = RandomVector(6, rng);
      n.col(j) = RandomVector(6, rng);
    }
    const double m = 0.3;
    const double k = scale(rng);
    const double base = TripletLossColumns(a, p, n, m);
    EXPECT_NEAR(TripletLossColumns(k * a, k * p, k * n, m), base, 1e-12);
    bool all_satisfied = true;
    for (Index j = 0; j < 5; ++j) {
      const double gap = CosineScore(a.col(j), p.col(j)) -
                         CosineScore(a.col(j), n.col(j));
      all_satisfied = all_satisfied && gap >= m;
    }
    EXPECT_EQ(base == 0.0, all_satisfied);
  }
}

TEST(IepTest, ProjectionShapeAndZeroWeights) {
  std::mt19937_64 rng(51);
  IepModel model(192, 160, 0.5, rng);
  EXPECT_EQ(model.Project(RandomVector(192, rng), RandomVector(160, rng)).size(),
            128);
  IepModel zero(ZeroBlock(ProjectorTrunkSpec()), ZeroBlock(ProjectorHeadSpec()),
                192, 160, 0.5);
  EXPECT_TRUE(
      zero.Project(RandomVector(192, rng), RandomVector(160, rng)).isZero(0.0));
  EXPECT_THROW(model.Project(RandomVector(191, rng), RandomVector(160, rng)),
               std::invalid_argument);
}

TEST(IepTest, SkipPathCarriesAsvEmbedding) {
  std::mt19937_64 rng(52);
  IepModel model(192, 160, 0.5, rng);
  model.mutable_f().params.SetZero();
  const Vector x = RandomVector(192, rng);
  const Vector y = RandomVector(160, rng);
  Vector x2 = x;
  x2[7] += 1.0;
  EXPECT_GT((model.Project(x2, y) - model.Project(x, y)).norm(), 1e-6);
}

TEST(IepTest, WiringMismatchRejected) {
  EXPECT_THROW(IepModel(ZeroBlock(ProjectorTrunkSpec()),
                        ZeroBlock(ProjectorHeadSpec(192, 150)), 192, 160, 0.5),
               std::invalid_argument);
}

TEST(IepTest, TripletGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(53);
  IepModel model(24, 12, 0.5, rng);
  IepModel::TripletBatch batch;
  batch.anchors = Matrix(36, 6);
  batch.positives = Matrix(36, 6);
  batch.negatives = Matrix(36, 6);
  for (Index j = 0; j < 6; ++j) {
    batch.anchors.col(j) = RandomVector(36, rng);
    batch.positives.col(j) = RandomVector(36, rng);
    batch.negatives.col(j) = RandomVector(36, rng);
  }
  std::vector<nn::MlpParams> grads;
  const double loss = model.TripletLossAndGradients(batch, &grads);
  ASSERT_GT(loss, 0.0);
  const auto sets = model.ParamSets();
  nn::GradCheckOptions opts;
  opts.max_checks_per_layer = 40;
  const auto r = nn::GradCheck(
      sets, grads, [&] { return model.TripletLossAndGradients(batch, nullptr); },
      opts);
  EXPECT_LT(r.max_relative_error, 1e-4) << r.worst;
}

TEST(IepTest, TrainingReducesLossAndIsDeterministic) {
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  const auto a = TrainIep(data, SmallTrain());
  const auto b = TrainIep(data, SmallTrain());
  EXPECT_LT(a.log.back().loss, a.log.front().loss);
  EXPECT_EQ(EncodeCheckpoint(a.model.ToCheckpoint()),
            EncodeCheckpoint(b.model.ToCheckpoint()));
}

TEST(IepTest, SatisfiedZeroMarginLeavesWeightsUnderSgd) {
  std::mt19937_64 rng(54);
  IepModel model(4, 2, 0.0, rng);
  // Positive equals anchor, negative is its negation after projection only
  // if the map is linear; use f = 0 and g = identity-like on x.
  model.mutable_f().params.SetZero();
  auto& g = model.mutable_g().params.dense[0];
  g.weight.setZero();
  g.bias.setZero();
  for (Index i = 0; i < 4; ++i) g.weight(i, 128 + i) = 1.0;
  IepModel::TripletBatch batch;
  batch.anchors = Matrix::Zero(6, 1);
  batch.anchors(0, 0) = 1.0;
  batch.positives = batch.anchors;
  batch.negatives = -batch.anchors;
  std::vector<nn::MlpParams> grads;
  EXPECT_EQ(model.TripletLossAndGradients(batch, &grads), 0.0);
  nn::TrainConfig config;
  config.optimizer = nn::OptimizerKind::kSgd;
  nn::Optimizer sgd(config);
  const IepModel before = model;
  sgd.Step(model.ParamSets(), grads);
  EXPECT_TRUE(model.f().params == before.f().params);
  EXPECT_TRUE(model.g().params == before.g().params);
}

TEST(IepTest, CheckpointRoundTripIsBitExact) {
  std::mt19937_64 rng(55);
  IepModel model(192, 160, 0.5, rng);
  const std::string bytes = EncodeCheckpoint(model.ToCheckpoint());
  const IepModel back = IepModel::FromCheckpoint(DecodeCheckpoint(bytes));
  EXPECT_EQ(EncodeCheckpoint(back.ToCheckpoint()), bytes);
  EXPECT_EQ(back.margin(), 0.5);
}

TEST(CmScorerTest, FitGivesGaussianLogLikelihoodRatio) {
  data::EmbeddingStore cm(data::EmbeddingKind::kCm, 2);
  std::vector<data::UtteranceRecord> records;
  const auto add = [&](const std::string& id, double x, double y,
                       data::SpoofKey key) {
    cm.Add(id, Vec({x, y}));
    records.push_back({id, "s", key, std::nullopt});
  };
  add("b1", 1.0, 5.0, data::SpoofKey::kBonafide);
  add("b2", 3.0, -5.0, data::SpoofKey::kBonafide);
  add("s1", -1.0, 5.0, data::SpoofKey::kSpoof);
  add("s2", -3.0, -5.0, data::SpoofKey::kSpoof);
  const CmScorer scorer = CmScorer::Fit(records, cm);
  // Projected classes are N(+2, 1) and N(-2, 1).
  const auto llr = [](double p) {
    return 0.5 * ((p + 2.0) * (p + 2.0) - (p - 2.0) * (p - 2.0));
  };
  for (double p : {-3.0, -0.5, 0.0, 0.25, 2.0, 7.5}) {
    EXPECT_NEAR(scorer.Score(Vec({p, 11.0})), llr(p), 1e-12) << p;
  }
}

TEST(CmScorerTest, InvariantToEmbeddingScale) {
  sampling::SyntheticConfig config;
  config.n_speakers = 10;
  config.train_fraction = 0.4;
  config.dev_fraction = 0.3;
  config.utts_per_speaker = 4;
  config.spoofs_per_speaker = 4;
  config.asv_dim = 8;
  config.cm_dim = 6;
  config.speaker_rank = 4;
  config.session_rank = 2;
  const auto ds = sampling::GenerateSynthetic(config);
  data::EmbeddingStore scaled(data::EmbeddingKind::kCm, ds.cm.dim());
  for (std::size_t i = 0; i < ds.cm.size(); ++i) {
    scaled.Add(ds.cm.ids()[i], 8.0 * ds.cm.vector(i));
  }
  const CmScorer a = CmScorer::Fit(ds.train_records, ds.cm);
  const CmScorer b = CmScorer::Fit(ds.train_records, scaled);
  for (const auto& r : ds.eval_records) {
    const double sa = a.Score(ds.cm.At(r.utterance_id));
    EXPECT_NEAR(b.Score(scaled.At(r.utterance_id)), sa,
                1e-9 * (1.0 + std::abs(sa)));
  }
}

TEST(CmScorerTest, DegenerateFitRejected) {
  data::EmbeddingStore cm(data::EmbeddingKind::kCm, 1);
  cm.Add("b", Vec({1.0}));
  cm.Add("s", Vec({-1.0}));
  const std::vector<data::UtteranceRecord> only_bonafide = {
      {"b", "x", data::SpoofKey::kBonafide, std::nullopt}};
  EXPECT_THROW(CmScorer::Fit(only_bonafide, cm), std::runtime_error);
  const std::vector<data::UtteranceRecord> no_spread = {
      {"b", "x", data::SpoofKey::kBonafide, std::nullopt},
      {"s", "x", data::SpoofKey::kSpoof, std::nullopt}};
  EXPECT_THROW(CmScorer::Fit(no_spread, cm), std::runtime_error);
}

TEST(Baseline1Test, Examples) {
  EXPECT_DOUBLE_EQ(Baseline1Score(0.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(Baseline1Score(-0.2, 0.7), 0.5);
  EXPECT_EQ(Baseline1Score(0.31, -0.77), Baseline1Score(-0.77, 0.31));
}

TEST(Baseline2Test, OutputsAndZeroWeights) {
  std::mt19937_64 rng(56);
  Baseline2Model model(192, 160, rng);
  const TrialEmbeddings t = RandomTrial(rng);
  EXPECT_EQ(model.Logits(t.enroll_asv, t.test_asv, t.test_cm).size(), 2);
  EXPECT_EQ(model.Score(t), model.Score(t));
  EXPECT_EQ(model.mlp().spec.input_dim(), 544);
  Baseline2Model zero(ZeroBlock(Baseline2Spec()), 192, 160);
  EXPECT_EQ(zero.Score(t), 0.5);
  EXPECT_THROW(model.Logits(t.enroll_asv, t.test_asv, Vector::Zero(3)),
               std::invalid_argument);
}

TEST(Baseline2Test, CheckpointRoundTripIsBitExact) {
  std::mt19937_64 rng(57);
  Baseline2Model model(24, 12, rng);
  const std::string bytes = EncodeCheckpoint(model.ToCheckpoint());
  EXPECT_EQ(EncodeCheckpoint(
                Baseline2Model::FromCheckpoint(DecodeCheckpoint(bytes))
                    .ToCheckpoint()),
            bytes);
}

TEST(Baseline2Test, TrainingReducesLoss) {
  const auto ds = sampling::GenerateSynthetic(SmallSynthetic());
  const TrainingData data(ds.train_records, ds.asv, ds.cm);
  nn::TrainConfig config = SmallTrain();
  config.epochs = 3;
  const auto result = TrainBaseline2(data, config);
  EXPECT_LT(result.log.back().loss, result.log.front().loss);
}

TEST(CheckpointTest, RejectsCorruptInput) {
  std::mt19937_64 rng(58);
  IepModel model(8, 4, 0.5, rng);
  const std::string bytes = EncodeCheckpoint(model.ToCheckpoint());
  EXPECT_THROW(DecodeCheckpoint(bytes.substr(0, bytes.size() - 3)),
               std::runtime_error);
  EXPECT_THROW(DecodeCheckpoint(bytes + "junk"), std::runtime_error);
  EXPECT_THROW(DecodeCheckpoint("NOTAMODEL"), std::runtime_error);
  EXPECT_THROW(MsfmModel::FromCheckpoint(DecodeCheckpoint(bytes)),
               std::runtime_error);
}

TEST(ResolverTest, EnrollmentMeanAndCmFallback) {
  data::EmbeddingStore asv(data::EmbeddingKind::kAsv);
  data::EmbeddingStore cm(data::EmbeddingKind::kCm);
  asv.Add("e1", Vec({1, 0}));
  asv.Add("e2", Vec({0, 1}));
  asv.Add("t", Vec({1, 1}));
  cm.Add("e1", Vec({2}));
  cm.Add("t", Vec({4}));
  const EmbeddingResolver resolver(asv, cm);
  const std::vector<std::string> enroll = {"e1", "e2"};
  const auto t = resolver.Resolve(enroll, "t");
  EXPECT_EQ(t.enroll_asv, Vec({0.5, 0.5}));
  // e2 has no CM embedding: the store mean (3) stands in.
  EXPECT_EQ(t.enroll_cm, Vec({2.5}));
  EXPECT_EQ(t.test_cm, Vec({4}));
}

TEST(ResolverTest, CoverageListsMissingIds) {
  data::EmbeddingStore asv(data::EmbeddingKind::kAsv);
  data::EmbeddingStore cm(data::EmbeddingKind::kCm);
  asv.Add("e1", Vec({1, 0}));
  cm.Add("e1", Vec({1}));
  const EmbeddingResolver resolver(asv, cm);
  const std::vector<data::TrialRecord> trials = {
      {"spk", {"e1"}, "t_missing", data::TrialLabel::kTarget}};
  try {
    resolver.CheckCoverage(trials);
    FAIL() << "expected MissingEmbeddingsError";
  } catch (const MissingEmbeddingsError& e) {
    EXPECT_EQ(e.missing(),
              (std::vector<std::string>{"asv:t_missing", "cm:t_missing"}));
  }
}

}  // namespace
}  // namespace sasv::models
