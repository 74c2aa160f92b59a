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

#include "sasv/sampling/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace sasv::sampling {

namespace {

using data::Vector;

struct Split {
  int train;
  int dev;
  int eval;
};

Split SplitSpeakers(const SyntheticConfig& c) {
  const int train = static_cast<int>(std::lround(c.n_speakers * c.train_fraction));
  const int dev = static_cast<int>(std::lround(c.n_speakers * c.dev_fraction));
  return {train, dev, c.n_speakers - train - dev};
}

std::string SpeakerId(int s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "SYN_%04d", s + 1);
  return buf;
}

std::string UtteranceId(const std::string& speaker, char kind, int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%c%03d", kind, n + 1);
  return speaker + buf;
}

Vector Gaussian(Eigen::Index dim, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Vector UnitRandom(Eigen::Index dim, std::mt19937_64& rng) {
  Vector v = Gaussian(dim, 1.0, rng);
  return v / v.norm();
}

// asv_dim x rank matrix with orthonormal columns.
Eigen::MatrixXd RandomBasis(Eigen::Index dim, int rank, std::mt19937_64& rng) {
  Eigen::MatrixXd m(dim, rank);
  for (int j = 0; j < rank; ++j) m.col(j) = Gaussian(dim, 1.0, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
}

Vector ToSinglePrecision(const Vector& v) {
  return v.cast<float>().cast<double>();
}

}  // namespace

void SyntheticConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("synthetic config: " + what);
  };
  if (n_speakers <= 0) fail("n_speakers must be positive");
  if (utts_per_speaker <= 0) fail("utts_per_speaker must be positive");
  if (spoofs_per_speaker <= 0) fail("spoofs_per_speaker must be positive");
  if (asv_dim <= 0 || cm_dim <= 0) fail("dims must be positive");
  if (enroll_per_speaker <= 0) fail("enroll_per_speaker must be positive");
  if (enroll_per_speaker >= utts_per_speaker) {
    fail("enroll_per_speaker must leave test utterances");
  }
  if (utts_per_speaker < 2) fail("utts_per_speaker must be at least 2");
  if (speaker_rank <= 0 || speaker_rank > asv_dim) {
    fail("speaker_rank must be in [1, asv_dim]");
  }
  if (session_rank < 0 || speaker_rank + session_rank > asv_dim) {
    fail("speaker_rank + session_rank must not exceed asv_dim");
  }
  if (!(asv_noise >= 0.0) || !(spoof_asv_spread >= 0.0) ||
      !(session_noise >= 0.0)) {
    fail("noise levels must be non-negative");
  }
  if (!(cm_separation >= 0.0)) fail("cm_separation must be non-negative");
  if (!(cm_scale > 0.0)) fail("cm_scale must be positive");
  if (nontarget_per_speaker < 0) fail("nontarget_per_speaker is negative");
  if (!(train_fraction > 0.0 && dev_fraction > 0.0 &&
        train_fraction + dev_fraction < 1.0)) {
    fail("train/dev fractions must be positive and sum below 1");
  }
  const Split split = SplitSpeakers(*this);
  if (split.train < 2 || split.dev < 2 || split.eval < 2) {
    fail("n_speakers = " + std::to_string(n_speakers) +
         " leaves a partition with fewer than two speakers "
         "(non-target trials impossible)");
  }
}

SyntheticDataset GenerateSynthetic(const SyntheticConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  const Split split = SplitSpeakers(config);

  SyntheticDataset out;
  out.asv = data::EmbeddingStore(data::EmbeddingKind::kAsv, config.asv_dim);
  out.cm = data::EmbeddingStore(data::EmbeddingKind::kCm, config.cm_dim);

  const Vector cm_axis = UnitRandom(config.cm_dim, rng);
  const Vector cm_bonafide_mean = 0.5 * config.cm_separation * cm_axis;
  const Vector cm_spoof_mean = -cm_bonafide_mean;
  std::uniform_int_distribution<int> attack(1, 6);
  const Eigen::MatrixXd bases = RandomBasis(
      config.asv_dim, config.speaker_rank + config.session_rank, rng);
  const auto speaker_basis = bases.leftCols(config.speaker_rank);
  const auto session_basis = bases.rightCols(config.session_rank);
  auto session = [&]() -> Vector {
    return session_basis *
           Gaussian(config.session_rank, config.session_noise, rng);
  };

  // Test-side bonafide utterances per dev/eval speaker, for trial building.
  std::vector<std::vector<std::string>> test_bonafide(
      static_cast<std::size_t>(config.n_speakers));
  std::vector<std::vector<std::string>> spoofs(
      static_cast<std::size_t>(config.n_speakers));

  for (int s = 0; s < config.n_speakers; ++s) {
    const std::string speaker = SpeakerId(s);
    const Vector mean =
        speaker_basis * UnitRandom(config.speaker_rank, rng);
    auto& records = s < split.train               ? out.train_records
                    : s < split.train + split.dev ? out.dev_records
                                                  : out.eval_records;
    const bool enrolls = s >= split.train;

    for (int u = 0; u < config.utts_per_speaker; ++u) {
      std::string id = UtteranceId(speaker, 'B', u);
      Vector asv = mean + session() +
                   Gaussian(config.asv_dim, config.asv_noise, rng);
      asv.normalize();
      Vector cm = config.cm_scale *
                  (cm_bonafide_mean + Gaussian(config.cm_dim, 1.0, rng));
      out.asv.Add(id, ToSinglePrecision(asv));
      out.cm.Add(id, ToSinglePrecision(cm));
      records.push_back({id, speaker, data::SpoofKey::kBonafide, std::nullopt});
      if (enrolls) {
        if (u < config.enroll_per_speaker) {
          out.enrollment[speaker].push_back(id);
        } else {
          test_bonafide[static_cast<std::size_t>(s)].push_back(id);
        }
      }
    }
    for (int u = 0; u < config.spoofs_per_speaker; ++u) {
      std::string id = UtteranceId(speaker, 'S', u);
      Vector asv = mean + session() +
                   Gaussian(config.asv_dim, config.spoof_asv_spread, rng);
      asv.normalize();
      Vector cm = config.cm_scale *
                  (cm_spoof_mean + Gaussian(config.cm_dim, 1.0, rng));
      out.asv.Add(id, ToSinglePrecision(asv));
      out.cm.Add(id, ToSinglePrecision(cm));
      char system[4];
      std::snprintf(system, sizeof(system), "A%02d", attack(rng));
      records.push_back({id, speaker, data::SpoofKey::kSpoof, system});
      spoofs[static_cast<std::size_t>(s)].push_back(id);
    }
  }

  auto build_trials = [&](int first, int last) {
    std::vector<data::TrialKey> trials;
    for (int s = first; s < last; ++s) {
      const std::string speaker = SpeakerId(s);
      const auto& targets = test_bonafide[static_cast<std::size_t>(s)];
      for (const auto& id : targets) {
        trials.push_back({speaker, id, data::TrialLabel::kTarget});
      }
      std::vector<std::string> pool;
      for (int o = first; o < last; ++o) {
        if (o == s) continue;
        const auto& theirs = test_bonafide[static_cast<std::size_t>(o)];
        pool.insert(pool.end(), theirs.begin(), theirs.end());
      }
      const std::size_t wanted = std::min(
          pool.size(), config.nontarget_per_speaker > 0
                           ? static_cast<std::size_t>(config.nontarget_per_speaker)
                           : targets.size());
      for (std::size_t k = 0; k < wanted; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
        std::swap(pool[k], pool[pick(rng)]);
        trials.push_back({speaker, pool[k], data::TrialLabel::kNonTarget});
      }
      for (const auto& id : spoofs[static_cast<std::size_t>(s)]) {
        trials.push_back({speaker, id, data::TrialLabel::kSpoof});
      }
    }
    return trials;
  };
  out.dev_trials = build_trials(split.train, split.train + split.dev);
  out.eval_trials = build_trials(split.train + split.dev, config.n_speakers);
  return out;
}

}  // namespace sasv::sampling
