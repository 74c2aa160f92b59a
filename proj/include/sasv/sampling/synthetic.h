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

#ifndef SASV_SAMPLING_SYNTHETIC_H_
#define SASV_SAMPLING_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"

namespace sasv::sampling {

// Geometry of a synthetic ASV/CM embedding corpus.
//
// ASV space: speaker means are random unit vectors inside a shared
// speaker_rank-dimensional subspace. An utterance is its speaker mean plus a
// session offset N(0, session_noise^2) in a session_rank-dimensional
// nuisance subspace plus isotropic noise, renormalized. Bonafide utterances
// use asv_noise for the isotropic part. Spoofs imitate their target speaker:
// same construction around the target mean, with spoof_asv_spread as the
// isotropic part.
//
// CM space: bonafide embeddings are cm_scale * N(+cm_separation/2 * e, I)
// and spoofs cm_scale * N(-cm_separation/2 * e, I) for a random unit
// direction e.
//
// Speakers are split into disjoint train/dev/eval partitions. Dev and eval
// speakers enroll with their first `enroll_per_speaker` bonafide utterances.
struct SyntheticConfig {
  int n_speakers = 50;
  int utts_per_speaker = 20;
  int spoofs_per_speaker = 20;
  int enroll_per_speaker = 2;
  Eigen::Index asv_dim = 192;
  Eigen::Index cm_dim = 160;
  int speaker_rank = 4;
  int session_rank = 8;
  double session_noise = 0.15;
  double asv_noise = 0.1;
  double spoof_asv_spread = 0.12;
  double cm_separation = 5.0;
  double cm_scale = 0.1;
  double train_fraction = 0.6;
  double dev_fraction = 0.1;
  // Non-target trials per dev/eval speaker; 0 means one per target trial.
  int nontarget_per_speaker = 0;
  std::uint64_t seed = 2022;

  // Throws std::invalid_argument describing the first bad field, including
  // splits that leave a partition with fewer than two speakers.
  void Validate() const;
};

struct SyntheticDataset {
  std::vector<data::UtteranceRecord> train_records;
  std::vector<data::UtteranceRecord> dev_records;
  std::vector<data::UtteranceRecord> eval_records;
  data::EmbeddingStore asv{data::EmbeddingKind::kAsv};
  data::EmbeddingStore cm{data::EmbeddingKind::kCm};
  data::EnrollmentMap enrollment;  // dev and eval speakers
  std::vector<data::TrialKey> dev_trials;
  std::vector<data::TrialKey> eval_trials;
};

// Deterministic in `config` (including the seed). Embedding values are
// rounded to single precision.
SyntheticDataset GenerateSynthetic(const SyntheticConfig& config);

}  // namespace sasv::sampling

#endif  // SASV_SAMPLING_SYNTHETIC_H_
