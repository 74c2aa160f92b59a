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

#include "sasv/cli/commands.h"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <random>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sasv/common/error.h"
#include "sasv/common/logging.h"
#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"
#include "sasv/metrics/report.h"
#include "sasv/models/baselines.h"
#include "sasv/models/checkpoint.h"
#include "sasv/models/cm_scorer.h"
#include "sasv/models/iep.h"
#include "sasv/models/msfm.h"
#include "sasv/models/pipeline.h"
#include "sasv/nn/optimizer.h"
#include "sasv/sampling/synthetic.h"

namespace sasv::cli {

namespace fs = std::filesystem;

namespace {

std::string OutPath(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string PrepareOutDir(RunConfig& config) {
  const std::string dir = config.RequireString("out");
  fs::create_directories(dir);
  return dir;
}

std::string ExistingPath(RunConfig& config, const std::string& key) {
  std::string path = config.RequireString(key);
  if (!fs::exists(path)) {
    throw ConfigError("setting '" + key + "': no such file '" + path + "'");
  }
  return path;
}

ModelKind RequireModel(RunConfig& config) {
  const std::string name = config.RequireString("model");
  auto kind = ParseModelKind(name);
  if (!kind) throw ConfigError("unknown model '" + name + "'");
  return *kind;
}

nn::TrainConfig ReadTrainConfig(RunConfig& config) {
  const nn::TrainConfig d;
  nn::TrainConfig c;
  c.learning_rate = config.GetDouble("learning_rate", d.learning_rate);
  c.epochs = config.GetInt("epochs", d.epochs);
  c.batch_size = config.GetInt("batch_size", d.batch_size);
  c.beta1 = config.GetDouble("beta1", d.beta1);
  c.beta2 = config.GetDouble("beta2", d.beta2);
  c.adam_epsilon = config.GetDouble("adam_epsilon", d.adam_epsilon);
  c.seed = config.GetUint64("seed", d.seed);
  c.samples_per_epoch = config.GetInt("samples_per_epoch", d.samples_per_epoch);
  c.triplets_per_batch =
      config.GetInt("triplets_per_batch", d.triplets_per_batch);
  c.margin = config.GetDouble("margin", d.margin);
  try {
    c.optimizer = nn::ParseOptimizerKind(
        config.GetString("optimizer", nn::ToString(d.optimizer)));
    c.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

sampling::SyntheticConfig ReadSyntheticConfig(RunConfig& config) {
  const sampling::SyntheticConfig d;
  sampling::SyntheticConfig c;
  c.n_speakers = config.GetInt("n_speakers", d.n_speakers);
  c.utts_per_speaker = config.GetInt("utts_per_speaker", d.utts_per_speaker);
  c.spoofs_per_speaker =
      config.GetInt("spoofs_per_speaker", d.spoofs_per_speaker);
  c.enroll_per_speaker =
      config.GetInt("enroll_per_speaker", d.enroll_per_speaker);
  c.asv_dim = config.GetInt("asv_dim", static_cast<int>(d.asv_dim));
  c.cm_dim = config.GetInt("cm_dim", static_cast<int>(d.cm_dim));
  c.speaker_rank = config.GetInt("speaker_rank", d.speaker_rank);
  c.session_rank = config.GetInt("session_rank", d.session_rank);
  c.session_noise = config.GetDouble("session_noise", d.session_noise);
  c.asv_noise = config.GetDouble("asv_noise", d.asv_noise);
  c.spoof_asv_spread = config.GetDouble("spoof_asv_spread", d.spoof_asv_spread);
  c.cm_separation = config.GetDouble("cm_separation", d.cm_separation);
  c.cm_scale = config.GetDouble("cm_scale", d.cm_scale);
  c.train_fraction = config.GetDouble("train_fraction", d.train_fraction);
  c.dev_fraction = config.GetDouble("dev_fraction", d.dev_fraction);
  c.nontarget_per_speaker =
      config.GetInt("nontarget_per_speaker", d.nontarget_per_speaker);
  c.seed = config.GetUint64("seed", d.seed);
  try {
    c.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

data::StoreFormat ReadStoreFormat(RunConfig& config) {
  const std::string name = config.GetString("store_format", "binary");
  if (name == "binary") return data::StoreFormat::kBinary;
  if (name == "tsv") return data::StoreFormat::kTsv;
  throw ConfigError("store_format must be 'binary' or 'tsv', got '" + name +
                    "'");
}

struct Stores {
  data::EmbeddingStore asv;
  data::EmbeddingStore cm;
};

Stores LoadStores(RunConfig& config) {
  const std::string asv_path = ExistingPath(config, "asv_store");
  const std::string cm_path = ExistingPath(config, "cm_store");
  return {data::LoadEmbeddingStore(asv_path, data::EmbeddingKind::kAsv),
          data::LoadEmbeddingStore(cm_path, data::EmbeddingKind::kCm)};
}

std::vector<data::UtteranceRecord> LoadProtocol(RunConfig& config) {
  const std::string path = ExistingPath(config, "protocol");
  return data::ParseCmProtocol(data::ReadTextFile(path), path);
}

void WriteResolvedConfig(const RunConfig& config, const std::string& dir) {
  data::WriteTextFile(OutPath(dir, "resolved.cfg"), config.Format());
}

void WriteReportFiles(const metrics::EvalReport& report,
                      const std::string& dir) {
  data::WriteTextFile(OutPath(dir, "report.txt"),
                      metrics::FormatReportText(report));
  data::WriteTextFile(OutPath(dir, "report.csv"),
                      metrics::FormatReportCsv(report));
  data::WriteTextFile(OutPath(dir, "histogram.csv"),
                      metrics::FormatHistogramCsv(report.histogram));
}

void LogReport(const metrics::EvalReport& report) {
  for (const auto& m : report.metrics) {
    if (m.eer) {
      SASV_LOG_INFO("{}-EER {:.2f}% ({} pos / {} neg)", ToString(m.metric),
                    100.0 * m.eer->eer, m.n_positive, m.n_negative);
    } else {
      SASV_LOG_INFO("{}-EER absent ({} pos / {} neg)", ToString(m.metric),
                    m.n_positive, m.n_negative);
    }
  }
}

int ReadHistogramBins(RunConfig& config) {
  const int bins =
      config.GetInt("histogram_bins", metrics::kDefaultHistogramBins);
  if (bins <= 0) throw ConfigError("histogram_bins must be positive");
  return bins;
}

std::unique_ptr<models::TrialScorer> LoadScorer(RunConfig& config,
                                                const Stores& stores) {
  std::optional<ModelKind> requested;
  if (config.Has("model")) requested = RequireModel(config);
  if (requested == ModelKind::kBaseline1) {
    auto records = LoadProtocol(config);
    return std::make_unique<models::Baseline1Scorer>(
        models::CmScorer::Fit(records, stores.cm));
  }
  const std::string path = ExistingPath(config, "checkpoint");
  models::Checkpoint checkpoint = models::LoadCheckpoint(path);
  auto kind = ParseModelKind(checkpoint.kind);
  if (!kind) {
    throw std::runtime_error(path + ": unknown model kind '" +
                             checkpoint.kind + "'");
  }
  if (requested && *requested != *kind) {
    throw ConfigError(fmt::format("model '{}' does not match checkpoint '{}'",
                                  ToString(*requested), checkpoint.kind));
  }
  config.Set("model", std::string(ToString(*kind)));
  switch (*kind) {
    case ModelKind::kMsfm:
    case ModelKind::kMsfmNoSssv:
      return std::make_unique<models::MsfmModel>(
          models::MsfmModel::FromCheckpoint(checkpoint));
    case ModelKind::kIep:
      return std::make_unique<models::IepModel>(
          models::IepModel::FromCheckpoint(checkpoint));
    case ModelKind::kBaseline2:
      return std::make_unique<models::Baseline2Model>(
          models::Baseline2Model::FromCheckpoint(checkpoint));
    case ModelKind::kBaseline1:
      break;
  }
  throw std::runtime_error(path + ": baseline1 has no checkpoint");
}

std::string FormatTrainLog(const std::vector<models::EpochLog>& log,
                           ModelKind kind, std::uint64_t seed) {
  std::string out =
      fmt::format("# model={} seed={}\nepoch\tloss\taux_loss\thead_loss\n",
                  ToString(kind), seed);
  for (const auto& e : log) {
    out += fmt::format("{}\t{:.9g}\t{:.9g}\t{:.9g}\n", e.epoch, e.loss,
                       e.aux_loss, e.head_loss);
  }
  return out;
}

}  // namespace

std::string_view ToString(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMsfm:
      return "msfm";
    case ModelKind::kMsfmNoSssv:
      return "msfm-no-sssv";
    case ModelKind::kIep:
      return "iep";
    case ModelKind::kBaseline1:
      return "baseline1";
    case ModelKind::kBaseline2:
      return "baseline2";
  }
  return "?";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (auto kind : {ModelKind::kMsfm, ModelKind::kMsfmNoSssv, ModelKind::kIep,
                    ModelKind::kBaseline1, ModelKind::kBaseline2}) {
    if (ToString(kind) == name) return kind;
  }
  return std::nullopt;
}

void CmdSynth(RunConfig& config) {
  const sampling::SyntheticConfig synth = ReadSyntheticConfig(config);
  const data::StoreFormat format = ReadStoreFormat(config);
  const std::string dir = PrepareOutDir(config);

  const sampling::SyntheticDataset ds = sampling::GenerateSynthetic(synth);
  data::WriteTextFile(OutPath(dir, "train.protocol"),
                      data::FormatCmProtocol(ds.train_records));
  data::WriteTextFile(OutPath(dir, "dev.protocol"),
                      data::FormatCmProtocol(ds.dev_records));
  data::WriteTextFile(OutPath(dir, "eval.protocol"),
                      data::FormatCmProtocol(ds.eval_records));
  data::WriteTextFile(OutPath(dir, "enroll.map"),
                      data::FormatEnrollmentMap(ds.enrollment));
  data::WriteTextFile(OutPath(dir, "dev.trials"),
                      data::FormatTrialKeys(ds.dev_trials));
  data::WriteTextFile(OutPath(dir, "eval.trials"),
                      data::FormatTrialKeys(ds.eval_trials));
  data::WriteEmbeddingStore(ds.asv, OutPath(dir, "asv.emb"), format);
  data::WriteEmbeddingStore(ds.cm, OutPath(dir, "cm.emb"), format);
  WriteResolvedConfig(config, dir);
  SASV_LOG_INFO("synthetic dataset: {} utterances, {} dev / {} eval trials in {}",
                ds.asv.size(), ds.dev_trials.size(), ds.eval_trials.size(),
                dir);
}

void CmdTrain(RunConfig& config) {
  const ModelKind kind = RequireModel(config);
  if (kind == ModelKind::kBaseline1) {
    throw ConfigError("baseline1 needs no training; run evaluate directly");
  }
  const nn::TrainConfig train = ReadTrainConfig(config);
  const Stores stores = LoadStores(config);
  const models::TrainingData data(LoadProtocol(config), stores.asv, stores.cm);
  const std::string dir = PrepareOutDir(config);

  SASV_LOG_INFO("training {} on {} utterances, seed {}", ToString(kind),
                data.records().size(), train.seed);
  models::Checkpoint checkpoint;
  std::vector<models::EpochLog> log;
  switch (kind) {
    case ModelKind::kMsfm:
    case ModelKind::kMsfmNoSssv: {
      auto result = models::TrainMsfm(data, train, kind == ModelKind::kMsfm);
      checkpoint = result.model.ToCheckpoint();
      log = std::move(result.log);
      break;
    }
    case ModelKind::kIep: {
      auto result = models::TrainIep(data, train);
      checkpoint = result.model.ToCheckpoint();
      log = std::move(result.log);
      break;
    }
    case ModelKind::kBaseline2: {
      auto result = models::TrainBaseline2(data, train);
      checkpoint = result.model.ToCheckpoint();
      log = std::move(result.log);
      break;
    }
    case ModelKind::kBaseline1:
      break;
  }
  models::SaveCheckpoint(checkpoint, OutPath(dir, "model.ckpt"));
  data::WriteTextFile(OutPath(dir, "train_log.tsv"),
                      FormatTrainLog(log, kind, train.seed));
  WriteResolvedConfig(config, dir);
  if (!log.empty()) {
    SASV_LOG_INFO("final epoch loss {:.6f}", log.back().loss);
  }
}

metrics::EvalReport CmdEvaluate(RunConfig& config) {
  const Stores stores = LoadStores(config);
  const auto scorer = LoadScorer(config, stores);
  const std::string map_path = ExistingPath(config, "enroll_map");
  const std::string trials_path = ExistingPath(config, "trials");
  const int bins = ReadHistogramBins(config);
  const data::EnrollmentMap enrollment =
      data::ParseEnrollmentMap(data::ReadTextFile(map_path), map_path);
  const std::vector<data::TrialRecord> trials = data::ParseTrialList(
      data::ReadTextFile(trials_path), enrollment, trials_path);
  const std::string dir = PrepareOutDir(config);

  const models::EmbeddingResolver resolver(stores.asv, stores.cm);
  resolver.CheckCoverage(trials);
  const std::vector<double> scores =
      models::ScoreTrials(*scorer, resolver, trials);
  std::vector<metrics::ScoredTrial> scored;
  scored.reserve(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    scored.push_back(
        {{t.enroll_speaker_id, t.test_utterance_id, t.label}, scores[i]});
  }
  data::WriteTextFile(OutPath(dir, "scores.txt"),
                      metrics::FormatScoreFile(scored));
  const metrics::EvalReport report = metrics::EvaluateSystem(scored, bins);
  WriteReportFiles(report, dir);
  WriteResolvedConfig(config, dir);
  LogReport(report);
  return report;
}

metrics::EvalReport CmdReport(RunConfig& config) {
  const std::string scores_path = ExistingPath(config, "scores");
  const std::string trials_path = ExistingPath(config, "trials");
  const int bins = ReadHistogramBins(config);
  const std::vector<data::TrialKey> keys =
      data::ParseTrialKeys(data::ReadTextFile(trials_path), trials_path);
  const std::vector<metrics::ScoreLine> lines =
      metrics::ParseScoreFile(data::ReadTextFile(scores_path), scores_path);
  const std::string dir = PrepareOutDir(config);

  const std::vector<metrics::ScoredTrial> scored =
      metrics::JoinScores(keys, lines);
  const metrics::EvalReport report = metrics::EvaluateSystem(scored, bins);
  WriteReportFiles(report, dir);
  WriteResolvedConfig(config, dir);
  LogReport(report);
  return report;
}

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"Spoofing-aware speaker verification back-ends", "sasv"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string model;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--model", model,
                    "msfm, msfm-no-sssv, iep, baseline1 or baseline2");
    sub->add_option("--set", overrides, "override a setting, key=value")
        ->allow_extra_args(false);
  };
  CLI::App* train = app.add_subcommand("train", "train a back-end");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score a trial list and report EERs");
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  CLI::App* report =
      app.add_subcommand("report", "report EERs for an existing score file");
  for (CLI::App* sub : {train, evaluate, synth, report}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                      args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig config;
  try {
    ConfigureLoggingFromEnv();
    if (!config_path.empty()) config = RunConfig::Load(config_path);
    for (const auto& o : overrides) config.SetAssignment(o);
    if (seed) config.Set("seed", std::to_string(*seed));
    if (!out.empty()) config.Set("out", out);
    if (!model.empty()) {
      if (!ParseModelKind(model)) {
        throw ConfigError("unknown model '" + model + "'");
      }
      config.Set("model", model);
    }
  } catch (const std::exception& e) {
    SASV_LOG_ERROR("{}", e.what());
    return kExitUsage;
  }

  try {
    if (*train) {
      CmdTrain(config);
    } else if (*evaluate) {
      CmdEvaluate(config);
    } else if (*synth) {
      CmdSynth(config);
    } else {
      CmdReport(config);
    }
  } catch (const ConfigError& e) {
    SASV_LOG_ERROR("{}", e.what());
    return kExitUsage;
  } catch (const models::MissingEmbeddingsError& e) {
    SASV_LOG_ERROR("{} missing embedding(s):", e.missing().size());
    for (const auto& id : e.missing()) SASV_LOG_ERROR("  {}", id);
    return kExitFailure;
  } catch (const std::exception& e) {
    SASV_LOG_ERROR("{}", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace sasv::cli
