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

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sasv/cli/commands.h"
#include "sasv/cli/run_config.h"
#include "sasv/common/error.h"
#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"
#include "sasv/metrics/report.h"
#include "sasv/models/checkpoint.h"
#include "sasv/models/pipeline.h"

namespace sasv::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kSmallCorpus = {
    "n_speakers=10",  "utts_per_speaker=6", "spoofs_per_speaker=6",
    "asv_dim=16",     "cm_dim=12",          "speaker_rank=4",
    "session_rank=2", "train_fraction=0.4", "dev_fraction=0.3"};

const std::vector<std::string> kShortTraining = {
    "epochs=2", "samples_per_epoch=64", "batch_size=16",
    "triplets_per_batch=16"};

std::string Slurp(const fs::path& path) {
  return data::ReadTextFile(path.string());
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            (std::string("sasv_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path Dir(const std::string& name) const { return root_ / name; }

  static int Run(const std::string& command, const fs::path& out,
                 const std::vector<std::string>& sets,
                 std::initializer_list<std::string> extra = {}) {
    std::vector<std::string> args = {"sasv", command, "--out", out.string()};
    for (const auto& s : sets) {
      args.push_back("--set");
      args.push_back(s);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return RunCli(args);
  }

  // Synthetic corpus in Dir("data").
  void Synth(std::vector<std::string> sets = kSmallCorpus) {
    ASSERT_EQ(Run("synth", Dir("data"), sets), kExitOk);
  }

  std::vector<std::string> DataSets(const std::string& trials = "eval") const {
    const fs::path d = root_ / "data";
    return {"asv_store=" + (d / "asv.emb").string(),
            "cm_store=" + (d / "cm.emb").string(),
            "protocol=" + (d / "train.protocol").string(),
            "enroll_map=" + (d / "enroll.map").string(),
            "trials=" + (d / (trials + ".trials")).string()};
  }

  std::vector<std::string> TrainSets() const {
    auto sets = DataSets();
    sets.insert(sets.end(), kShortTraining.begin(), kShortTraining.end());
    return sets;
  }

  std::vector<std::string> WithCheckpoint(const fs::path& train_dir) const {
    auto sets = DataSets();
    sets.push_back("checkpoint=" + (train_dir / "model.ckpt").string());
    return sets;
  }

  fs::path root_;
};

TEST_F(CliTest, SynthWritesConsistentArtifacts) {
  Synth();
  for (const char* name :
       {"train.protocol", "dev.protocol", "eval.protocol", "enroll.map",
        "dev.trials", "eval.trials", "asv.emb", "cm.emb", "resolved.cfg"}) {
    EXPECT_TRUE(fs::exists(Dir("data") / name)) << name;
  }
  const auto asv = data::LoadEmbeddingStore(
      (Dir("data") / "asv.emb").string(), data::EmbeddingKind::kAsv);
  const auto cm = data::LoadEmbeddingStore((Dir("data") / "cm.emb").string(),
                                           data::EmbeddingKind::kCm);
  EXPECT_EQ(asv.dim(), 16);
  EXPECT_EQ(cm.dim(), 12);
  const auto enrollment =
      data::ParseEnrollmentMap(Slurp(Dir("data") / "enroll.map"));
  const models::EmbeddingResolver resolver(asv, cm);
  for (const char* split : {"dev.trials", "eval.trials"}) {
    const auto trials =
        data::ParseTrialList(Slurp(Dir("data") / split), enrollment);
    EXPECT_FALSE(trials.empty());
    EXPECT_NO_THROW(resolver.CheckCoverage(trials)) << split;
  }
  for (const char* split : {"train.protocol", "dev.protocol", "eval.protocol"}) {
    for (const auto& r : data::ParseCmProtocol(Slurp(Dir("data") / split))) {
      EXPECT_TRUE(asv.Contains(r.utterance_id)) << r.utterance_id;
      EXPECT_TRUE(cm.Contains(r.utterance_id)) << r.utterance_id;
    }
  }
}

TEST_F(CliTest, SynthIsDeterministicPerSeed) {
  auto sets = kSmallCorpus;
  ASSERT_EQ(Run("synth", Dir("a"), sets, {"--seed", "5"}), kExitOk);
  ASSERT_EQ(Run("synth", Dir("b"), sets, {"--seed", "5"}), kExitOk);
  ASSERT_EQ(Run("synth", Dir("c"), sets, {"--seed", "6"}), kExitOk);
  for (const char* name : {"asv.emb", "cm.emb", "eval.trials"}) {
    EXPECT_EQ(Slurp(Dir("a") / name), Slurp(Dir("b") / name)) << name;
  }
  EXPECT_NE(Slurp(Dir("a") / "asv.emb"), Slurp(Dir("c") / "asv.emb"));
}

TEST_F(CliTest, SynthTsvStoresLoad) {
  auto sets = kSmallCorpus;
  sets.push_back("store_format=tsv");
  Synth(sets);
  const std::string text = Slurp(Dir("data") / "asv.emb");
  EXPECT_NE(text.find('\t'), std::string::npos);
  EXPECT_EQ(data::LoadEmbeddingStore((Dir("data") / "asv.emb").string(),
                                     data::EmbeddingKind::kAsv)
                .dim(),
            16);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  auto one = kSmallCorpus;
  one.push_back("n_speakers=1");
  EXPECT_EQ(Run("synth", Dir("x"), one), kExitUsage);
  EXPECT_EQ(Run("synth", Dir("x"), {"no_such_key=1"}), kExitUsage);
  EXPECT_EQ(Run("synth", Dir("x"), {"cm_scale=0"}), kExitUsage);
  EXPECT_EQ(RunCli({"sasv"}), kExitUsage);
  EXPECT_EQ(RunCli({"sasv", "bogus"}), kExitUsage);
  EXPECT_EQ(RunCli({"sasv", "--help"}), kExitOk);
  Synth();
  EXPECT_EQ(Run("train", Dir("t"), TrainSets(), {"--model", "resnet"}),
            kExitUsage);
  EXPECT_EQ(Run("train", Dir("t"), TrainSets(), {"--model", "baseline1"}),
            kExitUsage);
  EXPECT_EQ(Run("train", Dir("t"), TrainSets()), kExitUsage);
  auto bad_lr = TrainSets();
  bad_lr.push_back("learning_rate=-1");
  EXPECT_EQ(Run("train", Dir("t"), bad_lr, {"--model", "msfm"}), kExitUsage);
  auto missing_file = DataSets();
  missing_file.push_back("checkpoint=" + (root_ / "nope.ckpt").string());
  EXPECT_EQ(Run("evaluate", Dir("e"), missing_file), kExitUsage);
}

TEST_F(CliTest, Baseline1EvaluatesWithoutCheckpoint) {
  Synth();
  ASSERT_EQ(Run("evaluate", Dir("e"), DataSets(), {"--model", "baseline1"}),
            kExitOk);
  for (const char* name : {"scores.txt", "report.txt", "report.csv",
                           "histogram.csv", "resolved.cfg"}) {
    EXPECT_TRUE(fs::exists(Dir("e") / name)) << name;
  }
  const auto keys = data::ParseTrialKeys(Slurp(Dir("data") / "eval.trials"));
  EXPECT_EQ(metrics::ParseScoreFile(Slurp(Dir("e") / "scores.txt")).size(),
            keys.size());
}

TEST_F(CliTest, MissingEmbeddingFailsTheRun) {
  Synth();
  const auto keys = data::ParseTrialKeys(Slurp(Dir("data") / "eval.trials"));
  std::ofstream(Dir("data") / "eval.trials", std::ios::app)
      << keys.front().enroll_speaker_id << " ghost_utt target\n";
  EXPECT_EQ(Run("evaluate", Dir("e"), DataSets(), {"--model", "baseline1"}),
            kExitFailure);
  EXPECT_FALSE(fs::exists(Dir("e") / "report.txt"));
}

TEST_F(CliTest, ReportReproducesEvaluate) {
  Synth();
  ASSERT_EQ(Run("train", Dir("t"), TrainSets(), {"--model", "msfm"}), kExitOk);
  RunConfig eval_config;
  for (const auto& s : WithCheckpoint(Dir("t"))) eval_config.SetAssignment(s);
  eval_config.Set("out", Dir("e").string());
  const metrics::EvalReport evaluated = CmdEvaluate(eval_config);

  RunConfig report_config;
  report_config.Set("scores", (Dir("e") / "scores.txt").string());
  report_config.Set("trials", (Dir("data") / "eval.trials").string());
  report_config.Set("out", Dir("r").string());
  const metrics::EvalReport reported = CmdReport(report_config);
  for (metrics::Metric m : metrics::kAllMetrics) {
    EXPECT_EQ(reported.EerPercent(m), evaluated.EerPercent(m))
        << metrics::ToString(m);
  }
  EXPECT_EQ(Slurp(Dir("r") / "report.txt"), Slurp(Dir("e") / "report.txt"));
  EXPECT_EQ(Slurp(Dir("r") / "report.csv"), Slurp(Dir("e") / "report.csv"));
  EXPECT_EQ(Slurp(Dir("r") / "histogram.csv"),
            Slurp(Dir("e") / "histogram.csv"));
}

TEST_F(CliTest, HandBuiltScoreFile) {
  fs::create_directories(Dir("in"));
  data::WriteTextFile((Dir("in") / "t.trials").string(),
                      "a u1 target\na u2 target\na u3 target\n"
                      "a u4 nontarget\na u5 spoof\na u6 spoof\n");
  data::WriteTextFile((Dir("in") / "s.txt").string(),
                      "a u6 0.1\na u5 0.2\na u4 0.6\n"
                      "a u3 0.4\na u2 0.8\na u1 0.9\n");
  ASSERT_EQ(Run("report", Dir("r"),
                {"scores=" + (Dir("in") / "s.txt").string(),
                 "trials=" + (Dir("in") / "t.trials").string()}),
            kExitOk);
  const std::string csv = Slurp(Dir("r") / "report.csv");
  EXPECT_NE(csv.find("\nsasv,33.333333,"), std::string::npos) << csv;
}

TEST_F(CliTest, MalformedScoreLineNamesTheLine) {
  fs::create_directories(Dir("in"));
  data::WriteTextFile((Dir("in") / "t.trials").string(), "a u1 target\n");
  data::WriteTextFile((Dir("in") / "s.txt").string(), "a u1 0.5\na u2\n");
  RunConfig config;
  config.Set("scores", (Dir("in") / "s.txt").string());
  config.Set("trials", (Dir("in") / "t.trials").string());
  config.Set("out", Dir("r").string());
  try {
    CmdReport(config);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("s.txt:2"), std::string::npos);
  }
  EXPECT_EQ(Run("report", Dir("r"),
                {"scores=" + (Dir("in") / "s.txt").string(),
                 "trials=" + (Dir("in") / "t.trials").string()}),
            kExitFailure);
}

TEST_F(CliTest, ResolvedConfigRecordsEffectiveSettings) {
  Synth();
  fs::create_directories(Dir("cfg"));
  const fs::path cfg = Dir("cfg") / "run.cfg";
  std::string text = "# training run\nmodel = iep\nepochs = 7\n";
  for (const auto& s : TrainSets()) {
    if (s.rfind("epochs=", 0) == 0) continue;
    const auto eq = s.find('=');
    text += s.substr(0, eq) + " = " + s.substr(eq + 1) + "\n";
  }
  data::WriteTextFile(cfg.string(), text);
  ASSERT_EQ(RunCli({"sasv", "train", "--config", cfg.string(), "--out",
                    Dir("t").string(), "--seed", "9", "--set", "epochs=1"}),
            kExitOk);
  RunConfig resolved =
      RunConfig::Load((Dir("t") / "resolved.cfg").string());
  EXPECT_EQ(resolved.RequireString("model"), "iep");
  EXPECT_EQ(resolved.RequireString("epochs"), "1");
  EXPECT_EQ(resolved.RequireString("seed"), "9");
  EXPECT_EQ(resolved.RequireString("margin"), "0.5");
  EXPECT_NE(Slurp(Dir("t") / "train_log.tsv").find("# model=iep seed=9"),
            std::string::npos);

  ASSERT_EQ(Run("evaluate", Dir("e"), WithCheckpoint(Dir("t"))), kExitOk);
  EXPECT_EQ(RunConfig::Load((Dir("e") / "resolved.cfg").string())
                .RequireString("model"),
            "iep");
  EXPECT_EQ(Run("evaluate", Dir("e2"), WithCheckpoint(Dir("t")),
                {"--model", "msfm"}),
            kExitUsage);
}

TEST_F(CliTest, EveryTrainableModelRoundTripsThroughEvaluate) {
  Synth();
  for (const char* model : {"msfm", "msfm-no-sssv", "iep", "baseline2"}) {
    const fs::path train_dir = Dir(std::string("t_") + model);
    ASSERT_EQ(Run("train", train_dir, TrainSets(), {"--model", model}),
              kExitOk)
        << model;
    EXPECT_EQ(models::LoadCheckpoint((train_dir / "model.ckpt").string()).kind,
              model);
    EXPECT_EQ(Run("evaluate", Dir(std::string("e_") + model),
                  WithCheckpoint(train_dir)),
              kExitOk)
        << model;
  }
}

TEST_F(CliTest, TrainAndEvaluateAreReproducible) {
  Synth();
  for (const char* run : {"1", "2"}) {
    const fs::path t = Dir(std::string("t") + run);
    ASSERT_EQ(Run("train", t, TrainSets(), {"--model", "msfm"}), kExitOk);
    ASSERT_EQ(Run("evaluate", Dir(std::string("e") + run), WithCheckpoint(t)),
              kExitOk);
  }
  EXPECT_EQ(Slurp(Dir("t1") / "model.ckpt"), Slurp(Dir("t2") / "model.ckpt"));
  EXPECT_EQ(Slurp(Dir("e1") / "scores.txt"), Slurp(Dir("e2") / "scores.txt"));
  EXPECT_EQ(Slurp(Dir("e1") / "report.txt"), Slurp(Dir("e2") / "report.txt"));
}

}  // namespace
}  // namespace sasv::cli
