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

#ifndef SASV_CLI_COMMANDS_H_
#define SASV_CLI_COMMANDS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sasv/cli/run_config.h"
#include "sasv/metrics/eer.h"

namespace sasv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class ModelKind { kMsfm, kMsfmNoSssv, kIep, kBaseline1, kBaseline2 };

std::string_view ToString(ModelKind kind);
std::optional<ModelKind> ParseModelKind(std::string_view name);

// Each command reads its settings from `config`, writes its outputs under
// the `out` directory, and finishes by writing resolved.cfg there.
//
// synth:    train/dev/eval protocols, enroll.map, dev.trials, eval.trials,
//           asv.emb, cm.emb
// train:    model.ckpt, train_log.tsv
// evaluate: scores.txt, report.txt, report.csv, histogram.csv
// report:   report.txt, report.csv, histogram.csv
void CmdSynth(RunConfig& config);
void CmdTrain(RunConfig& config);
metrics::EvalReport CmdEvaluate(RunConfig& config);
metrics::EvalReport CmdReport(RunConfig& config);

// Full command line including the program name. Returns the exit code.
int RunCli(const std::vector<std::string>& args);

}  // namespace sasv::cli

#endif  // SASV_CLI_COMMANDS_H_
