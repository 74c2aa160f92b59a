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

#include "sasv/common/logging.h"

#include <cstdlib>
#include <memory>
#include <stdexcept>

#include <spdlog/sinks/stdout_sinks.h>

namespace sasv {

namespace {

spdlog::level::level_enum LevelFromEnv() {
  const char* value = std::getenv("SASV_LOG");
  if (value == nullptr || *value == '\0') return spdlog::level::info;
  const std::string name(value);
  if (name == "error") return spdlog::level::err;
  if (name == "info") return spdlog::level::info;
  if (name == "debug") return spdlog::level::debug;
  throw std::invalid_argument("SASV_LOG must be error, info or debug (got '" +
                              name + "')");
}

std::shared_ptr<spdlog::logger> MakeLogger() {
  auto logger = std::make_shared<spdlog::logger>(
      "sasv", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_pattern("[%l] %v");
  try {
    logger->set_level(LevelFromEnv());
  } catch (const std::invalid_argument&) {
    logger->set_level(spdlog::level::info);
  }
  return logger;
}

}  // namespace

spdlog::logger& Logger() {
  static std::shared_ptr<spdlog::logger> logger = MakeLogger();
  return *logger;
}

void ConfigureLoggingFromEnv() { Logger().set_level(LevelFromEnv()); }

}  // namespace sasv
