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

#ifndef SASV_COMMON_LOGGING_H_
#define SASV_COMMON_LOGGING_H_

#include <string>

#include <spdlog/spdlog.h>

namespace sasv {

// Process-wide logger writing to stderr. The level comes from the SASV_LOG
// environment variable (error, info, debug); default info.
spdlog::logger& Logger();

// Re-reads SASV_LOG. Throws std::invalid_argument on an unknown value.
void ConfigureLoggingFromEnv();

}  // namespace sasv

#define SASV_LOG_ERROR(...) ::sasv::Logger().error(__VA_ARGS__)
#define SASV_LOG_INFO(...) ::sasv::Logger().info(__VA_ARGS__)
#define SASV_LOG_DEBUG(...) ::sasv::Logger().debug(__VA_ARGS__)

#endif  // SASV_COMMON_LOGGING_H_
