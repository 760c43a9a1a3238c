// Copyright 2026 The ttrnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttrnn/log.hpp"

#include <cstdlib>
#include <memory>
#include <string_view>

#include <spdlog/sinks/stdout_sinks.h>

namespace ttrnn {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* value = std::getenv("TTRNN_LOG");
  if (value == nullptr) return spdlog::level::info;
  const std::string_view v(value);
  if (v == "quiet") return spdlog::level::off;
  if (v == "debug") return spdlog::level::debug;
  return spdlog::level::info;
}

std::shared_ptr<spdlog::logger> make_logger() {
  auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
  auto logger = std::make_shared<spdlog::logger>("ttrnn", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(level_from_env());
  return logger;
}

}  // namespace

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> logger = make_logger();
  return *logger;
}

void configure_logging_from_env() { log().set_level(level_from_env()); }

}  // namespace ttrnn
