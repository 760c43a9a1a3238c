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

#pragma once

#include <spdlog/logger.h>

namespace ttrnn {

/// Process-wide logger writing to standard error. The level comes from the
/// TTRNN_LOG environment variable (quiet | info | debug, default info).
spdlog::logger& log();

/// Re-reads TTRNN_LOG; used by the CLI after startup.
void configure_logging_from_env();

}  // namespace ttrnn
