/*
 * Copyright 2026 The FedGraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <spdlog/spdlog.h>

namespace fedgraph {

// Applies the level named in FEDGRAPHNN_LOG (trace, debug, info, warn,
// error, off); defaults to warn so library use stays quiet. Log output
// goes to stderr.
void init_logging_from_env();

// The library logger; writes to stderr and is created on first use with
// the level from FEDGRAPHNN_LOG.
spdlog::logger& logger();

}  // namespace fedgraph
