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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fedgraph/cli/config.hpp"
#include "fedgraph/common/error.hpp"
#include "fedgraph/fl/report.hpp"

namespace fedgraph {

// Exit codes: 0 success, 2 invalid input or config, 3 transport failure,
// 4 too few secure-aggregation survivors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitTransport = 3;
inline constexpr int kExitSurvivors = 4;

int exit_code_for(ErrorCode code);

using Overrides = std::vector<std::pair<std::string, ordered_json>>;

// Config file plus overrides (applied in order, later wins).
ordered_json load_run_document(const std::filesystem::path& path, const Overrides& overrides);

struct TrainRequest {
  std::filesystem::path config_path;
  Overrides overrides;
  bool centralized = false;
  TransportKind transport = TransportKind::kMemory;
  // Executable that serves the hidden `client` command (tcp transport).
  std::filesystem::path client_executable;
};

struct TrainResult {
  RunConfig config;
  TrainingReport report;
  ordered_json echo;  // config as it ran, without output_dir
};

TrainResult execute_train(const TrainRequest& request);
TrainResult execute_run(const RunConfig& config, bool centralized, TransportKind transport,
                        const TrainRequest* tcp_request = nullptr);

// report.json, report.csv, timing.json, model.bin.
void write_train_outputs(const TrainResult& result, const std::filesystem::path& dir);

// Entry point of the fedgraph executable.
int run_cli(int argc, char** argv);

}  // namespace fedgraph
