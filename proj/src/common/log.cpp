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

#include "fedgraph/common/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace fedgraph {
namespace {

spdlog::level::level_enum env_level() {
  const char* level = std::getenv("FEDGRAPHNN_LOG");
  return level ? spdlog::level::from_str(level) : spdlog::level::warn;
}

std::shared_ptr<spdlog::logger> make_logger() {
  auto existing = spdlog::get("fedgraph");
  if (existing) return existing;
  auto created = spdlog::stderr_color_mt("fedgraph");
  created->set_level(env_level());
  return created;
}

}  // namespace

spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = make_logger();
  return *instance;
}

void init_logging_from_env() {
  logger().set_level(env_level());
  spdlog::set_default_logger(make_logger());
  spdlog::set_level(env_level());
}

}  // namespace fedgraph
