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

#include <cstdint>
#include <span>
#include <vector>

#include "fedgraph/comm/message.hpp"
#include "fedgraph/fl/engine.hpp"
#include "fedgraph/metrics/metrics.hpp"

namespace fedgraph {

enum class GlobalMode : std::uint8_t { kTrain = 1, kEvaluate = 2 };

// GlobalModel: u8 mode, u16 LE count, u16 LE client ids, params.
struct GlobalModelBody {
  GlobalMode mode = GlobalMode::kTrain;
  std::vector<std::uint16_t> clients;  // selected (train) or asked (evaluate)
  ParamVector params;
};
Bytes encode_global(const GlobalModelBody& body);
GlobalModelBody decode_global(std::span<const std::uint8_t> payload, const ParamLayout& layout);

// ClientUpdate: u64 num_samples, f64 train_loss, params.
Bytes encode_update(const ClientUpdate& update);
ClientUpdate decode_update(std::span<const std::uint8_t> payload, const ParamLayout& layout);

// MaskedUpload: u64 num_samples, f64 train_loss, residue vector.
struct MaskedUploadBody {
  std::uint64_t num_samples = 0;
  double train_loss = 0.0;
  std::vector<std::uint64_t> values;
};
Bytes encode_masked_upload(const MaskedUploadBody& body);
MaskedUploadBody decode_masked_upload(std::span<const std::uint8_t> payload);

// MaskShare and AggShare: u64 x, residue vector.
struct ShareBody {
  std::uint64_t x = 0;
  std::vector<std::uint64_t> values;
};
Bytes encode_share(const ShareBody& body);
ShareBody decode_share(std::span<const std::uint8_t> payload);

// EvalReport: (u64 support, f64 value) for validation then test.
struct EvalReportBody {
  EvalResult val;
  EvalResult test;
};
Bytes encode_eval(const EvalReportBody& body);
EvalReportBody decode_eval(std::span<const std::uint8_t> payload, const std::string& metric);

}  // namespace fedgraph
