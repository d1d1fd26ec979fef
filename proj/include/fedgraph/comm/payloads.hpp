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

namespace fedgraph {

enum class ControlKind : std::uint8_t {
  kHello = 1,
  kHelloAck = 2,
  kShutdown = 3,
  kDropout = 4,
  kSurvivorList = 5,
  kAbort = 6,
};

struct ControlBody {
  ControlKind kind = ControlKind::kHello;
  std::vector<std::uint16_t> ids;  // survivor list; empty otherwise

  friend bool operator==(const ControlBody&, const ControlBody&) = default;
};

// u8 kind, u16 LE id count, u16 LE ids.
Bytes encode_control(const ControlBody& body);
// Throws CorruptHeader.
ControlBody decode_control(std::span<const std::uint8_t> payload);

RoundMessage control_message(ControlKind kind, std::uint32_t round, std::uint16_t receiver,
                             std::vector<std::uint16_t> ids = {});

// Residue vectors: u32 LE length, then LE u64 words.
void write_u64_vector(ByteWriter& w, std::span<const std::uint64_t> v);
std::vector<std::uint64_t> read_u64_vector(ByteReader& r);

}  // namespace fedgraph
