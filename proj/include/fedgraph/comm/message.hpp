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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedgraph/common/bytes.hpp"
#include "fedgraph/gnn/params.hpp"

namespace fedgraph {

enum class MessageType : std::uint8_t {
  kGlobalModel = 1,
  kClientUpdate = 2,
  kMaskShare = 3,
  kMaskedUpload = 4,
  kAggShare = 5,
  kEvalReport = 6,
  kControl = 7,
};

std::string message_type_name(MessageType type);

inline constexpr std::uint16_t kServerId = 0;
inline constexpr std::uint16_t kBroadcastId = 0xFFFF;

struct RoundMessage {
  MessageType type = MessageType::kControl;
  std::uint32_t round = 0;
  std::uint16_t sender = 0;
  std::uint16_t receiver = 0;
  Bytes payload;

  friend bool operator==(const RoundMessage&, const RoundMessage&) = default;
};

// Bytes after the length prefix that precede the payload.
inline constexpr std::size_t kFrameFixedBytes = 9;
// Length prefix plus fixed fields.
inline constexpr std::size_t kFrameHeaderBytes = 4 + kFrameFixedBytes;

// u32 BE length (of everything after it) | type u8 | round u32 BE |
// sender u16 BE | receiver u16 BE | payload.
Bytes encode_frame(const RoundMessage& msg);
// Throws TruncatedFrame, UnknownType, LengthMismatch.
RoundMessage decode_frame(std::span<const std::uint8_t> frame);
// Decodes the part after the length prefix.
RoundMessage decode_frame_body(std::span<const std::uint8_t> body);

// u16 LE segment count, then per segment: u8 name length, name, u8 rank,
// u32 LE dims; then all values as LE f64.
Bytes serialize_params(const ParamVector& params);
// Throws CorruptHeader, also when expected is given and differs.
ParamVector deserialize_params(std::span<const std::uint8_t> bytes,
                               const ParamLayout* expected = nullptr);

}  // namespace fedgraph
