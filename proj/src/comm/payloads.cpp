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

#include "fedgraph/comm/payloads.hpp"

#include "fedgraph/common/error.hpp"

namespace fedgraph {

Bytes encode_control(const ControlBody& body) {
  Bytes out;
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(body.kind));
  w.le(static_cast<std::uint16_t>(body.ids.size()));
  for (std::uint16_t id : body.ids) w.le(id);
  return out;
}

ControlBody decode_control(std::span<const std::uint8_t> payload) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  ControlBody body;
  const std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 6) fail(ErrorCode::kCorruptHeader, "control kind " + std::to_string(kind));
  body.kind = static_cast<ControlKind>(kind);
  body.ids.resize(r.le<std::uint16_t>());
  for (auto& id : body.ids) id = r.le<std::uint16_t>();
  if (r.remaining() != 0) fail(ErrorCode::kCorruptHeader, "trailing control bytes");
  return body;
}

RoundMessage control_message(ControlKind kind, std::uint32_t round, std::uint16_t receiver,
                             std::vector<std::uint16_t> ids) {
  RoundMessage msg;
  msg.type = MessageType::kControl;
  msg.round = round;
  msg.receiver = receiver;
  msg.payload = encode_control({kind, std::move(ids)});
  return msg;
}

void write_u64_vector(ByteWriter& w, std::span<const std::uint64_t> v) {
  require(v.size() <= 0xFFFFFFFFull, ErrorCode::kCorruptHeader, "vector too long");
  w.le(static_cast<std::uint32_t>(v.size()));
  for (std::uint64_t x : v) w.le(x);
}

std::vector<std::uint64_t> read_u64_vector(ByteReader& r) {
  const std::uint32_t n = r.le<std::uint32_t>();
  if (r.remaining() / 8 < n) fail(ErrorCode::kCorruptHeader, "vector length exceeds payload");
  std::vector<std::uint64_t> out(n);
  for (auto& x : out) x = r.le<std::uint64_t>();
  return out;
}

}  // namespace fedgraph
