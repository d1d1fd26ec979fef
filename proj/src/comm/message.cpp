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

#include "fedgraph/comm/message.hpp"

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::string message_type_name(MessageType type) {
  switch (type) {
    case MessageType::kGlobalModel: return "GlobalModel";
    case MessageType::kClientUpdate: return "ClientUpdate";
    case MessageType::kMaskShare: return "MaskShare";
    case MessageType::kMaskedUpload: return "MaskedUpload";
    case MessageType::kAggShare: return "AggShare";
    case MessageType::kEvalReport: return "EvalReport";
    case MessageType::kControl: return "Control";
  }
  return "Unknown(" + std::to_string(static_cast<int>(type)) + ")";
}

Bytes encode_frame(const RoundMessage& msg) {
  require(msg.payload.size() <= 0xFFFFFFFFull - kFrameFixedBytes, ErrorCode::kLengthMismatch,
          "payload too large for a frame");
  Bytes out;
  out.reserve(kFrameHeaderBytes + msg.payload.size());
  ByteWriter w(out);
  w.be(static_cast<std::uint32_t>(kFrameFixedBytes + msg.payload.size()));
  w.u8(static_cast<std::uint8_t>(msg.type));
  w.be(msg.round);
  w.be(msg.sender);
  w.be(msg.receiver);
  w.raw(msg.payload);
  return out;
}

RoundMessage decode_frame_body(std::span<const std::uint8_t> body) {
  ByteReader r(body, ErrorCode::kTruncatedFrame);
  RoundMessage msg;
  const std::uint8_t type = r.u8();
  if (type < 1 || type > 7) fail(ErrorCode::kUnknownType, "message type " + std::to_string(type));
  msg.type = static_cast<MessageType>(type);
  msg.round = r.be<std::uint32_t>();
  msg.sender = r.be<std::uint16_t>();
  msg.receiver = r.be<std::uint16_t>();
  auto rest = r.raw(r.remaining());
  msg.payload.assign(rest.begin(), rest.end());
  return msg;
}

RoundMessage decode_frame(std::span<const std::uint8_t> frame) {
  ByteReader r(frame, ErrorCode::kTruncatedFrame);
  const std::uint32_t declared = r.be<std::uint32_t>();
  if (declared < kFrameFixedBytes) {
    fail(ErrorCode::kLengthMismatch, "declared length " + std::to_string(declared));
  }
  if (declared != r.remaining()) {
    if (r.remaining() < kFrameFixedBytes) {
      fail(ErrorCode::kTruncatedFrame, "frame shorter than its fixed header");
    }
    fail(ErrorCode::kLengthMismatch, "declared " + std::to_string(declared) + " bytes, got " +
                                         std::to_string(r.remaining()));
  }
  return decode_frame_body(frame.subspan(4));
}

Bytes serialize_params(const ParamVector& params) {
  const ParamLayout& layout = params.layout();
  require(layout.num_segments() <= 0xFFFF, ErrorCode::kCorruptHeader, "too many segments");
  Bytes out;
  ByteWriter w(out);
  w.le(static_cast<std::uint16_t>(layout.num_segments()));
  for (const ParamSegment& s : layout.segments()) {
    require(s.name.size() <= 0xFF, ErrorCode::kCorruptHeader, "segment name too long: " + s.name);
    w.u8(static_cast<std::uint8_t>(s.name.size()));
    w.raw(s.name);
    w.u8(2);
    w.le(static_cast<std::uint32_t>(s.rows));
    w.le(static_cast<std::uint32_t>(s.cols));
  }
  for (double v : params.values()) w.f64_le(v);
  return out;
}

ParamVector deserialize_params(std::span<const std::uint8_t> bytes, const ParamLayout* expected) {
  ByteReader r(bytes, ErrorCode::kCorruptHeader);
  const std::uint16_t count = r.le<std::uint16_t>();
  std::vector<ParamSegment> segments;
  for (std::uint16_t i = 0; i < count; ++i) {
    ParamSegment s;
    s.name = r.string(r.u8());
    const std::uint8_t rank = r.u8();
    if (rank != 2) fail(ErrorCode::kCorruptHeader, "segment rank " + std::to_string(rank));
    s.rows = r.le<std::uint32_t>();
    s.cols = r.le<std::uint32_t>();
    segments.push_back(std::move(s));
  }
  ParamLayout layout(std::move(segments));
  if (expected != nullptr && !(layout == *expected)) {
    fail(ErrorCode::kCorruptHeader, "parameter layout differs from the expected model");
  }
  if (r.remaining() != layout.total_size() * 8) {
    fail(ErrorCode::kCorruptHeader, "expected " + std::to_string(layout.total_size() * 8) +
                                        " value bytes, got " + std::to_string(r.remaining()));
  }
  std::vector<double> data(layout.total_size());
  for (double& v : data) v = r.f64_le();
  return ParamVector(std::move(layout), std::move(data));
}

}  // namespace fedgraph
