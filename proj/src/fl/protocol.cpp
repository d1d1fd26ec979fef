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

#include "fedgraph/fl/protocol.hpp"

#include "fedgraph/comm/payloads.hpp"
#include "fedgraph/common/error.hpp"

namespace fedgraph {
namespace {

void expect_end(const ByteReader& r) {
  if (r.remaining() != 0) fail(ErrorCode::kCorruptHeader, "trailing payload bytes");
}

}  // namespace

Bytes encode_global(const GlobalModelBody& body) {
  Bytes out;
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(body.mode));
  w.le(static_cast<std::uint16_t>(body.clients.size()));
  for (std::uint16_t id : body.clients) w.le(id);
  w.raw(serialize_params(body.params));
  return out;
}

GlobalModelBody decode_global(std::span<const std::uint8_t> payload, const ParamLayout& layout) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  GlobalModelBody body;
  const std::uint8_t mode = r.u8();
  if (mode != 1 && mode != 2) fail(ErrorCode::kCorruptHeader, "global model mode");
  body.mode = static_cast<GlobalMode>(mode);
  body.clients.resize(r.le<std::uint16_t>());
  for (auto& id : body.clients) id = r.le<std::uint16_t>();
  body.params = deserialize_params(r.raw(r.remaining()), &layout);
  return body;
}

Bytes encode_update(const ClientUpdate& update) {
  Bytes out;
  ByteWriter w(out);
  w.le(update.num_samples);
  w.f64_le(update.train_loss);
  w.raw(serialize_params(update.params));
  return out;
}

ClientUpdate decode_update(std::span<const std::uint8_t> payload, const ParamLayout& layout) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  ClientUpdate u;
  u.num_samples = r.le<std::uint64_t>();
  u.train_loss = r.f64_le();
  u.params = deserialize_params(r.raw(r.remaining()), &layout);
  return u;
}

Bytes encode_masked_upload(const MaskedUploadBody& body) {
  Bytes out;
  ByteWriter w(out);
  w.le(body.num_samples);
  w.f64_le(body.train_loss);
  write_u64_vector(w, body.values);
  return out;
}

MaskedUploadBody decode_masked_upload(std::span<const std::uint8_t> payload) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  MaskedUploadBody body;
  body.num_samples = r.le<std::uint64_t>();
  body.train_loss = r.f64_le();
  body.values = read_u64_vector(r);
  expect_end(r);
  return body;
}

Bytes encode_share(const ShareBody& body) {
  Bytes out;
  ByteWriter w(out);
  w.le(body.x);
  write_u64_vector(w, body.values);
  return out;
}

ShareBody decode_share(std::span<const std::uint8_t> payload) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  ShareBody body;
  body.x = r.le<std::uint64_t>();
  body.values = read_u64_vector(r);
  expect_end(r);
  return body;
}

Bytes encode_eval(const EvalReportBody& body) {
  Bytes out;
  ByteWriter w(out);
  for (const EvalResult* e : {&body.val, &body.test}) {
    w.le(static_cast<std::uint64_t>(e->support));
    w.f64_le(e->value);
  }
  return out;
}

EvalReportBody decode_eval(std::span<const std::uint8_t> payload, const std::string& metric) {
  ByteReader r(payload, ErrorCode::kCorruptHeader);
  EvalReportBody body;
  for (EvalResult* e : {&body.val, &body.test}) {
    e->metric = metric;
    e->support = r.le<std::uint64_t>();
    e->value = r.f64_le();
  }
  expect_end(r);
  return body;
}

}  // namespace fedgraph
