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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fedgraph/secure/field.hpp"
#include "fedgraph/secure/shamir.hpp"

namespace fedgraph {

struct SAConfig {
  std::size_t num_clients = 4;  // N, participants in a round
  std::size_t threshold = 3;    // T
  int scale_bits = 24;
  std::int64_t clamp_bound = std::int64_t{1} << 40;
  std::uint64_t seed = 0;       // trusted-setup key material

  // Throws InvalidConfig.
  void validate() const;
};

// Client side of one LightSecAgg-style round. index is the client's
// position among the round's N participants; its shares are evaluated at
// x = index + 1. Mask shares travel through the server, so each one is
// one-time padded under a key shared only by its two endpoints.
class SecAggClient {
 public:
  SecAggClient(const SAConfig& config, std::size_t index, std::uint64_t round, std::size_t dim);

  std::size_t index() const { return index_; }

  // R1: padded shares of this client's mask z_i; element j is for client j.
  std::vector<ShareVector> mask_shares() const;
  void receive_share(std::size_t from, const ShareVector& padded);

  // R2: quantize(num_samples * params) + z_i.
  FieldVector masked_upload(std::span<const double> params, std::uint64_t num_samples,
                            QuantizeStats* stats = nullptr) const;

  // R3: sum of the shares received from the upload survivors. Throws
  // InsufficientShares when one of them never arrived.
  ShareVector aggregate_share(std::span<const std::size_t> survivors) const;

 private:
  SAConfig config_;
  std::size_t index_;
  std::uint64_t round_;
  std::size_t dim_;
  std::map<std::size_t, ShareVector> received_;
};

// Server side: sees masked uploads and aggregated shares only.
class SecAggServer {
 public:
  SecAggServer(const SAConfig& config, std::size_t dim);

  void receive_upload(std::size_t from, FieldVector masked, std::uint64_t num_samples);
  // U1, ascending.
  std::vector<std::size_t> upload_survivors() const;
  void receive_aggregate_share(std::size_t from, ShareVector share);
  std::size_t aggregate_share_count() const { return shares_.size(); }

  // Sum over U1 of the quantized weighted updates. Throws
  // InsufficientSurvivors when fewer than T aggregate shares arrived.
  FieldVector unmasked_sum() const;
  // unmasked_sum dequantized and divided by the survivors' sample total.
  std::vector<double> finish() const;

 private:
  SAConfig config_;
  std::size_t dim_;
  std::map<std::size_t, FieldVector> uploads_;
  std::map<std::size_t, std::uint64_t> samples_;
  std::map<std::size_t, ShareVector> shares_;
};

// Positions (0..N-1) that fall away during a simulated round.
struct SurvivorSchedule {
  std::vector<std::size_t> drop_before_upload;     // shared masks, never uploaded
  std::vector<std::size_t> drop_before_agg_share;  // uploaded, silent in R3
};

struct SecureAggregate {
  std::vector<double> values;
  std::vector<std::size_t> survivors;  // U1
  std::size_t clamped = 0;
};

// In-process run of the three rounds. params[i] and num_samples[i] belong
// to position i. Throws InsufficientSurvivors, LayoutMismatch.
SecureAggregate lightsecagg_round(const std::vector<std::vector<double>>& params,
                                  std::span<const std::uint64_t> num_samples,
                                  const SAConfig& config, const SurvivorSchedule& schedule,
                                  std::uint64_t round);

// Pairwise-mask baseline: client i adds PRG(s_ij) for j > i and subtracts
// PRG(s_ji) for j < i, with seeds from the trusted setup.
FieldVector pairwise_masked_upload(std::span<const double> params, std::uint64_t num_samples,
                                   std::size_t index, const SAConfig& config,
                                   std::uint64_t round, QuantizeStats* stats = nullptr);

// present lists the positions that uploaded; anything short of all N
// throws DropoutUnsupported.
SecureAggregate pairwise_mask_round(const std::vector<std::vector<double>>& params,
                                    std::span<const std::uint64_t> num_samples,
                                    const SAConfig& config, std::uint64_t round,
                                    std::optional<std::vector<std::size_t>> present = std::nullopt);

}  // namespace fedgraph
