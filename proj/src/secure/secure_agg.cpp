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

#include "fedgraph/secure/secure_agg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/log.hpp"
#include "fedgraph/secure/prg.hpp"

namespace fedgraph {
namespace {

const PrimeField kField;

FieldVector client_mask(const SAConfig& c, std::uint64_t round, std::size_t index, std::size_t dim) {
  MaskPrg prg(derive_key(c.seed, "lsa_mask", round, index));
  return prg.residues(dim, kField);
}

// Pad for the share sent from -> to; both endpoints can derive it.
FieldVector share_pad(const SAConfig& c, std::uint64_t round, std::size_t from, std::size_t to,
                      std::size_t dim) {
  MaskPrg prg(derive_key(c.seed, "lsa_pad", round, from * 65536 + to));
  return prg.residues(dim, kField);
}

FieldVector pair_mask(const SAConfig& c, std::uint64_t round, std::size_t lo, std::size_t hi,
                      std::size_t dim) {
  MaskPrg prg(derive_key(c.seed, "pairwise", round, lo * 65536 + hi));
  return prg.residues(dim, kField);
}

FieldVector weighted_quantize(std::span<const double> params, std::uint64_t num_samples,
                              const SAConfig& c, QuantizeStats* stats) {
  std::vector<double> scaled(params.begin(), params.end());
  const double weight = static_cast<double>(num_samples);
  for (double& v : scaled) v *= weight;
  return quantize(scaled, c.scale_bits, c.clamp_bound, kField, stats);
}

std::vector<double> finish_weighted(const FieldVector& sum, std::uint64_t total, int scale_bits) {
  require(total > 0, ErrorCode::kInvalidCount, "survivors hold no samples");
  std::vector<double> out = dequantize(sum, scale_bits, kField);
  const double denom = static_cast<double>(total);
  for (double& v : out) v /= denom;
  return out;
}

void check_inputs(const std::vector<std::vector<double>>& params,
                  std::span<const std::uint64_t> num_samples, const SAConfig& config) {
  require(params.size() == config.num_clients && num_samples.size() == config.num_clients,
          ErrorCode::kInvalidCount, "expected one update per configured client");
  for (const auto& p : params) {
    require(p.size() == params[0].size(), ErrorCode::kLayoutMismatch, "update lengths differ");
  }
}

}  // namespace

void SAConfig::validate() const {
  require(num_clients >= 1, ErrorCode::kInvalidConfig, "secure.num_clients must be >= 1");
  require(threshold >= 1 && threshold <= num_clients, ErrorCode::kInvalidConfig,
          "secure.threshold must lie in [1, num_clients]");
  require(scale_bits >= 0 && scale_bits <= 52, ErrorCode::kInvalidConfig,
          "secure.scale_bits must lie in [0, 52]");
  require(clamp_bound > 0, ErrorCode::kInvalidConfig, "secure.clamp_bound must be > 0");
  // N (2B + 1) < p keeps true sums clear of wraparound.
  const long double span = static_cast<long double>(num_clients) *
                           (2.0L * static_cast<long double>(clamp_bound) + 1.0L);
  require(span < static_cast<long double>(kMersenne61), ErrorCode::kInvalidConfig,
          "secure.clamp_bound too large for num_clients in the 2^61-1 field");
}

SecAggClient::SecAggClient(const SAConfig& config, std::size_t index, std::uint64_t round,
                           std::size_t dim)
    : config_(config), index_(index), round_(round), dim_(dim) {
  config_.validate();
  require(index < config.num_clients, ErrorCode::kUnknownParticipant, "client index out of range");
}

std::vector<ShareVector> SecAggClient::mask_shares() const {
  const FieldVector z = client_mask(config_, round_, index_, dim_);
  MaskPrg coefficients(derive_key(config_.seed, "lsa_coeff", round_, index_));
  std::vector<ShareVector> shares =
      shamir_share(z, config_.num_clients, config_.threshold, kField,
                   [&] { return coefficients.next_residue(kField); });
  for (std::size_t j = 0; j < shares.size(); ++j) {
    kField.add_inplace(shares[j].values, share_pad(config_, round_, index_, j, dim_));
  }
  return shares;
}

void SecAggClient::receive_share(std::size_t from, const ShareVector& padded) {
  require(from < config_.num_clients, ErrorCode::kUnknownParticipant, "share from unknown client");
  require(padded.values.size() == dim_, ErrorCode::kLayoutMismatch, "share length");
  ShareVector plain = padded;
  kField.sub_inplace(plain.values, share_pad(config_, round_, from, index_, dim_));
  received_[from] = std::move(plain);
}

FieldVector SecAggClient::masked_upload(std::span<const double> params, std::uint64_t num_samples,
                                        QuantizeStats* stats) const {
  require(params.size() == dim_, ErrorCode::kLayoutMismatch, "update length");
  FieldVector x = weighted_quantize(params, num_samples, config_, stats);
  kField.add_inplace(x, client_mask(config_, round_, index_, dim_));
  return x;
}

ShareVector SecAggClient::aggregate_share(std::span<const std::size_t> survivors) const {
  ShareVector out;
  out.x = index_ + 1;
  out.values.assign(dim_, 0);
  for (std::size_t i : survivors) {
    auto it = received_.find(i);
    require(it != received_.end(), ErrorCode::kInsufficientShares,
            "client " + std::to_string(index_) + " holds no share from " + std::to_string(i));
    kField.add_inplace(out.values, it->second.values);
  }
  return out;
}

SecAggServer::SecAggServer(const SAConfig& config, std::size_t dim) : config_(config), dim_(dim) {
  config_.validate();
}

void SecAggServer::receive_upload(std::size_t from, FieldVector masked, std::uint64_t num_samples) {
  require(from < config_.num_clients, ErrorCode::kUnknownParticipant, "upload from unknown client");
  require(masked.size() == dim_, ErrorCode::kLayoutMismatch, "masked upload length");
  uploads_[from] = std::move(masked);
  samples_[from] = num_samples;
}

std::vector<std::size_t> SecAggServer::upload_survivors() const {
  std::vector<std::size_t> out;
  for (const auto& [i, v] : uploads_) out.push_back(i);
  return out;
}

void SecAggServer::receive_aggregate_share(std::size_t from, ShareVector share) {
  require(from < config_.num_clients, ErrorCode::kUnknownParticipant, "share from unknown client");
  require(share.values.size() == dim_, ErrorCode::kLayoutMismatch, "aggregate share length");
  shares_[from] = std::move(share);
}

FieldVector SecAggServer::unmasked_sum() const {
  require(shares_.size() >= config_.threshold, ErrorCode::kInsufficientSurvivors,
          std::to_string(shares_.size()) + " aggregate shares, threshold " +
              std::to_string(config_.threshold));
  require(!uploads_.empty(), ErrorCode::kInsufficientSurvivors, "no uploads");
  std::vector<ShareVector> shares;
  for (const auto& [j, s] : shares_) shares.push_back(s);
  const FieldVector mask_sum = shamir_reconstruct(shares, config_.threshold, kField);
  FieldVector sum(dim_, 0);
  for (const auto& [i, v] : uploads_) kField.add_inplace(sum, v);
  kField.sub_inplace(sum, mask_sum);
  return sum;
}

std::vector<double> SecAggServer::finish() const {
  std::uint64_t total = 0;
  for (const auto& [i, n] : samples_) total += n;
  return finish_weighted(unmasked_sum(), total, config_.scale_bits);
}

SecureAggregate lightsecagg_round(const std::vector<std::vector<double>>& params,
                                  std::span<const std::uint64_t> num_samples,
                                  const SAConfig& config, const SurvivorSchedule& schedule,
                                  std::uint64_t round) {
  config.validate();
  check_inputs(params, num_samples, config);
  const std::size_t n = config.num_clients;
  const std::size_t dim = params.empty() ? 0 : params[0].size();
  std::vector<SecAggClient> clients;
  for (std::size_t i = 0; i < n; ++i) clients.emplace_back(config, i, round, dim);
  SecAggServer server(config, dim);

  // R1: every client shares its mask with every other client.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ShareVector> shares = clients[i].mask_shares();
    for (std::size_t j = 0; j < n; ++j) clients[j].receive_share(i, shares[j]);
  }
  const std::set<std::size_t> no_upload(schedule.drop_before_upload.begin(),
                                        schedule.drop_before_upload.end());
  const std::set<std::size_t> no_share(schedule.drop_before_agg_share.begin(),
                                       schedule.drop_before_agg_share.end());
  // R2.
  QuantizeStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    if (no_upload.count(i)) continue;
    server.receive_upload(i, clients[i].masked_upload(params[i], num_samples[i], &stats),
                          num_samples[i]);
  }
  // R3.
  const std::vector<std::size_t> u1 = server.upload_survivors();
  for (std::size_t i : u1) {
    if (no_share.count(i)) continue;
    server.receive_aggregate_share(i, clients[i].aggregate_share(u1));
  }
  if (stats.clamped > 0) logger().warn("secure aggregation clamped {} coordinates", stats.clamped);
  SecureAggregate out;
  out.values = server.finish();
  out.survivors = u1;
  out.clamped = stats.clamped;
  return out;
}

FieldVector pairwise_masked_upload(std::span<const double> params, std::uint64_t num_samples,
                                   std::size_t index, const SAConfig& config, std::uint64_t round,
                                   QuantizeStats* stats) {
  config.validate();
  require(index < config.num_clients, ErrorCode::kUnknownParticipant, "client index out of range");
  FieldVector x = weighted_quantize(params, num_samples, config, stats);
  for (std::size_t j = 0; j < config.num_clients; ++j) {
    if (j == index) continue;
    const FieldVector m = pair_mask(config, round, std::min(index, j), std::max(index, j), x.size());
    if (j > index) {
      kField.add_inplace(x, m);
    } else {
      kField.sub_inplace(x, m);
    }
  }
  return x;
}

SecureAggregate pairwise_mask_round(const std::vector<std::vector<double>>& params,
                                    std::span<const std::uint64_t> num_samples,
                                    const SAConfig& config, std::uint64_t round,
                                    std::optional<std::vector<std::size_t>> present) {
  config.validate();
  check_inputs(params, num_samples, config);
  if (present) {
    std::set<std::size_t> unique(present->begin(), present->end());
    require(unique.size() == config.num_clients, ErrorCode::kDropoutUnsupported,
            "pairwise masking cannot recover from a missing client");
  }
  const std::size_t dim = params.empty() ? 0 : params[0].size();
  FieldVector sum(dim, 0);
  QuantizeStats stats;
  std::uint64_t total = 0;
  SecureAggregate out;
  for (std::size_t i = 0; i < config.num_clients; ++i) {
    kField.add_inplace(sum, pairwise_masked_upload(params[i], num_samples[i], i, config, round, &stats));
    total += num_samples[i];
    out.survivors.push_back(i);
  }
  out.values = finish_weighted(sum, total, config.scale_bits);
  out.clamped = stats.clamped;
  return out;
}

}  // namespace fedgraph
