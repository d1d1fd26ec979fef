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

#include "fedgraph/secure/prg.hpp"

#include <sodium.h>

#include <cstdlib>

#include "fedgraph/common/rng.hpp"

namespace fedgraph {

Key256 derive_key(std::uint64_t seed, std::string_view tag, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t base = derive_seed(seed, tag, a, b);
  Key256 key{};
  for (std::size_t w = 0; w < 4; ++w) {
    const std::uint64_t word = derive_seed(base, "key", w);
    for (std::size_t i = 0; i < 8; ++i) key[w * 8 + i] = static_cast<std::uint8_t>(word >> (8 * i));
  }
  return key;
}

std::array<std::uint8_t, 64> chacha20_block(const Key256& key, std::uint32_t counter,
                                            const std::array<std::uint8_t, 12>& nonce) {
  static const bool ready = sodium_init() >= 0;
  if (!ready) std::abort();
  std::array<std::uint8_t, 64> out{};
  crypto_stream_chacha20_ietf_xor_ic(out.data(), out.data(), out.size(), nonce.data(), counter,
                                     key.data());
  return out;
}

std::uint64_t MaskPrg::next_u64() {
  if (used_ + 8 > block_.size()) {
    block_ = chacha20_block(key_, counter_++, {});
    used_ = 0;
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(block_[used_ + i]) << (8 * i);
  used_ += 8;
  return v;
}

std::uint64_t MaskPrg::next_residue(const PrimeField& field) {
  const std::uint64_t p = field.modulus();
  const std::uint64_t max = ~std::uint64_t{0};
  // Accept words below the largest multiple of p that is <= 2^64, i.e.
  // w <= max - ((2^64) mod p).
  const std::uint64_t excess = (max % p + 1) % p;
  const std::uint64_t last_accepted = max - excess;
  std::uint64_t w;
  do {
    w = next_u64();
  } while (w > last_accepted);
  return w % p;
}

FieldVector MaskPrg::residues(std::size_t count, const PrimeField& field) {
  FieldVector out(count);
  for (auto& v : out) v = next_residue(field);
  return out;
}

}  // namespace fedgraph
