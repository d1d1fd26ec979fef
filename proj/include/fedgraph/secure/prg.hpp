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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "fedgraph/secure/field.hpp"

namespace fedgraph {

using Key256 = std::array<std::uint8_t, 32>;

// Expands a parent seed and a tag into a 256-bit key.
Key256 derive_key(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0,
                  std::uint64_t b = 0);

// ChaCha20 block function (IETF variant: 32-bit counter, 96-bit nonce),
// computed by libsodium.
std::array<std::uint8_t, 64> chacha20_block(const Key256& key, std::uint32_t counter,
                                            const std::array<std::uint8_t, 12>& nonce);

// Counter-mode ChaCha20 stream with a zero nonce, read as little-endian
// 64-bit words. Field residues come from rejection sampling: a word is
// accepted when it lies below the largest multiple of p that fits in 64
// bits, and then reduced mod p.
class MaskPrg {
 public:
  explicit MaskPrg(const Key256& key) : key_(key) {}

  std::uint64_t next_u64();
  std::uint64_t next_residue(const PrimeField& field);
  FieldVector residues(std::size_t count, const PrimeField& field);

 private:
  Key256 key_;
  std::uint32_t counter_ = 0;
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = 64;
};

}  // namespace fedgraph
