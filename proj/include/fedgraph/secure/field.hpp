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
#include <vector>

namespace fedgraph {

using FieldVector = std::vector<std::uint64_t>;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Arithmetic modulo a prime below 2^63. Products go through 128 bits.
class PrimeField {
 public:
  explicit constexpr PrimeField(std::uint64_t modulus = kMersenne61) : p_(modulus) {}

  constexpr std::uint64_t modulus() const { return p_; }
  constexpr std::uint64_t reduce(std::uint64_t a) const { return a % p_; }
  constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  constexpr std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  constexpr std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  // Throws InvalidParams on zero.
  std::uint64_t inv(std::uint64_t a) const;

  // Signed integer to residue (negatives become p - |v|) and back, with the
  // lift using the centered range (-p/2, p/2].
  std::uint64_t from_signed(std::int64_t v) const;
  std::int64_t to_signed(std::uint64_t r) const;

  void add_inplace(std::span<std::uint64_t> acc, std::span<const std::uint64_t> v) const;
  void sub_inplace(std::span<std::uint64_t> acc, std::span<const std::uint64_t> v) const;

 private:
  std::uint64_t p_;
};

struct QuantizeStats {
  std::size_t clamped = 0;
};

// q = clamp(round(w * 2^scale_bits), -bound, bound), mapped into the field.
FieldVector quantize(std::span<const double> values, int scale_bits, std::int64_t bound,
                     const PrimeField& field = PrimeField(), QuantizeStats* stats = nullptr);
std::vector<double> dequantize(std::span<const std::uint64_t> values, int scale_bits,
                               const PrimeField& field = PrimeField());

}  // namespace fedgraph
