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

#include "fedgraph/secure/field.hpp"

#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t result = 1 % p_;
  base %= p_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  require(a % p_ != 0, ErrorCode::kInvalidParams, "field inverse of zero");
  return pow(a, p_ - 2);
}

std::uint64_t PrimeField::from_signed(std::int64_t v) const {
  if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
  const std::uint64_t magnitude = (static_cast<std::uint64_t>(-(v + 1)) + 1) % p_;
  return neg(magnitude);
}

std::int64_t PrimeField::to_signed(std::uint64_t r) const {
  r %= p_;
  if (r <= p_ / 2) return static_cast<std::int64_t>(r);
  return -static_cast<std::int64_t>(p_ - r);
}

void PrimeField::add_inplace(std::span<std::uint64_t> acc, std::span<const std::uint64_t> v) const {
  require(acc.size() == v.size(), ErrorCode::kDimensionMismatch, "field vector lengths differ");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = add(acc[i], v[i]);
}

void PrimeField::sub_inplace(std::span<std::uint64_t> acc, std::span<const std::uint64_t> v) const {
  require(acc.size() == v.size(), ErrorCode::kDimensionMismatch, "field vector lengths differ");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = sub(acc[i], v[i]);
}

FieldVector quantize(std::span<const double> values, int scale_bits, std::int64_t bound,
                     const PrimeField& field, QuantizeStats* stats) {
  require(scale_bits >= 0 && scale_bits <= 52, ErrorCode::kInvalidParams,
          "scale_bits must lie in [0, 52]");
  require(bound > 0, ErrorCode::kInvalidParams, "clamp bound must be positive");
  const double scale = std::ldexp(1.0, scale_bits);
  const double limit = static_cast<double>(bound);
  FieldVector out(values.size());
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]), ErrorCode::kInvalidParams, "cannot quantize NaN or Inf");
    double q = std::round(values[i] * scale);
    if (q > limit || q < -limit) {
      q = q > 0 ? limit : -limit;
      ++clamped;
    }
    out[i] = field.from_signed(static_cast<std::int64_t>(q));
  }
  if (stats) stats->clamped += clamped;
  return out;
}

std::vector<double> dequantize(std::span<const std::uint64_t> values, int scale_bits,
                               const PrimeField& field) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::ldexp(static_cast<double>(field.to_signed(values[i])), -scale_bits);
  }
  return out;
}

}  // namespace fedgraph
