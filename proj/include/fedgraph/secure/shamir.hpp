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
#include <functional>
#include <span>
#include <vector>

#include "fedgraph/secure/field.hpp"

namespace fedgraph {

// One participant's share of a secret vector: the evaluations of the
// per-coordinate sharing polynomials at x.
struct ShareVector {
  std::uint64_t x = 0;
  FieldVector values;

  friend bool operator==(const ShareVector&, const ShareVector&) = default;
};

// Per coordinate, a degree-(t-1) polynomial with the secret as constant
// term and coefficients drawn from random_residue(); share j is its value
// at x = j + 1. Throws InvalidParams unless 1 <= t <= n < p.
std::vector<ShareVector> shamir_share(std::span<const std::uint64_t> secret, std::size_t n,
                                      std::size_t t, const PrimeField& field,
                                      const std::function<std::uint64_t()>& random_residue);

// Same, with explicit coefficients: coefficients[k][c] multiplies x^(k+1)
// for coordinate c.
std::vector<ShareVector> shamir_share_with(std::span<const std::uint64_t> secret, std::size_t n,
                                           const std::vector<FieldVector>& coefficients,
                                           const PrimeField& field);

// Lagrange interpolation at 0 through the first t shares. Throws
// InsufficientShares, DuplicateEvaluationPoint, DimensionMismatch.
FieldVector shamir_reconstruct(std::span<const ShareVector> shares, std::size_t t,
                               const PrimeField& field);

}  // namespace fedgraph
