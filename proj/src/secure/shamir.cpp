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

#include "fedgraph/secure/shamir.hpp"

#include <set>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::vector<ShareVector> shamir_share_with(std::span<const std::uint64_t> secret, std::size_t n,
                                           const std::vector<FieldVector>& coefficients,
                                           const PrimeField& field) {
  const std::size_t t = coefficients.size() + 1;
  require(t <= n && n < field.modulus(), ErrorCode::kInvalidParams,
          "shamir: need 1 <= t <= n < p (t=" + std::to_string(t) + ", n=" + std::to_string(n) + ")");
  for (const auto& c : coefficients) {
    require(c.size() == secret.size(), ErrorCode::kDimensionMismatch,
            "shamir: coefficient length differs from the secret");
  }
  std::vector<ShareVector> shares(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t x = j + 1;
    shares[j].x = x;
    shares[j].values.resize(secret.size());
    for (std::size_t c = 0; c < secret.size(); ++c) {
      // Horner from the highest coefficient down to the constant term.
      std::uint64_t acc = 0;
      for (std::size_t k = coefficients.size(); k-- > 0;) {
        acc = field.add(field.mul(acc, x), coefficients[k][c]);
      }
      shares[j].values[c] = field.add(field.mul(acc, x), field.reduce(secret[c]));
    }
  }
  return shares;
}

std::vector<ShareVector> shamir_share(std::span<const std::uint64_t> secret, std::size_t n,
                                      std::size_t t, const PrimeField& field,
                                      const std::function<std::uint64_t()>& random_residue) {
  require(t >= 1 && t <= n, ErrorCode::kInvalidParams, "shamir: need 1 <= t <= n");
  std::vector<FieldVector> coefficients(t - 1, FieldVector(secret.size()));
  for (auto& row : coefficients)
    for (auto& v : row) v = field.reduce(random_residue());
  return shamir_share_with(secret, n, coefficients, field);
}

FieldVector shamir_reconstruct(std::span<const ShareVector> shares, std::size_t t,
                               const PrimeField& field) {
  require(t >= 1, ErrorCode::kInvalidParams, "shamir: threshold must be >= 1");
  require(shares.size() >= t, ErrorCode::kInsufficientShares,
          "have " + std::to_string(shares.size()) + " shares, need " + std::to_string(t));
  std::set<std::uint64_t> points;
  for (std::size_t j = 0; j < t; ++j) {
    const std::uint64_t x = field.reduce(shares[j].x);
    require(x != 0 && points.insert(x).second, ErrorCode::kDuplicateEvaluationPoint,
            "evaluation point " + std::to_string(shares[j].x) + " repeated or zero");
    require(shares[j].values.size() == shares[0].values.size(), ErrorCode::kDimensionMismatch,
            "share lengths differ");
  }
  // Lagrange basis at 0: l_j = prod_{m != j} x_m / (x_m - x_j).
  std::vector<std::uint64_t> basis(t);
  for (std::size_t j = 0; j < t; ++j) {
    std::uint64_t num = 1, den = 1;
    for (std::size_t m = 0; m < t; ++m) {
      if (m == j) continue;
      num = field.mul(num, field.reduce(shares[m].x));
      den = field.mul(den, field.sub(field.reduce(shares[m].x), field.reduce(shares[j].x)));
    }
    basis[j] = field.mul(num, field.inv(den));
  }
  FieldVector secret(shares[0].values.size(), 0);
  for (std::size_t j = 0; j < t; ++j) {
    for (std::size_t c = 0; c < secret.size(); ++c) {
      secret[c] = field.add(secret[c], field.mul(basis[j], shares[j].values[c]));
    }
  }
  return secret;
}

}  // namespace fedgraph
