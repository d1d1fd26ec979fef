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

// Shared test-only helpers: random inputs and the finite-difference oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fedgraph/common/rng.hpp"
#include "fedgraph/graph/graph.hpp"
#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph::testing {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                                 double scale = 1.0) {
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = (2.0 * rng.uniform() - 1.0) * scale;
  return m;
}

// Erdos-Renyi style graph; features uniform in [-1, 1].
inline Graph random_graph(std::size_t n, double edge_prob, std::size_t feature_dim, Rng& rng) {
  GraphInput in;
  in.num_nodes = n;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.uniform() < edge_prob) in.edges.emplace_back(u, v);
  in.node_features = random_matrix(n, feature_dim, rng);
  return build_graph(std::move(in));
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic) + std::abs(numeric));
}

// Largest relative error between `analytic` and central differences of f
// around x, perturbing each coordinate by +-step.
inline double finite_difference_error(std::span<double> x, std::span<const double> analytic,
                                      const std::function<double()>& f, double step = 1e-5) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f();
    x[i] = saved - step;
    const double down = f();
    x[i] = saved;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * step)));
  }
  return worst;
}

inline double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.values()[i] * b.values()[i];
  return acc;
}

}  // namespace fedgraph::testing
