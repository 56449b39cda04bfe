// Copyright 2026 The qcoupling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

#include "qcoupling/chain.hpp"
#include "qcoupling/rng.hpp"

namespace qcoupling::testing {

/// Column-stochastic chain with strictly positive entries, hence ergodic.
inline TransitionMatrix random_positive_chain(Eigen::Index n, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  Matrix p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) p(i, j) = 0.05 + rng.uniform();
    p.col(j) /= p.col(j).sum();
  }
  return TransitionMatrix(p);
}

/// Pr{not all n coordinates refreshed within m uniform picks}, by inclusion-exclusion.
inline double coupon_tail(int n, int m) {
  double total = 0.0;
  double binom = 1.0;
  for (int k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    const double base = 1.0 - static_cast<double>(k) / n;
    const double term = (m == 0) ? 1.0 : std::pow(base, m);
    total += ((k % 2) ? 1.0 : -1.0) * binom * term;
  }
  return total;
}

}  // namespace qcoupling::testing
