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

#include <cstdint>

#include "qcoupling/chain.hpp"
#include "qcoupling/linalg.hpp"

namespace qcoupling {

/// Real symmetric PSD matrix with unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho, double tolerance = tol::kComputed);

  static DensityMatrix pure(const Vector& amplitudes);
  static DensityMatrix basis_state(Eigen::Index n, Eigen::Index i);
  static DensityMatrix maximally_mixed(Eigen::Index n);
  /// Seeded random state: symmetric Gaussian matrix, squared and normalized.
  static DensityMatrix random(Eigen::Index n, std::uint64_t seed, std::uint64_t stream = 0);

  Eigen::Index dim() const { return rho_.rows(); }
  const Matrix& matrix() const { return rho_; }

 private:
  Matrix rho_;
};

/// Amplitude vector a_x = √π_x of a distribution, with Q = a aᵀ and Q⊥ = I − Q.
class Qsample {
 public:
  explicit Qsample(const Distribution& pi);

  const Vector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  Matrix projector() const { return amplitudes_ * amplitudes_.transpose(); }
  Matrix complement() const { return Matrix::Identity(dim(), dim()) - projector(); }
  DensityMatrix state() const { return DensityMatrix::pure(amplitudes_); }

 private:
  Vector amplitudes_;
};

Qsample qsample(const Distribution& pi);

}  // namespace qcoupling
