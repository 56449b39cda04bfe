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

#include "qcoupling/density.hpp"

#include <cmath>

#include "qcoupling/rng.hpp"

namespace qcoupling {

DensityMatrix::DensityMatrix(Matrix rho, double tolerance) : rho_(std::move(rho)) {
  if (rho_.rows() < 1 || rho_.rows() != rho_.cols()) throw Error(ErrorKind::kInvalidInput, "density matrix must be square");
  if (asymmetry(rho_) > tol::kInput) throw Error(ErrorKind::kInvalidInput, "density matrix is not symmetric");
  if (std::abs(rho_.trace() - 1.0) > tolerance) throw Error(ErrorKind::kInvalidInput, "density matrix trace is not 1");
  if (symmetric_eigenvalues(rho_)(0) < -tolerance)
    throw Error(ErrorKind::kInvalidInput, "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const Vector& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw Error(ErrorKind::kInvalidInput, "pure state needs a non-zero vector");
  const Vector unit = amplitudes / norm;
  return DensityMatrix(unit * unit.transpose());
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index n, Eigen::Index i) {
  Matrix rho = Matrix::Zero(n, n);
  rho(i, i) = 1.0;
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::random(Eigen::Index n, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) g(i, j) = g(j, i) = rng.normal();
  Matrix rho = g * g;
  rho = 0.5 * (rho + rho.transpose());
  rho /= rho.trace();
  return DensityMatrix(std::move(rho));
}

Qsample::Qsample(const Distribution& pi) : amplitudes_(pi.weights().cwiseSqrt()) {
  amplitudes_ /= amplitudes_.norm();
}

Qsample qsample(const Distribution& pi) { return Qsample(pi); }

}  // namespace qcoupling
