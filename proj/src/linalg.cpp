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

#include "qcoupling/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcoupling {

Vector vec(const Matrix& m) {
  Vector out(m.size());
  const Eigen::Index rows = m.rows();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i + rows * j) = m(i, j);
  return out;
}

Matrix unvec(const Vector& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw std::invalid_argument("unvec: size is not a multiple of rows");
  const Eigen::Index cols = v.size() / rows;
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = v(i + rows * j);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix out = Matrix::Zero(n, n);
  out(i, j) = 1.0;
  return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("asymmetry: matrix is not square");
  return max_abs(m - m.transpose());
}

Vector symmetric_eigenvalues(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

double trace_norm_symmetric(const Matrix& m) { return symmetric_eigenvalues(m).cwiseAbs().sum(); }

Matrix psd_sqrt(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  const Vector roots = solver.eigenvalues().unaryExpr([](double v) { return std::sqrt(std::max(v, 0.0)); });
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix matrix_power(const Matrix& m, int exponent) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: matrix is not square");
  if (exponent < 0) throw std::invalid_argument("matrix_power: negative exponent");
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace qcoupling
