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

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>

namespace qcoupling {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<double>;

/// Column-stacking vectorization: vec(M)[i + N*j] = M(i, j).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows);

/// Left-factor-major Kronecker product: (A ⊗ B)[(i*rB + k), (j*cB + l)] = A(i,j) B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Matrix unit |i⟩⟨j| of size n.
Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
double asymmetry(const Matrix& m);

/// Eigenvalues (ascending) of the symmetric part of `m`.
Vector symmetric_eigenvalues(const Matrix& m);

/// Sum of singular values of a symmetric matrix (sum of |eigenvalues|).
double trace_norm_symmetric(const Matrix& m);

/// Square root of a symmetric PSD matrix; eigenvalues below zero (round-off) are clamped.
Matrix psd_sqrt(const Matrix& m);

/// Induced 2-norm (largest singular value).
double spectral_norm(const Matrix& m);

Matrix matrix_power(const Matrix& m, int exponent);

}  // namespace qcoupling
