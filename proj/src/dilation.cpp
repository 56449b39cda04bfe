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

#include "qcoupling/dilation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qcoupling {

namespace {

void require_unit(const Vector& xi, Eigen::Index dim) {
  if (xi.size() != dim) throw Error(ErrorKind::kInvalidInput, "input vector has the wrong dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-10) throw Error(ErrorKind::kInvalidInput, "input vector must have unit norm");
}

Matrix system_block(const Vector& v, int kappa, Eigen::Index d, int ancilla) {
  // Rows k, columns x: amplitudes of |k⟩|ancilla⟩|x⟩.
  Matrix out(kappa, d);
  for (int k = 0; k < kappa; ++k) out.row(k) = v.segment(k * 2 * d + ancilla * d, d).transpose();
  return out;
}

}  // namespace

BlockEncoding unitary_completion(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kInvalidInput, "block encoding needs a square matrix");
  const double norm = spectral_norm(a);
  if (norm > 1.0 + tolerance) {
    std::ostringstream os;
    os << "matrix is not a contraction: spectral norm " << norm;
    throw Error(ErrorKind::kInvalidInput, os.str());
  }
  const Eigen::Index d = a.rows();
  const Matrix id = Matrix::Identity(d, d);
  BlockEncoding out;
  out.dim = d;
  out.unitary.resize(2 * d, 2 * d);
  out.unitary << a, psd_sqrt(id - a * a.transpose()), psd_sqrt(id - a.transpose() * a), -a.transpose();
  return out;
}

Vector DilationCircuit::embed(const Vector& xi) const {
  require_unit(xi, dim);
  Vector psi = Vector::Zero(total_dim());
  for (int k = 0; k < kappa; ++k) psi.segment(k * 2 * dim, dim) = mu(k) * xi;
  return psi;
}

Vector DilationCircuit::target(const Vector& xi) const {
  require_unit(xi, dim);
  Vector t = Vector::Zero(total_dim());
  for (int k = 0; k < kappa; ++k) t.segment(k * 2 * dim, dim) = blocks[static_cast<std::size_t>(k)].a() * xi;
  return t / t.norm();
}

DilationCircuit build_dilation(const KrausSet& kraus) {
  if (kraus.ops.empty()) throw Error(ErrorKind::kInvalidInput, "Kraus set is empty");
  const double residual = kraus_condition_residual(kraus);
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "Kraus condition violated by " << residual;
    throw Error(ErrorKind::kInvalidInput, os.str());
  }
  DilationCircuit c;
  c.kappa = static_cast<int>(kraus.ops.size());
  c.dim = kraus.dim;
  const Eigen::Index total = c.kappa * 2 * c.dim;
  if (total > kDilationDimGuard) {
    std::ostringstream os;
    os << "dilation dimension " << total << " exceeds " << kDilationDimGuard;
    throw Error(ErrorKind::kGuardExceeded, os.str());
  }
  const Eigen::Index d = c.dim;
  c.w = Matrix::Zero(total, total);
  Matrix b_sum = Matrix::Zero(d, d);
  for (int k = 0; k < c.kappa; ++k) {
    BlockEncoding be = unitary_completion(kraus.ops[static_cast<std::size_t>(k)]);
    if (k < static_cast<int>(kraus.labels.size())) be.label = kraus.labels[static_cast<std::size_t>(k)];
    c.w.block(k * 2 * d, k * 2 * d, 2 * d, 2 * d) = be.unitary;
    b_sum += be.b().transpose() * be.b();
    c.blocks.push_back(std::move(be));
  }
  c.b_identity_residual = max_abs_diff(b_sum, (c.kappa - 1.0) * Matrix::Identity(d, d));
  if (c.b_identity_residual > 1e-9) {
    std::ostringstream os;
    os << "completion blocks violate sum B^T B = (kappa - 1) I by " << c.b_identity_residual;
    throw Error(ErrorKind::kInvalidInput, os.str());
  }
  c.mu = Vector::Constant(c.kappa, 1.0 / std::sqrt(static_cast<double>(c.kappa)));

  Matrix good = Matrix::Zero(total, total);
  Matrix init = Matrix::Zero(total, total);
  for (int k = 0; k < c.kappa; ++k) {
    good.block(k * 2 * d, k * 2 * d, d, d) = Matrix::Identity(d, d);
    for (int l = 0; l < c.kappa; ++l) init.block(k * 2 * d, l * 2 * d, d, d) = c.mu(k) * c.mu(l) * Matrix::Identity(d, d);
  }
  const Matrix id = Matrix::Identity(total, total);
  c.r_good = 2.0 * good - id;
  c.r_init = 2.0 * init - id;
  c.grover = -c.w * c.r_init * c.w.transpose() * c.r_good;
  return c;
}

DecompositionReport state_decomposition_check(const DilationCircuit& circ, const Vector& xi) {
  const Vector phi = circ.w * circ.embed(xi);
  const Matrix good = system_block(phi, circ.kappa, circ.dim, 0);
  const Matrix bad = system_block(phi, circ.kappa, circ.dim, 1);
  DecompositionReport r;
  r.good_norm = good.norm();
  r.bad_norm = bad.norm();
  const double kappa = circ.kappa;
  const double want_good = 1.0 / std::sqrt(kappa);
  const double want_bad = std::sqrt(1.0 - 1.0 / kappa);
  r.phi0_norm = r.good_norm / want_good;
  r.phi1_norm = want_bad > 0.0 ? r.bad_norm / want_bad : 1.0;

  Matrix expected(circ.kappa, circ.dim);
  for (int k = 0; k < circ.kappa; ++k)
    expected.row(k) = (circ.blocks[static_cast<std::size_t>(k)].a() * xi).transpose() / std::sqrt(kappa);
  const double branch_diff = max_abs_diff(good, expected);

  double worst = std::max({std::abs(r.good_norm - want_good), std::abs(r.bad_norm - want_bad), branch_diff,
                           std::abs(r.phi0_norm - 1.0)});
  if (want_bad > 0.0) worst = std::max(worst, std::abs(r.phi1_norm - 1.0));
  r.check.name = "dilation_state_decomposition";
  r.check.lhs = worst;
  r.check.rhs = 0.0;
  r.check.tolerance = 1e-10;
  r.check.pass = worst <= 1e-10;
  r.check.provenance = "W(mu|0>xi) = (1/sqrt(kappa))|phi0> + sqrt(1 - 1/kappa)|phi1>";
  std::ostringstream os;
  os << "branch norms " << r.good_norm << " and " << r.bad_norm;
  r.check.notes.push_back(os.str());
  return r;
}

AmplifiedState amplify_and_extract(const DilationCircuit& circ, const Vector& xi, int iterations) {
  if (iterations < 0) throw Error(ErrorKind::kInvalidInput, "iterations must be non-negative");
  Vector s = circ.w * circ.embed(xi);
  for (int i = 0; i < iterations; ++i) s = circ.grover * s;
  const double overlap = circ.target(xi).dot(s);
  return {s, overlap * overlap};
}

std::optional<int> exact_iterations(int kappa) {
  switch (kappa) {
    case 1: return 0;
    case 4: return 1;
    default: return std::nullopt;
  }
}

DilationOutput channel_via_dilation(const DilationCircuit& circ, const DensityMatrix& rho, DilationMode mode) {
  if (rho.dim() != circ.dim) throw Error(ErrorKind::kInvalidInput, "state dimension does not match the circuit");
  std::optional<int> iterations;
  if (mode == DilationMode::kAmplified) {
    iterations = exact_iterations(circ.kappa);
    if (!iterations) {
      std::ostringstream os;
      os << "no exact amplification schedule for kappa = " << circ.kappa << "; use postselect mode";
      throw Error(ErrorKind::kInvalidInput, os.str());
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.matrix() + rho.matrix().transpose()));
  const Eigen::Index d = circ.dim;
  DilationOutput out;
  out.rho = Matrix::Zero(d, d);
  double accepted = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double weight = es.eigenvalues()(i);
    if (weight <= 0.0) continue;
    const Vector xi = es.eigenvectors().col(i).normalized();
    Vector s;
    if (mode == DilationMode::kAmplified) {
      const AmplifiedState a = amplify_and_extract(circ, xi, *iterations);
      out.min_fidelity = std::min(out.min_fidelity, a.fidelity);
      s = a.state;
    } else {
      s = circ.w * circ.embed(xi);
    }
    const Matrix good = system_block(s, circ.kappa, d, 0);
    const double p = good.squaredNorm();
    accepted += weight * p;
    // Tracing out the control leaves Σ_k a_k a_kᵀ over the rows of the good block.
    Matrix branch = good.transpose() * good;
    if (mode == DilationMode::kPostselect) branch /= p;
    out.rho += weight * branch;
  }
  out.acceptance = accepted;
  return out;
}

}  // namespace qcoupling
