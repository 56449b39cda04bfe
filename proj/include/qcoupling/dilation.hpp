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

#include <optional>
#include <string>
#include <vector>

#include "qcoupling/common.hpp"
#include "qcoupling/density.hpp"
#include "qcoupling/linalg.hpp"
#include "qcoupling/quantize.hpp"

namespace qcoupling {

/// Unitary U = [[A, B'], [B, D]] whose top-left d×d block is A.
struct BlockEncoding {
  Eigen::Index dim = 0;
  Matrix unitary;
  std::string label;

  Matrix a() const { return unitary.topLeftCorner(dim, dim); }
  Matrix b() const { return unitary.bottomLeftCorner(dim, dim); }
};

/// U = [[A, (I−AAᵀ)^{1/2}], [(I−AᵀA)^{1/2}, −Aᵀ]]; throws when ‖A‖₂ > 1 + tolerance.
BlockEncoding unitary_completion(const Matrix& a, double tolerance = 1e-10);

inline constexpr Eigen::Index kDilationDimGuard = 4096;

/// Registers ordered control ⊗ ancilla ⊗ system: index (k, a, x) = k·2d + a·d + x.
struct DilationCircuit {
  int kappa = 0;
  Eigen::Index dim = 0;
  std::vector<BlockEncoding> blocks;
  Matrix w;            // Σ_k |k⟩⟨k| ⊗ U_k
  Vector mu;           // uniform control state
  Matrix r_good;       // 2P − I, P = I ⊗ |0⟩⟨0| ⊗ I
  Matrix r_init;       // 2Π − I, Π = |μ⟩⟨μ| ⊗ |0⟩⟨0| ⊗ I
  Matrix grover;       // −W R_init Wᵀ R_good
  double b_identity_residual = 0.0;  // ‖Σ B_kᵀB_k − (κ−1)I‖_max

  Eigen::Index total_dim() const { return w.rows(); }
  /// |μ⟩ ⊗ |0⟩ ⊗ ξ.
  Vector embed(const Vector& xi) const;
  /// Normalized |0⟩-ancilla target Σ_k |k⟩|0⟩ A_kξ.
  Vector target(const Vector& xi) const;
};

DilationCircuit build_dilation(const KrausSet& kraus);

struct DecompositionReport {
  CheckResult check;
  double good_norm = 0.0;
  double bad_norm = 0.0;
  double phi0_norm = 0.0;
  double phi1_norm = 0.0;
};

/// Φ = W(μ⊗|0⟩⊗ξ) splits into amplitudes 1/√κ and √(1−1/κ) with unit branch states.
DecompositionReport state_decomposition_check(const DilationCircuit& circ, const Vector& xi);

struct AmplifiedState {
  Vector state;
  double fidelity = 0.0;  // squared overlap with the normalized target
};

/// Applies G^iterations to WΨ.
AmplifiedState amplify_and_extract(const DilationCircuit& circ, const Vector& xi, int iterations);

/// Iteration count with an exact rotation onto the good subspace, when κ admits one.
std::optional<int> exact_iterations(int kappa);

enum class DilationMode { kPostselect, kAmplified };

struct DilationOutput {
  Matrix rho;
  double acceptance = 0.0;      // postselect: probability of the |0⟩ ancilla outcome
  double min_fidelity = 1.0;    // amplified: over eigenvectors of ρ
};

/// Runs every eigenvector of ρ through the circuit, traces out control and ancilla, and mixes.
DilationOutput channel_via_dilation(const DilationCircuit& circ, const DensityMatrix& rho, DilationMode mode);

}  // namespace qcoupling
