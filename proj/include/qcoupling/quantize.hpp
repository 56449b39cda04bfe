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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcoupling/common.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/density.hpp"
#include "qcoupling/linalg.hpp"

namespace qcoupling {

enum class MapKind { kCStar, kTStar, kT, kGeneric };
enum class CpStatus { kUnchecked, kVerified, kFailed };

std::string to_string(MapKind kind);
std::string to_string(CpStatus status);

/// Linear map on N×N matrices as an N²×N² matrix acting on column-stacked vectors.
struct Superoperator {
  Eigen::Index dim = 0;
  Matrix matrix;
  MapKind kind = MapKind::kGeneric;
  std::string provenance;
  CpStatus cp_status = CpStatus::kUnchecked;

  Matrix apply(const Matrix& m) const;
  /// Hilbert-Schmidt adjoint (matrix transpose in the real case).
  Superoperator adjoint(MapKind adjoint_kind) const;
};

struct KrausSet {
  Eigen::Index dim = 0;
  std::vector<Matrix> ops;
  std::vector<std::string> labels;
};

enum class ChoiOrder {
  kMapFirst,    // J = Σ S(|x⟩⟨y|) ⊗ |x⟩⟨y|
  kBasisFirst,  // J = Σ |x⟩⟨y| ⊗ S(|x⟩⟨y|)
};

std::string to_string(ChoiOrder order);

struct ChoiMatrix {
  Eigen::Index dim = 0;
  Matrix matrix;
  ChoiOrder order = ChoiOrder::kMapFirst;
};

struct ChoiSpectrum {
  Vector eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;  // 1e-9 · ‖J‖_max by default
  bool is_cp = false;
};

/// C*(M) = Σ c_{(x',y'),(x,y)} |x'⟩⟨x| M |y⟩⟨y'|, assembled term by term via vec(AMB) = (Bᵀ⊗A) vec(M).
/// With `require_valid` the coupling conditions are checked first.
Superoperator c_star_superop(const CouplingMatrix& c, bool require_valid = true);

struct QuantizedCoupling {
  Superoperator t;
  Superoperator t_star;
};

/// T*(M) = D^{-1/2} C*(D^{1/2} M D^{1/2}) D^{-1/2}; T is its adjoint.
QuantizedCoupling quantized_coupling(const CouplingMatrix& c, const Distribution& pi, bool require_valid = true);

/// T_r = √Pr(r) Σ_x D^{1/2} |x⟩⟨f(x,r)| D^{-1/2}.
KrausSet kraus_from_grand(const RandomMappingRep& rmr, const Distribution& pi);

/// Superoperator of ρ ↦ Σ_k A_k ρ A_kᵀ.
Superoperator superop_from_kraus(const KrausSet& kraus, MapKind kind = MapKind::kT);

ChoiMatrix choi_matrix(const Superoperator& s, ChoiOrder order);
/// Exchanges the two tensor factors of a Choi matrix (changes the order flag).
ChoiMatrix tensor_swap(const ChoiMatrix& j);

ChoiSpectrum min_choi_eigenvalue(const ChoiMatrix& j, double relative_tolerance = 1e-9);

/// Sets cp_status from the Choi spectrum and returns it.
ChoiSpectrum verify_cp(Superoperator& s);

struct ChannelOutput {
  Matrix matrix;
  bool is_state = false;  // true only for CP-verified maps or valid Kraus sets
};

ChannelOutput apply_channel(const Superoperator& s, const Matrix& rho);
ChannelOutput apply_channel(const KrausSet& kraus, const Matrix& rho);
DensityMatrix apply_channel_state(const std::variant<Superoperator, KrausSet>& map, const DensityMatrix& rho);

/// ‖Σ A_kᵀ A_k − I‖_max.
double kraus_condition_residual(const KrausSet& kraus);

/// Maximum nonzeros in any row or column over all Kraus operators.
Eigen::Index kraus_max_sparsity(const KrausSet& kraus);

CheckResult check_trace_preservation(const Superoperator& t_star);
CheckResult check_fixed_point(const Superoperator& t, const Distribution& pi);
CheckResult check_cstar_fixes_stationary(const Superoperator& c_star, const Distribution& pi);
CheckResult check_kraus_condition(const KrausSet& kraus);
CheckResult check_kraus_matches_superop(const KrausSet& kraus, const Superoperator& t);
CheckResult check_cstar_equals_coupling(const Superoperator& c_star, const CouplingMatrix& c);

/// J(C*) of an independent coupling splits into Σ|p_x⟩⟨p_y|⊗|x⟩⟨y| plus diagonally dominant blocks.
CheckResult independent_choi_structure_check(const TransitionMatrix& p);

}  // namespace qcoupling
