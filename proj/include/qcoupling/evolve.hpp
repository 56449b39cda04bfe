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
#include <utility>
#include <variant>
#include <vector>

#include "qcoupling/common.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/density.hpp"
#include "qcoupling/quantize.hpp"

namespace qcoupling {

using Channel = std::variant<Superoperator, KrausSet>;

/// (1/2) Σ σ_i(ρ − σ).
double trace_distance(const Matrix& rho, const Matrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// tr(Q⊥ ρ) = tr(ρ) − ⟨√π|ρ|√π⟩.
double qperp_overlap(const Matrix& rho, const Qsample& q);

/// Applies the channel once; the Kraus route is used for KrausSet inputs.
Matrix channel_step(const Channel& channel, const Matrix& rho);

/// Requires a CP-verified superoperator or a Kraus set satisfying the Kraus condition.
void require_physical(const Channel& channel);

struct ConvergenceTrace {
  std::vector<int> m;
  std::vector<double> trace_distance;
  std::vector<double> qperp_overlap;
  // Populated when a coalescence report is attached (NaN beyond its range).
  bool has_bounds = false;
  double pi_star = 0.0;
  std::vector<double> classical_tail_max;
  std::vector<double> qperp_bound;        // tail / π_*
  std::vector<double> theorem_envelope;   // √(tail / π_*), trace-distance scale
  bool distance_non_increasing = true;    // within 1e-10
  bool overlap_non_increasing = true;     // recorded only
};

ConvergenceTrace evolve_trace(const Channel& channel, const DensityMatrix& rho0, const Qsample& q, int m_max,
                              const CoalescenceReport* report = nullptr);

/// C*(|−_{xy}⟩⟨−_{xy}|) = Σ c_{(x',y'),(x,y)} |−_{x'y'}⟩⟨−_{x'y'}| for x ≠ y.
CheckResult laplacian_preservation_check(const CouplingMatrix& c, Eigen::Index x, Eigen::Index y);

/// Elementary Laplacian |−_{xy}⟩⟨−_{xy}| with |−_{xy}⟩ = (|x⟩ − |y⟩)/√2.
Matrix edge_laplacian(Eigen::Index n, Eigen::Index x, Eigen::Index y);

/// D^{1/2} Q⊥ D^{1/2} = Σ_{x,y} π_x π_y |−_{xy}⟩⟨−_{xy}|.
CheckResult rescaled_qperp_decomposition_check(const Distribution& pi);

/// Pr_{x,y}{τ > m} = tr([C*]^m(|−_{xy}⟩⟨−_{xy}|)) for every x ≠ y.
CheckResult coalescence_trace_identity_check(const CouplingMatrix& c, int m, Eigen::Index guard = 32);

/// tr(Q⊥ T^m(ρ0)) <= Pr_max{τ > m} / π_* for every ρ0 and m in the grid.
CheckResult qperp_bound_check(const Channel& t, const Distribution& pi, const CoalescenceReport& report,
                              const std::vector<DensityMatrix>& rho0_set, const std::vector<int>& m_grid);

/// Number of steps the main convergence theorem prescribes: ⌈(1/2) log2(1/(ε π_*))⌉ · t_couple.
int theorem_steps(double eps, double pi_star, int t_couple);

/// (1/2)‖T^m(ρ) − Q‖_tr <= √ε at m = theorem_steps(ε, π_*, t_couple); one result per ε.
std::vector<CheckResult> main_theorem_check(const Channel& t, const Distribution& pi, const CoalescenceReport& report,
                                            const std::vector<DensityMatrix>& rho0_set,
                                            const std::vector<double>& eps_list);

/// If tr(Q⊥ρ) < ε then ‖ρ − QρQ/tr(Qρ)‖_tr <= 2√ε. A violated precondition is reported, not thrown.
CheckResult gentle_measurement_step_check(const DensityMatrix& rho, const Qsample& q, double eps);

/// tr(T^m(QρQ) A) = ⟨√π|ρ|√π⟩⟨√π|A|√π⟩ for the given (ρ, A) pairs and m <= m_max.
CheckResult reducing_projector_check(const Channel& t, const Qsample& q,
                                     const std::vector<std::pair<Matrix, Matrix>>& pairs, int m_max);

/// ‖(T*)^m(Q) − I‖_max at the first m whose exact tail drops below `tail_threshold`.
CheckResult expanding_projector_check(const Superoperator& t_star, const Qsample& q, const CoalescenceReport& report,
                                      double tail_threshold = 1e-7, double tolerance = 1e-6);

/// ‖T^m(Q) − Q‖_tr <= 1e-8 for m <= m_max.
CheckResult fixed_point_stability_check(const Channel& t, const Qsample& q, int m_max = 100);

}  // namespace qcoupling
