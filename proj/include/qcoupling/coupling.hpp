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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcoupling/chain.hpp"
#include "qcoupling/common.hpp"
#include "qcoupling/linalg.hpp"

namespace qcoupling {

/// Pair index convention on Ω×Ω, used by every module: idx(x, y) = x*N + y.
inline Eigen::Index pair_index(Eigen::Index x, Eigen::Index y, Eigen::Index n) { return x * n + y; }

/// Transition matrix C of a chain on Ω×Ω, column-stochastic over pair indices.
class CouplingMatrix {
 public:
  CouplingMatrix(TransitionMatrix base, SparseMatrix entries);

  const TransitionMatrix& base() const { return base_; }
  const SparseMatrix& entries() const { return entries_; }
  Matrix dense() const { return Matrix(entries_); }
  Eigen::Index states() const { return base_.size(); }

 private:
  TransitionMatrix base_;
  SparseMatrix entries_;
};

struct RandomOutcome {
  std::string label;
  double prob = 0.0;
};

/// Random mapping representation (f, R): Pr(f(x, R) = x') = p_{x', x}.
///
/// The base chain is optional so that Monte Carlo work on large state spaces
/// never materializes a dense N×N matrix; chain() derives it when absent.
class RandomMappingRep {
 public:
  /// `table` is row-major N×|R|: successor(x, r) = table[x*|R| + r].
  RandomMappingRep(std::vector<std::string> labels, std::vector<RandomOutcome> randomness,
                   std::vector<std::int32_t> table, std::optional<TransitionMatrix> base = std::nullopt);

  bool has_base() const { return base_.has_value(); }
  /// The stored base chain, or the chain implied by the mapping.
  TransitionMatrix chain() const;
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<RandomOutcome>& randomness() const { return randomness_; }
  Eigen::Index states() const { return static_cast<Eigen::Index>(labels_.size()); }
  std::size_t outcomes() const { return randomness_.size(); }
  Eigen::Index successor(Eigen::Index x, std::size_t r) const {
    return table_[static_cast<std::size_t>(x) * randomness_.size() + r];
  }
  const std::vector<std::int32_t>& table() const { return table_; }

 private:
  std::vector<std::string> labels_;
  std::vector<RandomOutcome> randomness_;
  std::vector<std::int32_t> table_;
  std::optional<TransitionMatrix> base_;
};

/// P = Σ_r Σ_x Pr(r) |f(x,r)⟩⟨x|.
Matrix chain_from_mapping(Eigen::Index n, const std::vector<RandomOutcome>& randomness,
                          const std::vector<std::int32_t>& table);

/// Reports probability-normalization violations and, when a base chain is
/// stored, marginal violations against it; empty means valid.
std::vector<std::string> validate_rmr(const RandomMappingRep& rmr, double tolerance = tol::kInput);

struct CouplingValidation {
  bool stochastic = true;
  bool marginals = true;    // condition 1
  bool coalescence = true;  // condition 2
  bool symmetry = true;     // condition 3
  bool valid = true;
  double worst_stochastic = 0.0;
  double worst_marginal = 0.0;
  double worst_coalescence = 0.0;
  double worst_symmetry = 0.0;
  std::vector<std::string> violations;
};

CouplingValidation validate_coupling(const CouplingMatrix& c, double tolerance = tol::kInput);

CouplingMatrix independent_coupling(const TransitionMatrix& p);
CouplingMatrix grand_coupling_matrix(const RandomMappingRep& rmr);

enum class TailMode { kExact, kMonteCarlo };

struct CoalescenceReport {
  TailMode mode = TailMode::kExact;
  std::vector<int> m;            // evaluation points (0..m_max for exact mode)
  std::vector<double> tail_max;  // max over start pairs of Pr{τ > m}
  std::vector<double> ci_half;   // MC only: half-width at the maximizing pair
  std::vector<double> ci_hi;     // MC only: max over pairs of (estimate + half-width)
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  std::vector<std::vector<double>> pair_tails;  // [m-index][pair-index]
  std::optional<int> t_couple;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  // Exact mode: E[τ] for the worst pair, summed over the computed range.
  double expected_tau_max = 0.0;
  int expectation_truncated_at = 0;
  bool expectation_converged = false;

  /// Tail at a given m; throws when m was not evaluated.
  double tail_at(int m_value) const;
};

inline constexpr Eigen::Index kExactPairGuard = 64;

/// Exact Pr_{x,y}{τ > m} = Σ_{x'≠y'} [C^m]_{(x',y'),(x,y)} for every start pair and m ≤ m_max.
CoalescenceReport coalescence_tail_exact(const CouplingMatrix& c, int m_max, Eigen::Index guard = kExactPairGuard);

struct MonteCarloOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Simulates the grand coupling driven by `rmr` from each start pair.
CoalescenceReport coalescence_tail_mc(const RandomMappingRep& rmr,
                                      const std::vector<std::pair<Eigen::Index, Eigen::Index>>& start_pairs,
                                      const std::vector<int>& m_grid, const MonteCarloOptions& options);

/// Normal-approximation 95% half-width with a 3/samples floor.
double mc_half_width(double estimate, std::uint64_t samples);

/// t_couple = min{m : Pr_max{τ > m} <= 1/4}; MC mode requires the CI upper bound to cross.
int coupling_time(const CoalescenceReport& report);

/// Pr_max{τ > l*m} <= (Pr_max{τ > m})^l.
CheckResult check_tail_submultiplicativity(const CouplingMatrix& c, int m, int l,
                                           Eigen::Index guard = kExactPairGuard);

/// The diagonal block of C^m equals P^m and no mass leaves the diagonal.
CheckResult check_diagonal_block(const CouplingMatrix& c, int m, Eigen::Index guard = kExactPairGuard);

/// d(m) <= Pr_max{τ > m} for m = 0..m_max.
CheckResult check_coalescence_bounds_mixing(const CouplingMatrix& c, int m_max,
                                            Eigen::Index guard = kExactPairGuard);

/// Default linear-scan cap for t_couple searches: 64·N·⌈ln N⌉.
int default_couple_cap(Eigen::Index n);

}  // namespace qcoupling
