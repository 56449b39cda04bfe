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
#include <utility>
#include <vector>

#include "qcoupling/chain.hpp"
#include "qcoupling/common.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/linalg.hpp"

namespace qcoupling {

/// Simple undirected graph on vertices 0..n-1.
class GraphSpec {
 public:
  GraphSpec(int vertices, std::vector<std::pair<int, int>> edges);

  static GraphSpec path(int n);
  static GraphSpec complete(int n);
  static GraphSpec cycle(int n);
  /// "P5", "K3", "C4" (path, complete, cycle graphs).
  static GraphSpec parse(const std::string& name);

  int vertices() const { return vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  int max_degree() const { return max_degree_; }
  const std::string& name() const { return name_; }

 private:
  int vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
  int max_degree_ = 0;
  std::string name_;
};

enum class ModelKind { kHypercube, kCycle, kColorings, kHardcore };

std::string to_string(ModelKind kind);

enum class CycleVariant {
  kProse,    // fair coin picks the moving particle
  kPrinted,  // off-diagonal-start weights doubled to match the reference Choi matrix
};

/// A bundled chain with its coupling data over the lexicographically enumerated state space.
struct ModelInstance {
  ModelKind kind = ModelKind::kHypercube;
  std::string name;
  // Parameters; unused ones stay at their defaults.
  int n = 0;
  double bias_p = 0.5;
  CycleVariant variant = CycleVariant::kProse;
  int colors = 0;
  double fugacity = 0.0;
  std::optional<GraphSpec> graph;

  std::vector<std::string> labels;
  std::optional<TransitionMatrix> chain;     // absent for Monte-Carlo-only instances
  std::optional<RandomMappingRep> rmr;       // grand-coupling models
  std::optional<CouplingMatrix> coupling;    // cycle model
  std::optional<Distribution> stationary;    // closed form when known
  std::optional<double> rate_constant;       // c_met or c_H
  std::optional<bool> expect_cp;             // what the construction is known to give
  bool marginal_verified = true;

  Eigen::Index states() const { return static_cast<Eigen::Index>(labels.size()); }
  /// Grand coupling matrix for rmr models, the stored coupling otherwise.
  CouplingMatrix coupling_matrix() const;
};

/// Dense-chain cap for exact work; larger instances need `mc_only`.
inline constexpr Eigen::Index kDenseStateGuard = 1024;

ModelInstance hypercube_model(int n, bool mc_only = false);
ModelInstance cycle_coupling_model(int n, double p, CycleVariant variant);
ModelInstance colorings_model(const GraphSpec& g, int q, bool mc_only = false);
ModelInstance hardcore_model(const GraphSpec& g, double lambda, bool mc_only = false);

/// Parses "hypercube3", "cycle3-printed", "cycle5-prose-p0.3", "colorings-K3-q4", "hardcore-P3-l2".
ModelInstance model_from_name(const std::string& name, bool mc_only = false);

/// Forward flip operators T_{i,b}|x⟩ = |x with coordinate i set to b⟩ (unscaled 0/1 matrices), ordered (i, b).
std::vector<Matrix> hypercube_flip_operators(int n);

double c_met(int max_degree, int q);
double c_hardcore(double lambda, int max_degree);

/// Reference 9×9 Choi matrix of the n = 3 unbiased cycle coupling (basis factor first).
Matrix cycle3_choi_fixture();
/// Reference eigenvalues, rounded to two digits, ascending.
std::vector<double> cycle3_eigenvalue_fixture();

enum class RateMode { kExact, kMonteCarlo };

struct RateCheck {
  CheckResult check;
  CoalescenceReport report;
  std::vector<int> m_grid;
  std::vector<double> envelope;
  bool upper_ci_within = true;  // MC: estimate + half-width <= envelope everywhere
  bool vacuous = false;
};

/// Theoretical non-coalescence envelope at m: coupon tail for the hypercube,
/// n·exp(−m·rate/n) for colorings and hardcore.
double rate_envelope(const ModelInstance& model, int m);

struct RateOptions {
  RateMode mode = RateMode::kExact;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> start_pairs;  // MC; default = default_start_pairs()
};

/// Start pairs for Monte Carlo tails: (0, N−1) plus up to `extra` seeded random distinct pairs.
std::vector<std::pair<Eigen::Index, Eigen::Index>> default_start_pairs(Eigen::Index n, std::uint64_t seed, int extra = 7);

RateCheck contraction_rate_check(const ModelInstance& model, const std::vector<int>& m_grid, const RateOptions& options);

}  // namespace qcoupling
