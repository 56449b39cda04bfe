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
#include "qcoupling/linalg.hpp"

namespace qcoupling {

/// Column-stochastic transition matrix: entries(i, j) = Pr(j -> i).
///
/// Construction checks shape and labels only; stochasticity and ergodicity are
/// reported by validate_chain() and enforced by the operations that need them.
class TransitionMatrix {
 public:
  TransitionMatrix(std::vector<std::string> labels, Matrix entries);
  /// Labels default to "0", "1", ...
  explicit TransitionMatrix(Matrix entries);

  Eigen::Index size() const { return entries_.rows(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& entries() const { return entries_; }
  double operator()(Eigen::Index to, Eigen::Index from) const { return entries_(to, from); }

 private:
  std::vector<std::string> labels_;
  Matrix entries_;
};

class Distribution {
 public:
  explicit Distribution(Vector weights, double tolerance = tol::kInput);
  static Distribution uniform(Eigen::Index n);
  static Distribution point_mass(Eigen::Index n, Eigen::Index at);

  Eigen::Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_(i); }
  double min_weight() const { return weights_.minCoeff(); }

 private:
  Vector weights_;
};

/// The all-ones vector |e⟩.
Vector all_ones(Eigen::Index n);

struct ChainValidation {
  bool stochastic = true;
  bool irreducible = false;
  bool aperiodic = false;
  bool ergodic = false;
  int period = 0;  // 0 when the chain is reducible
  std::vector<std::string> violations;
};

ChainValidation validate_chain(const TransitionMatrix& p, double tolerance = tol::kInput);

/// Throws Error(kNotErgodic / kInvalidInput) naming the failed property.
void require_ergodic(const TransitionMatrix& p);

Distribution stationary_distribution(const TransitionMatrix& p);

double total_variation(const Distribution& p, const Distribution& q);
double total_variation(const Vector& p, const Vector& q);

/// d(m): worst-case total variation distance to stationarity after m steps.
double distance_to_stationary(const TransitionMatrix& p, int m);

/// d(0), d(1), ..., d(m_max).
std::vector<double> distance_series(const TransitionMatrix& p, int m_max);

struct MixingReport {
  std::vector<double> distances;  // d(0..m_last)
  std::vector<double> eps;
  std::vector<int> t_mix;          // one per eps
  std::optional<int> t_mix_quarter;
  std::vector<CheckResult> bound_checks;  // t_mix(eps) <= ceil(log2 1/eps) t_mix(1/4)
};

/// Smallest m with d(m) <= eps, searching m <= m_max.
int mixing_time(const TransitionMatrix& p, double eps, int m_max = 10000);

MixingReport mixing_report(const TransitionMatrix& p, const std::vector<double>& eps, int m_max = 10000);

}  // namespace qcoupling
