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

#include "qcoupling/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace qcoupling {

namespace {

std::vector<std::string> default_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

// BFS over the support digraph (edge j -> i when P(i, j) > 0).
std::vector<int> bfs_levels(const Matrix& p, Eigen::Index source, bool reverse) {
  const Eigen::Index n = p.rows();
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  std::queue<Eigen::Index> frontier;
  level[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Eigen::Index u = frontier.front();
    frontier.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      const double w = reverse ? p(u, v) : p(v, u);
      if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

}  // namespace

TransitionMatrix::TransitionMatrix(std::vector<std::string> labels, Matrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
    throw Error(ErrorKind::kInvalidInput, "transition matrix must be square with at least one state");
  if (static_cast<Eigen::Index>(labels_.size()) != entries_.rows())
    throw Error(ErrorKind::kInvalidInput, "label count does not match matrix size");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw Error(ErrorKind::kInvalidInput, "state labels must be unique");
}

TransitionMatrix::TransitionMatrix(Matrix entries)
    : TransitionMatrix(default_labels(entries.rows()), Matrix(entries)) {}

Distribution::Distribution(Vector weights, double tolerance) : weights_(std::move(weights)) {
  if (weights_.size() < 1) throw Error(ErrorKind::kInvalidInput, "distribution must be non-empty");
  if (weights_.minCoeff() < 0.0) throw Error(ErrorKind::kInvalidInput, "distribution has a negative weight");
  if (std::abs(weights_.sum() - 1.0) > tolerance)
    throw Error(ErrorKind::kInvalidInput, "distribution weights do not sum to 1");
}

Distribution Distribution::uniform(Eigen::Index n) {
  return Distribution(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(Eigen::Index n, Eigen::Index at) {
  Vector w = Vector::Zero(n);
  w(at) = 1.0;
  return Distribution(std::move(w));
}

Vector all_ones(Eigen::Index n) { return Vector::Ones(n); }

ChainValidation validate_chain(const TransitionMatrix& chain, double tolerance) {
  ChainValidation report;
  const Matrix& p = chain.entries();
  const Eigen::Index n = chain.size();

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p(i, j) < -tolerance || p(i, j) > 1.0 + tolerance) {
        std::ostringstream os;
        os << "entry P[" << i << "][" << j << "] = " << p(i, j) << " outside [0,1]";
        report.violations.push_back(os.str());
        report.stochastic = false;
      }
    }
    const double sum = p.col(j).sum();
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream os;
      os << "column " << j << " (" << chain.labels()[static_cast<std::size_t>(j)] << ") sums to " << sum;
      report.violations.push_back(os.str());
      report.stochastic = false;
    }
  }

  const auto forward = bfs_levels(p, 0, false);
  const auto backward = bfs_levels(p, 0, true);
  report.irreducible = std::all_of(forward.begin(), forward.end(), [](int l) { return l >= 0; }) &&
                       std::all_of(backward.begin(), backward.end(), [](int l) { return l >= 0; });
  if (!report.irreducible) {
    report.violations.push_back("support digraph is not strongly connected");
    return report;
  }

  // Period = gcd over edges u->v of level(u) + 1 - level(v); a self-loop gives 1.
  int g = 0;
  for (Eigen::Index u = 0; u < n && g != 1; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (p(v, u) <= 0.0) continue;
      if (u == v) {
        g = 1;
        break;
      }
      g = std::gcd(g, std::abs(forward[static_cast<std::size_t>(u)] + 1 - forward[static_cast<std::size_t>(v)]));
    }
  }
  report.period = g;
  report.aperiodic = (g == 1);
  if (!report.aperiodic) report.violations.push_back("chain is periodic with period " + std::to_string(g));
  report.ergodic = report.stochastic && report.irreducible && report.aperiodic;
  return report;
}

void require_ergodic(const TransitionMatrix& p) {
  const ChainValidation report = validate_chain(p);
  if (!report.stochastic)
    throw Error(ErrorKind::kInvalidInput, "chain is not column-stochastic: " + report.violations.front());
  if (!report.irreducible) throw Error(ErrorKind::kNotErgodic, "chain is not irreducible");
  if (!report.aperiodic)
    throw Error(ErrorKind::kNotErgodic, "chain is not aperiodic (period " + std::to_string(report.period) + ")");
}

Distribution stationary_distribution(const TransitionMatrix& chain) {
  require_ergodic(chain);
  const Matrix& p = chain.entries();
  const Eigen::Index n = chain.size();

  Matrix system(n + 1, n);
  system.topRows(n) = p - Matrix::Identity(n, n);
  system.row(n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs(n) = 1.0;
  Vector pi = system.colPivHouseholderQr().solve(rhs);

  for (int iter = 0; iter < 100000; ++iter) {
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    const Vector next = p * pi;
    const double residual = (next - pi).cwiseAbs().maxCoeff();
    pi = next;
    if (residual <= 1e-12) break;
  }
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  if (pi.minCoeff() <= 0.0) throw Error(ErrorKind::kNotErgodic, "stationary distribution has a zero entry");
  return Distribution(std::move(pi), tol::kComputed);
}

double total_variation(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) throw Error(ErrorKind::kInvalidInput, "total_variation: length mismatch");
  return 0.5 * (p - q).cwiseAbs().sum();
}

double total_variation(const Distribution& p, const Distribution& q) {
  return total_variation(p.weights(), q.weights());
}

std::vector<double> distance_series(const TransitionMatrix& chain, int m_max) {
  if (m_max < 0) throw Error(ErrorKind::kInvalidInput, "m must be non-negative");
  const Vector pi = stationary_distribution(chain).weights();
  const Matrix& p = chain.entries();
  const Eigen::Index n = chain.size();
  Matrix dists = Matrix::Identity(n, n);  // column x = distribution after m steps from x
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) dists = p * dists;
    double worst = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) worst = std::max(worst, total_variation(Vector(dists.col(x)), pi));
    out.push_back(worst);
  }
  return out;
}

double distance_to_stationary(const TransitionMatrix& p, int m) { return distance_series(p, m).back(); }

int mixing_time(const TransitionMatrix& chain, double eps, int m_max) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::kInvalidInput, "eps must lie in (0, 1)");
  const Vector pi = stationary_distribution(chain).weights();
  const Matrix& p = chain.entries();
  const Eigen::Index n = chain.size();
  Matrix dists = Matrix::Identity(n, n);
  int best_m = 0;
  double best_d = 2.0;
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) dists = p * dists;
    double worst = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) worst = std::max(worst, total_variation(Vector(dists.col(x)), pi));
    if (worst <= eps) return m;
    if (worst < best_d) {
      best_d = worst;
      best_m = m;
    }
  }
  std::ostringstream os;
  os << "mixing time search exceeded m_max=" << m_max << "; best d(" << best_m << ") = " << best_d;
  throw Error(ErrorKind::kNotResolved, os.str());
}

MixingReport mixing_report(const TransitionMatrix& chain, const std::vector<double>& eps, int m_max) {
  MixingReport report;
  report.eps = eps;
  const int quarter = mixing_time(chain, 0.25, m_max);
  report.t_mix_quarter = quarter;
  int last = quarter;
  for (double e : eps) {
    const int t = mixing_time(chain, e, m_max);
    report.t_mix.push_back(t);
    last = std::max(last, t);

    CheckResult check;
    check.name = "mixing_time_doubling_bound";
    check.lhs = t;
    check.rhs = std::ceil(std::log2(1.0 / e)) * quarter;
    check.pass = check.lhs <= check.rhs;
    check.provenance = "t_mix(eps) <= ceil(log2(1/eps)) * t_mix(1/4)";
    check.notes.push_back("eps=" + std::to_string(e));
    report.bound_checks.push_back(std::move(check));
  }
  report.distances = distance_series(chain, last);
  return report;
}

}  // namespace qcoupling
