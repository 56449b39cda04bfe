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

#include "qcoupling/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcoupling {

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw Error(ErrorKind::kInvalidInput, "trace_distance: dimension mismatch");
  return 0.5 * trace_norm_symmetric(rho - sigma);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

double qperp_overlap(const Matrix& rho, const Qsample& q) {
  const Vector& a = q.amplitudes();
  return rho.trace() - a.dot(rho * a);
}

Matrix channel_step(const Channel& channel, const Matrix& rho) {
  return std::visit([&](const auto& map) { return apply_channel(map, rho).matrix; }, channel);
}

void require_physical(const Channel& channel) {
  if (const auto* s = std::get_if<Superoperator>(&channel)) {
    if (s->cp_status != CpStatus::kVerified)
      throw Error(ErrorKind::kUnverified, "channel is not CP-verified (status " + to_string(s->cp_status) + ")");
  } else if (kraus_condition_residual(std::get<KrausSet>(channel)) > tol::kComputed) {
    throw Error(ErrorKind::kUnverified, "Kraus set violates the trace-preservation condition");
  }
}

namespace {

Eigen::Index channel_dim(const Channel& channel) {
  return std::visit([](const auto& map) { return map.dim; }, channel);
}

double tail_or_nan(const CoalescenceReport* report, int m) {
  if (report == nullptr) return std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < report->m.size(); ++k)
    if (report->m[k] == m) return report->tail_max[k];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ConvergenceTrace evolve_trace(const Channel& channel, const DensityMatrix& rho0, const Qsample& q, int m_max,
                              const CoalescenceReport* report) {
  require_physical(channel);
  if (channel_dim(channel) != rho0.dim() || rho0.dim() != q.dim())
    throw Error(ErrorKind::kInvalidInput, "evolve_trace: dimension mismatch");
  if (m_max < 0) throw Error(ErrorKind::kInvalidInput, "m_max must be non-negative");

  ConvergenceTrace trace;
  trace.has_bounds = report != nullptr;
  if (report) trace.pi_star = (q.amplitudes().array().square()).minCoeff();
  const Matrix target = q.projector();
  Matrix rho = rho0.matrix();
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) rho = channel_step(channel, rho);
    const double dist = trace_distance(rho, target);
    const double overlap = qperp_overlap(rho, q);
    if (!trace.trace_distance.empty()) {
      if (dist > trace.trace_distance.back() + tol::kComputed) trace.distance_non_increasing = false;
      if (overlap > trace.qperp_overlap.back() + tol::kComputed) trace.overlap_non_increasing = false;
    }
    trace.m.push_back(m);
    trace.trace_distance.push_back(dist);
    trace.qperp_overlap.push_back(overlap);
    if (report) {
      const double tail = tail_or_nan(report, m);
      trace.classical_tail_max.push_back(tail);
      trace.qperp_bound.push_back(tail / trace.pi_star);
      trace.theorem_envelope.push_back(std::sqrt(tail / trace.pi_star));
    }
  }
  return trace;
}

Matrix edge_laplacian(Eigen::Index n, Eigen::Index x, Eigen::Index y) {
  Vector edge = Vector::Zero(n);
  edge(x) += 1.0 / std::sqrt(2.0);
  edge(y) -= 1.0 / std::sqrt(2.0);
  return edge * edge.transpose();
}

CheckResult laplacian_preservation_check(const CouplingMatrix& c, Eigen::Index x, Eigen::Index y) {
  const Eigen::Index n = c.states();
  if (x == y) throw Error(ErrorKind::kInvalidInput, "Laplacian preservation needs x != y");
  if (x < 0 || y < 0 || x >= n || y >= n) throw Error(ErrorKind::kInvalidInput, "state out of range");
  const Superoperator c_star = c_star_superop(c);
  const Matrix lhs = c_star.apply(edge_laplacian(n, x, y));
  Matrix rhs = Matrix::Zero(n, n);
  for (SparseMatrix::InnerIterator it(c.entries(), pair_index(x, y, n)); it; ++it) {
    const Eigen::Index xp = it.row() / n;
    const Eigen::Index yp = it.row() % n;
    if (xp != yp) rhs += it.value() * edge_laplacian(n, xp, yp);
  }
  CheckResult check;
  check.name = "laplacian_preservation";
  check.lhs = max_abs_diff(lhs, rhs);
  check.rhs = 0.0;
  check.tolerance = tol::kInput;
  check.pass = check.lhs <= check.tolerance;
  check.provenance = "C*(|-xy><-xy|) = sum c_{(x',y'),(x,y)} |-x'y'><-x'y'|";
  check.notes.push_back("pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
  return check;
}

CheckResult rescaled_qperp_decomposition_check(const Distribution& pi) {
  const Eigen::Index n = pi.size();
  const Qsample q(pi);
  const Matrix sqrt_d = pi.weights().cwiseSqrt().asDiagonal();
  const Matrix lhs = sqrt_d * q.complement() * sqrt_d;
  Matrix rhs = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) rhs += pi[x] * pi[y] * edge_laplacian(n, x, y);
  CheckResult check;
  check.name = "rescaled_qperp_decomposition";
  check.lhs = max_abs_diff(lhs, rhs);
  check.tolerance = tol::kInput;
  check.pass = check.lhs <= check.tolerance;
  check.provenance = "D^1/2 Qperp D^1/2 = sum_{x,y} pi_x pi_y |-xy><-xy|";
  return check;
}

CheckResult coalescence_trace_identity_check(const CouplingMatrix& c, int m, Eigen::Index guard) {
  const Eigen::Index n = c.states();
  if (n > guard) throw Error(ErrorKind::kGuardExceeded, "trace identity check needs N <= " + std::to_string(guard));
  const CoalescenceReport report = coalescence_tail_exact(c, m, guard);
  const Matrix power = matrix_power(c_star_superop(c).matrix, m);
  double worst = 0.0;
  double at_worst_pair = 0.0;
  for (std::size_t k = 0; k < report.pairs.size(); ++k) {
    const auto [x, y] = report.pairs[k];
    const double trace = unvec(power * vec(edge_laplacian(n, x, y)), n).trace();
    const double tail = report.pair_tails.back()[k];
    if (std::abs(trace - tail) >= worst) {
      worst = std::abs(trace - tail);
      at_worst_pair = tail;
    }
  }
  CheckResult check;
  check.name = "coalescence_trace_identity";
  check.lhs = worst;
  check.rhs = 0.0;
  check.tolerance = tol::kComputed;
  check.pass = worst <= check.tolerance;
  check.provenance = "Pr_{x,y}{tau > m} = tr([C*]^m(|-xy><-xy|))";
  std::ostringstream os;
  os << "m=" << m << " tail_max=" << report.tail_max.back() << " tail_at_worst_pair=" << at_worst_pair;
  check.notes.push_back(os.str());
  return check;
}

CheckResult qperp_bound_check(const Channel& t, const Distribution& pi, const CoalescenceReport& report,
                              const std::vector<DensityMatrix>& rho0_set, const std::vector<int>& m_grid) {
  if (report.mode != TailMode::kExact) throw Error(ErrorKind::kInvalidInput, "q-perp bound check needs exact tails");
  require_physical(t);
  const Qsample q(pi);
  const double pi_star = pi.min_weight();
  const int horizon = m_grid.empty() ? 0 : *std::max_element(m_grid.begin(), m_grid.end());

  CheckResult check;
  check.name = "qperp_bound";
  check.tolerance = tol::kComputed;
  check.pass = true;
  check.provenance = "tr(Qperp T^m(rho0)) <= Pr_max{tau > m} / pi_*";
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  int vacuous = 0;
  int informative = 0;
  for (const DensityMatrix& rho0 : rho0_set) {
    Matrix rho = rho0.matrix();
    for (int m = 0; m <= horizon; ++m) {
      if (m > 0) rho = channel_step(t, rho);
      if (std::find(m_grid.begin(), m_grid.end(), m) == m_grid.end()) continue;
      const double lhs = qperp_overlap(rho, q);
      const double tail = report.tail_at(m);
      const double rhs = tail / pi_star;
      if (tail > 0.0) worst_ratio = std::max(worst_ratio, lhs * pi_star / tail);
      if (rhs >= 1.0) {
        ++vacuous;
        continue;
      }
      ++informative;
      if (lhs - rhs > worst_gap) {
        worst_gap = lhs - rhs;
        check.lhs = lhs;
        check.rhs = rhs;
      }
      if (lhs > rhs + check.tolerance) {
        check.pass = false;
        check.notes.push_back("violated at m=" + std::to_string(m));
      }
    }
  }
  std::ostringstream os;
  os << "informative rows " << informative << ", vacuous rows " << vacuous << ", worst ratio lhs*pi_*/tail "
     << worst_ratio;
  check.notes.push_back(os.str());
  return check;
}

int theorem_steps(double eps, double pi_star, int t_couple) {
  if (!(eps > 0.0) || !(pi_star > 0.0)) throw Error(ErrorKind::kInvalidInput, "eps and pi_* must be positive");
  const double ell = std::ceil(0.5 * std::log2(1.0 / (eps * pi_star)));
  return static_cast<int>(std::max(ell, 0.0)) * t_couple;
}

std::vector<CheckResult> main_theorem_check(const Channel& t, const Distribution& pi, const CoalescenceReport& report,
                                            const std::vector<DensityMatrix>& rho0_set,
                                            const std::vector<double>& eps_list) {
  require_physical(t);
  if (!report.t_couple) throw Error(ErrorKind::kNotResolved, "t_couple is not resolved in the coalescence report");
  const Qsample q(pi);
  const Matrix target = q.projector();
  const double pi_star = pi.min_weight();
  std::vector<CheckResult> results;
  for (double eps : eps_list) {
    const int steps = theorem_steps(eps, pi_star, *report.t_couple);
    CheckResult check;
    check.name = "main_theorem";
    check.rhs = std::sqrt(eps);
    check.tolerance = tol::kComputed;
    check.provenance = "(1/2)||T^m(rho) - Q||_tr <= sqrt(eps) at m = ceil((1/2) log2(1/(eps pi_*))) t_couple";
    double worst = 0.0;
    for (const DensityMatrix& rho0 : rho0_set) {
      Matrix rho = rho0.matrix();
      for (int k = 0; k < steps; ++k) rho = channel_step(t, rho);
      worst = std::max(worst, trace_distance(rho, target));
    }
    check.lhs = worst;
    check.pass = worst <= check.rhs + check.tolerance;
    std::ostringstream os;
    os << "eps=" << eps << " m=" << steps << " t_couple=" << *report.t_couple;
    check.notes.push_back(os.str());
    results.push_back(std::move(check));
  }
  return results;
}

CheckResult gentle_measurement_step_check(const DensityMatrix& rho, const Qsample& q, double eps) {
  const Matrix proj = q.projector();
  const double overlap = qperp_overlap(rho.matrix(), q);
  CheckResult check;
  check.name = "gentle_measurement";
  check.tolerance = tol::kComputed;
  check.provenance = "tr(Qperp rho) < eps implies ||rho - Q rho Q / tr(Q rho)||_tr <= 2 sqrt(eps)";
  check.rhs = 2.0 * std::sqrt(eps);
  if (!(overlap < eps)) {
    check.pass = false;
    check.notes.push_back("precondition violated: tr(Qperp rho) = " + std::to_string(overlap));
    return check;
  }
  // Q ρ Q / tr(Qρ) = Q for rank-one Q.
  const double q_weight = (proj * rho.matrix()).trace();
  const Matrix post = proj * rho.matrix() * proj / q_weight;
  check.lhs = trace_norm_symmetric(rho.matrix() - post);
  check.pass = check.lhs <= check.rhs + check.tolerance;
  check.notes.push_back("||post - Q||_max = " + std::to_string(max_abs_diff(post, proj)));
  return check;
}

CheckResult reducing_projector_check(const Channel& t, const Qsample& q,
                                     const std::vector<std::pair<Matrix, Matrix>>& pairs, int m_max) {
  const Matrix proj = q.projector();
  const Vector& a = q.amplitudes();
  double worst = 0.0;
  for (const auto& [rho, obs] : pairs) {
    const double expected = a.dot(rho * a) * a.dot(obs * a);
    Matrix evolved = proj * rho * proj;
    for (int m = 0; m <= m_max; ++m) {
      if (m > 0) evolved = channel_step(t, evolved);
      worst = std::max(worst, std::abs((evolved * obs).trace() - expected));
    }
  }
  CheckResult check;
  check.name = "reducing_projector";
  check.lhs = worst;
  check.tolerance = tol::kComputed;
  check.pass = worst <= check.tolerance;
  check.provenance = "tr(T^m(Q rho Q) A) = <sqrt pi|rho|sqrt pi> <sqrt pi|A|sqrt pi>";
  return check;
}

CheckResult expanding_projector_check(const Superoperator& t_star, const Qsample& q, const CoalescenceReport& report,
                                      double tail_threshold, double tolerance) {
  std::optional<int> target_m;
  for (std::size_t k = 0; k < report.m.size(); ++k)
    if (report.tail_max[k] < tail_threshold) {
      target_m = report.m[k];
      break;
    }
  if (!target_m) throw Error(ErrorKind::kNotResolved, "coalescence tail never drops below the threshold");
  const Eigen::Index n = q.dim();
  Matrix evolved = q.projector();
  for (int m = 0; m < *target_m; ++m) evolved = t_star.apply(evolved);
  CheckResult check;
  check.name = "expanding_projector";
  check.lhs = max_abs(evolved - Matrix::Identity(n, n));
  check.tolerance = tolerance;
  check.pass = check.lhs <= tolerance;
  check.provenance = "(T*)^m(Q) -> I";
  check.notes.push_back("m=" + std::to_string(*target_m));
  return check;
}

CheckResult fixed_point_stability_check(const Channel& t, const Qsample& q, int m_max) {
  const Matrix proj = q.projector();
  Matrix evolved = proj;
  double worst = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    evolved = channel_step(t, evolved);
    worst = std::max(worst, trace_norm_symmetric(evolved - proj));
  }
  CheckResult check;
  check.name = "fixed_point_stability";
  check.lhs = worst;
  check.tolerance = 1e-8;
  check.pass = worst <= check.tolerance;
  check.provenance = "||T^m(Q) - Q||_tr stays at round-off";
  return check;
}

}  // namespace qcoupling
