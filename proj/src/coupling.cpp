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

#include "qcoupling/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "qcoupling/rng.hpp"

namespace qcoupling {

namespace {

std::string pair_label(const TransitionMatrix& p, Eigen::Index idx) {
  const Eigen::Index n = p.size();
  const auto& labels = p.labels();
  return "(" + labels[static_cast<std::size_t>(idx / n)] + "," + labels[static_cast<std::size_t>(idx % n)] + ")";
}

void require_valid(const CouplingMatrix& c) {
  const CouplingValidation v = validate_coupling(c);
  if (!v.valid) throw Error(ErrorKind::kInvalidInput, "invalid coupling: " + v.violations.front());
}

void require_guard(Eigen::Index n, Eigen::Index guard) {
  if (n > guard) {
    std::ostringstream os;
    os << "exact coalescence needs N <= " << guard << " (got N = " << n << "); use Monte Carlo mode";
    throw Error(ErrorKind::kGuardExceeded, os.str());
  }
}

}  // namespace

CouplingMatrix::CouplingMatrix(TransitionMatrix base, SparseMatrix entries)
    : base_(std::move(base)), entries_(std::move(entries)) {
  const Eigen::Index n2 = base_.size() * base_.size();
  if (entries_.rows() != n2 || entries_.cols() != n2)
    throw Error(ErrorKind::kInvalidInput, "coupling matrix must be N^2 x N^2 over the base chain");
  entries_.makeCompressed();
}

RandomMappingRep::RandomMappingRep(std::vector<std::string> labels, std::vector<RandomOutcome> randomness,
                                   std::vector<std::int32_t> table, std::optional<TransitionMatrix> base)
    : labels_(std::move(labels)), randomness_(std::move(randomness)), table_(std::move(table)), base_(std::move(base)) {
  if (labels_.empty()) throw Error(ErrorKind::kInvalidInput, "random mapping needs at least one state");
  if (randomness_.empty()) throw Error(ErrorKind::kInvalidInput, "random mapping needs at least one outcome");
  if (table_.size() != labels_.size() * randomness_.size())
    throw Error(ErrorKind::kInvalidInput, "successor table must be N x |R|");
  for (std::int32_t s : table_)
    if (s < 0 || s >= states()) throw Error(ErrorKind::kInvalidInput, "successor index out of range");
  if (base_ && base_->size() != states()) throw Error(ErrorKind::kInvalidInput, "base chain size does not match the mapping");
}

TransitionMatrix RandomMappingRep::chain() const {
  if (base_) return *base_;
  return TransitionMatrix(labels_, chain_from_mapping(states(), randomness_, table_));
}

Matrix chain_from_mapping(Eigen::Index n, const std::vector<RandomOutcome>& randomness,
                          const std::vector<std::int32_t>& table) {
  Matrix p = Matrix::Zero(n, n);
  const std::size_t r_count = randomness.size();
  for (Eigen::Index x = 0; x < n; ++x)
    for (std::size_t r = 0; r < r_count; ++r)
      p(table[static_cast<std::size_t>(x) * r_count + r], x) += randomness[r].prob;
  return p;
}

std::vector<std::string> validate_rmr(const RandomMappingRep& rmr, double tolerance) {
  std::vector<std::string> violations;
  double total = 0.0;
  for (const auto& o : rmr.randomness()) {
    if (o.prob < 0.0) violations.push_back("outcome '" + o.label + "' has negative probability");
    total += o.prob;
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream os;
    os << "outcome probabilities sum to " << total;
    violations.push_back(os.str());
  }
  if (!rmr.has_base()) return violations;
  const Matrix implied = chain_from_mapping(rmr.states(), rmr.randomness(), rmr.table());
  Eigen::Index wi = 0;
  Eigen::Index wj = 0;
  const double worst = (implied - rmr.chain().entries()).cwiseAbs().maxCoeff(&wi, &wj);
  if (worst > tolerance) {
    std::ostringstream os;
    os << "mapping marginal differs from P at (" << wi << "," << wj << ") by " << worst;
    violations.push_back(os.str());
  }
  return violations;
}

CouplingValidation validate_coupling(const CouplingMatrix& c, double tolerance) {
  CouplingValidation report;
  const TransitionMatrix& base = c.base();
  const Matrix& p = base.entries();
  const Eigen::Index n = base.size();
  const SparseMatrix& entries = c.entries();

  auto note = [&](const std::string& condition, double magnitude, Eigen::Index row, Eigen::Index col) {
    std::ostringstream os;
    os << condition << " violated at C[" << pair_label(base, row) << "][" << pair_label(base, col)
       << "] by " << magnitude;
    report.violations.push_back(os.str());
  };

  struct Worst {
    double value = 0.0;
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    void update(double v, Eigen::Index r, Eigen::Index c) {
      if (v > value) {
        value = v;
        row = r;
        col = c;
      }
    }
  };
  Worst stochastic;
  Worst marginal;
  Worst coalescence;
  Worst symmetry;

  Vector first(n);
  Vector second(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const Eigen::Index col = pair_index(x, y, n);
      first.setZero();
      second.setZero();
      double sum = 0.0;
      for (SparseMatrix::InnerIterator it(entries, col); it; ++it) {
        const double v = it.value();
        const Eigen::Index xp = it.row() / n;
        const Eigen::Index yp = it.row() % n;
        if (v < 0.0) stochastic.update(-v, it.row(), col);
        sum += v;
        first(xp) += v;
        second(yp) += v;
        if (x == y) {
          if (xp != yp) coalescence.update(std::abs(v), it.row(), col);
          else coalescence.update(std::abs(v - p(xp, x)), it.row(), col);
        }
        symmetry.update(std::abs(v - entries.coeff(pair_index(yp, xp, n), pair_index(y, x, n))), it.row(), col);
      }
      stochastic.update(std::abs(sum - 1.0), col, col);
      for (Eigen::Index s = 0; s < n; ++s) {
        marginal.update(std::abs(first(s) - p(s, x)), pair_index(s, 0, n), col);
        marginal.update(std::abs(second(s) - p(s, y)), pair_index(0, s, n), col);
        if (x == y) coalescence.update(std::abs(entries.coeff(pair_index(s, s, n), col) - p(s, x)),
                                       pair_index(s, s, n), col);
      }
    }
  }

  report.worst_stochastic = stochastic.value;
  report.worst_marginal = marginal.value;
  report.worst_coalescence = coalescence.value;
  report.worst_symmetry = symmetry.value;
  report.stochastic = stochastic.value <= tolerance;
  report.marginals = marginal.value <= tolerance;
  report.coalescence = coalescence.value <= tolerance;
  report.symmetry = symmetry.value <= tolerance;
  if (!report.stochastic) note("column stochasticity", stochastic.value, stochastic.row, stochastic.col);
  if (!report.marginals) note("condition 1 (marginals)", marginal.value, marginal.row, marginal.col);
  if (!report.coalescence) note("condition 2 (coalescence)", coalescence.value, coalescence.row, coalescence.col);
  if (!report.symmetry) note("condition 3 (symmetry)", symmetry.value, symmetry.row, symmetry.col);
  report.valid = report.stochastic && report.marginals && report.coalescence && report.symmetry;
  return report;
}

CouplingMatrix independent_coupling(const TransitionMatrix& chain) {
  require_ergodic(chain);
  const Matrix& p = chain.entries();
  const Eigen::Index n = chain.size();
  std::vector<Triplet> triplets;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const Eigen::Index col = pair_index(x, y, n);
      for (Eigen::Index xp = 0; xp < n; ++xp) {
        if (p(xp, x) == 0.0) continue;
        if (x == y) {
          triplets.emplace_back(pair_index(xp, xp, n), col, p(xp, x));
          continue;
        }
        for (Eigen::Index yp = 0; yp < n; ++yp)
          if (p(yp, y) != 0.0) triplets.emplace_back(pair_index(xp, yp, n), col, p(xp, x) * p(yp, y));
      }
    }
  }
  SparseMatrix c(n * n, n * n);
  c.setFromTriplets(triplets.begin(), triplets.end());
  return CouplingMatrix(chain, std::move(c));
}

CouplingMatrix grand_coupling_matrix(const RandomMappingRep& rmr) {
  const auto violations = validate_rmr(rmr);
  if (!violations.empty()) throw Error(ErrorKind::kInvalidInput, "invalid random mapping: " + violations.front());
  const Eigen::Index n = rmr.states();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(n * n) * rmr.outcomes());
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      for (std::size_t r = 0; r < rmr.outcomes(); ++r)
        triplets.emplace_back(pair_index(rmr.successor(x, r), rmr.successor(y, r), n), pair_index(x, y, n),
                              rmr.randomness()[r].prob);
  SparseMatrix c(n * n, n * n);
  c.setFromTriplets(triplets.begin(), triplets.end());
  c.prune(0.0);
  return CouplingMatrix(rmr.chain(), std::move(c));
}

double CoalescenceReport::tail_at(int m_value) const {
  const auto it = std::find(m.begin(), m.end(), m_value);
  if (it == m.end()) throw Error(ErrorKind::kInvalidInput, "m = " + std::to_string(m_value) + " not in report");
  return tail_max[static_cast<std::size_t>(it - m.begin())];
}

CoalescenceReport coalescence_tail_exact(const CouplingMatrix& c, int m_max, Eigen::Index guard) {
  require_guard(c.states(), guard);
  require_valid(c);
  if (m_max < 0) throw Error(ErrorKind::kInvalidInput, "m_max must be non-negative");

  const Eigen::Index n = c.states();
  CoalescenceReport report;
  report.mode = TailMode::kExact;
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) report.pairs.emplace_back(x, y);

  // w_m(x,y) = Σ_{x'≠y'} [C^m]_{(x',y'),(x,y)}, i.e. w_{m+1} = Cᵀ w_m with w_0 the off-diagonal indicator.
  Vector w = Vector::Ones(n * n);
  for (Eigen::Index x = 0; x < n; ++x) w(pair_index(x, x, n)) = 0.0;
  const SparseMatrix ct = c.entries().transpose();
  Vector expectation = Vector::Zero(n * n);

  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) w = ct * w;
    expectation += w;
    std::vector<double> tails;
    tails.reserve(report.pairs.size());
    double worst = 0.0;
    for (const auto& [x, y] : report.pairs) {
      const double t = w(pair_index(x, y, n));
      tails.push_back(t);
      worst = std::max(worst, t);
    }
    report.m.push_back(m);
    report.tail_max.push_back(worst);
    report.pair_tails.push_back(std::move(tails));
    if (!report.t_couple && worst <= 0.25) report.t_couple = m;
  }

  double worst_expectation = 0.0;
  for (const auto& [x, y] : report.pairs) worst_expectation = std::max(worst_expectation, expectation(pair_index(x, y, n)));
  report.expected_tau_max = worst_expectation;
  report.expectation_truncated_at = m_max;
  report.expectation_converged = report.tail_max.back() < 1e-12;
  return report;
}

double mc_half_width(double estimate, std::uint64_t samples) {
  const double n = static_cast<double>(samples);
  return std::max(1.96 * std::sqrt(estimate * (1.0 - estimate) / n), 3.0 / n);
}

CoalescenceReport coalescence_tail_mc(const RandomMappingRep& rmr,
                                      const std::vector<std::pair<Eigen::Index, Eigen::Index>>& start_pairs,
                                      const std::vector<int>& m_grid, const MonteCarloOptions& options) {
  if (start_pairs.empty() || m_grid.empty()) throw Error(ErrorKind::kInvalidInput, "start pairs and m grid must be non-empty");
  if (options.samples < 1) throw Error(ErrorKind::kInvalidInput, "samples must be >= 1");
  const auto violations = validate_rmr(rmr);
  if (!violations.empty()) throw Error(ErrorKind::kInvalidInput, "invalid random mapping: " + violations.front());
  for (const auto& [x, y] : start_pairs)
    if (x < 0 || y < 0 || x >= rmr.states() || y >= rmr.states())
      throw Error(ErrorKind::kInvalidInput, "start pair out of range");
  if (std::any_of(m_grid.begin(), m_grid.end(), [](int m) { return m < 0; }))
    throw Error(ErrorKind::kInvalidInput, "m grid must be non-negative");

  const int horizon = *std::max_element(m_grid.begin(), m_grid.end());
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& o : rmr.randomness()) cumulative.push_back(acc += o.prob);
  const std::size_t last_outcome = cumulative.size() - 1;

  const std::uint64_t samples = options.samples;
  CoalescenceReport report;
  report.mode = TailMode::kMonteCarlo;
  report.samples = samples;
  report.seed = options.seed;
  report.pairs = start_pairs;
  report.m = m_grid;
  report.pair_tails.assign(m_grid.size(), std::vector<double>(start_pairs.size(), 0.0));

  // τ per trajectory; horizon + 1 means "not coalesced within the horizon".
  std::vector<int> taus(static_cast<std::size_t>(samples));
  for (std::size_t pi = 0; pi < start_pairs.size(); ++pi) {
    const auto [x0, y0] = start_pairs[pi];
    auto simulate = [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t t = begin; t < end; ++t) {
        StreamRng rng(options.seed, static_cast<std::uint64_t>(pi) * samples + t);
        Eigen::Index x = x0;
        Eigen::Index y = y0;
        int tau = 0;
        while (x != y && tau <= horizon) {
          const double u = rng.uniform();
          const std::size_t r = std::min<std::size_t>(
              static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()),
              last_outcome);
          x = rmr.successor(x, r);
          y = rmr.successor(y, r);
          ++tau;
        }
        taus[static_cast<std::size_t>(t)] = (x == y) ? tau : horizon + 1;
      }
    };
    const unsigned workers = std::max(1u, options.workers);
    if (workers == 1) {
      simulate(0, samples);
    } else {
      std::vector<std::thread> threads;
      const std::uint64_t chunk = (samples + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = std::min<std::uint64_t>(samples, w * chunk);
        const std::uint64_t end = std::min<std::uint64_t>(samples, begin + chunk);
        threads.emplace_back(simulate, begin, end);
      }
      for (auto& th : threads) th.join();
    }
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
      const auto exceed = std::count_if(taus.begin(), taus.end(), [&](int tau) { return tau > m_grid[k]; });
      report.pair_tails[k][pi] = static_cast<double>(exceed) / static_cast<double>(samples);
    }
  }

  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    double worst = 0.0;
    double worst_half = 0.0;
    double hi = 0.0;
    for (double est : report.pair_tails[k]) {
      const double half = mc_half_width(est, samples);
      if (est >= worst) {
        worst = est;
        worst_half = half;
      }
      hi = std::max(hi, est + half);
    }
    report.tail_max.push_back(worst);
    report.ci_half.push_back(worst_half);
    report.ci_hi.push_back(hi);
  }
  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    if (report.ci_hi[k] <= 0.25 && (!report.t_couple || m_grid[k] < *report.t_couple)) report.t_couple = m_grid[k];
  }
  return report;
}

int coupling_time(const CoalescenceReport& report) {
  if (report.mode == TailMode::kExact) {
    for (std::size_t k = 0; k < report.m.size(); ++k)
      if (report.tail_max[k] <= 0.25) return report.m[k];
    throw Error(ErrorKind::kNotResolved, "coupling time threshold 1/4 not reached within the computed range");
  }
  std::optional<int> best;
  bool straddles = false;
  for (std::size_t k = 0; k < report.m.size(); ++k) {
    if (report.ci_hi[k] <= 0.25) {
      if (!best || report.m[k] < *best) best = report.m[k];
    } else if (report.tail_max[k] <= 0.25) {
      straddles = true;
    }
  }
  if (best) return *best;
  if (straddles) throw Error(ErrorKind::kNotResolved, "threshold not resolved: the confidence interval straddles 1/4");
  throw Error(ErrorKind::kNotResolved, "coupling time threshold 1/4 not reached within the m grid");
}

CheckResult check_tail_submultiplicativity(const CouplingMatrix& c, int m, int l, Eigen::Index guard) {
  if (m < 0 || l < 1) throw Error(ErrorKind::kInvalidInput, "need m >= 0 and l >= 1");
  const CoalescenceReport report = coalescence_tail_exact(c, l * m, guard);
  CheckResult check;
  check.name = "tail_submultiplicativity";
  check.lhs = report.tail_at(l * m);
  check.rhs = std::pow(report.tail_at(m), l);
  check.tolerance = tol::kComputed;
  check.pass = check.lhs <= check.rhs + check.tolerance;
  check.provenance = "Pr_max{tau > l m} <= (Pr_max{tau > m})^l, sub-multiplicativity of the off-diagonal block norm";
  check.notes.push_back("m=" + std::to_string(m) + " l=" + std::to_string(l));
  return check;
}

CheckResult check_diagonal_block(const CouplingMatrix& c, int m, Eigen::Index guard) {
  require_guard(c.states(), guard);
  const Eigen::Index n = c.states();
  const Matrix pm = matrix_power(c.base().entries(), m);
  double worst = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    Vector dist = Vector::Zero(n * n);
    dist(pair_index(x, x, n)) = 1.0;
    for (int step = 0; step < m; ++step) dist = c.entries() * dist;
    for (Eigen::Index xp = 0; xp < n; ++xp)
      for (Eigen::Index yp = 0; yp < n; ++yp) {
        const double expected = (xp == yp) ? pm(xp, x) : 0.0;
        worst = std::max(worst, std::abs(dist(pair_index(xp, yp, n)) - expected));
      }
  }
  CheckResult check;
  check.name = "diagonal_block_equals_chain_power";
  check.lhs = worst;
  check.rhs = 0.0;
  check.tolerance = tol::kInput;
  check.pass = worst <= check.tolerance;
  check.provenance = "C^m restricted to the diagonal acts as P^m; coalesced pairs stay together";
  check.notes.push_back("m=" + std::to_string(m));
  return check;
}

CheckResult check_coalescence_bounds_mixing(const CouplingMatrix& c, int m_max, Eigen::Index guard) {
  const CoalescenceReport report = coalescence_tail_exact(c, m_max, guard);
  const std::vector<double> d = distance_series(c.base(), m_max);
  CheckResult check;
  check.name = "mixing_distance_below_coalescence_tail";
  check.tolerance = tol::kComputed;
  check.pass = true;
  double worst_gap = -1.0;
  for (int m = 0; m <= m_max; ++m) {
    const double gap = d[static_cast<std::size_t>(m)] - report.tail_max[static_cast<std::size_t>(m)];
    if (gap > worst_gap) {
      worst_gap = gap;
      check.lhs = d[static_cast<std::size_t>(m)];
      check.rhs = report.tail_max[static_cast<std::size_t>(m)];
    }
    if (gap > check.tolerance) {
      check.pass = false;
      check.notes.push_back("violated at m=" + std::to_string(m));
    }
  }
  check.provenance = "d(m) <= max_{x,y} Pr_{x,y}{tau_coal > m}";
  return check;
}

int default_couple_cap(Eigen::Index n) {
  const int log_n = static_cast<int>(std::ceil(std::log(static_cast<double>(std::max<Eigen::Index>(n, 2)))));
  return static_cast<int>(64 * n * log_n);
}

}  // namespace qcoupling
