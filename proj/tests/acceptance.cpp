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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qcoupling/chain.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/density.hpp"
#include "qcoupling/dilation.hpp"
#include "qcoupling/evolve.hpp"
#include "qcoupling/models.hpp"
#include "qcoupling/quantize.hpp"
#include "qcoupling/rng.hpp"
#include "support.hpp"

namespace qcoupling {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void require(const CheckResult& c) {
    std::ostringstream os;
    os << c.name << " lhs=" << c.lhs << " rhs=" << c.rhs;
    require(c.pass, os.str());
  }
};

Vector random_unit(Eigen::Index d, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
  return v.normalized();
}

std::vector<int> m_range(int first, int last, int step = 1) {
  std::vector<int> out;
  for (int m = first; m <= last; m += step) out.push_back(m);
  return out;
}

void cycle3_fixture(Outcome& o) {
  const ModelInstance m = cycle_coupling_model(3, 0.5, CycleVariant::kPrinted);
  const ChoiMatrix j = choi_matrix(c_star_superop(*m.coupling, false), ChoiOrder::kBasisFirst);
  const double diff = max_abs_diff(j.matrix, cycle3_choi_fixture());
  o.detail << "entry diff " << diff;
  o.require(diff == 0.0, "entrywise match");
  for (Eigen::Index i = 0; i < j.matrix.size(); ++i) {
    const double v = j.matrix.data()[i];
    o.require(v == 0.0 || v == 0.25 || v == 0.5, "entries in {0, 0.25, 0.5}");
  }
  const ChoiSpectrum s = min_choi_eigenvalue(j);
  const auto expected = cycle3_eigenvalue_fixture();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 9; ++i)
    worst = std::max(worst, std::abs(s.eigenvalues(i) - expected[static_cast<std::size_t>(i)]));
  o.detail << ", eigenvalue diff " << worst << ", sum " << s.eigenvalues.sum() << ", min " << s.min_eigenvalue;
  o.require(worst <= 0.01, "eigenvalues within 0.01");
  o.require(std::abs(s.eigenvalues.sum() - 3.0) <= 1e-9, "eigenvalue sum 3");
  o.require(s.min_eigenvalue < 0.0 && !s.is_cp, "cp=false");
}

void independent_cp(Outcome& o) {
  double worst_ratio = 0.0;
  int chains = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 5);
    const TransitionMatrix p = testing::random_positive_chain(n, 2026, s);
    const CouplingMatrix c = independent_coupling(p);
    const Distribution pi = stationary_distribution(p);
    const QuantizedCoupling qc = quantized_coupling(c, pi);
    for (const Superoperator* map : {&qc.t, &qc.t_star}) {
      const ChoiSpectrum spec = min_choi_eigenvalue(choi_matrix(*map, ChoiOrder::kBasisFirst));
      const ChoiMatrix j = choi_matrix(*map, ChoiOrder::kBasisFirst);
      const double scale = j.matrix.cwiseAbs().maxCoeff();
      worst_ratio = std::min(worst_ratio, spec.min_eigenvalue / scale);
      o.require(spec.min_eigenvalue >= -1e-9 * scale, "Choi PSD");
    }
    const ChoiSpectrum cs = min_choi_eigenvalue(choi_matrix(c_star_superop(c), ChoiOrder::kBasisFirst));
    o.require(cs.is_cp, "C* Choi PSD");
    const CheckResult block = independent_choi_structure_check(p);
    o.require(block.pass && block.lhs <= 1e-12, "block decomposition");
    ++chains;
  }
  o.detail << chains << " chains, worst lambda_min/|J|_max " << worst_ratio;
}

void grand_structure(Outcome& o) {
  const std::vector<ModelInstance> models = {
      hypercube_model(1),
      hypercube_model(2),
      hypercube_model(3),
      colorings_model(GraphSpec::complete(3), 4),
      hardcore_model(GraphSpec::path(3), 0.5),
      hardcore_model(GraphSpec::path(3), 2.0),
  };
  for (const ModelInstance& m : models) {
    const Distribution pi = stationary_distribution(*m.chain);
    const KrausSet k = kraus_from_grand(*m.rmr, pi);
    QuantizedCoupling qc = quantized_coupling(m.coupling_matrix(), pi);
    const double kraus_res = kraus_condition_residual(k);
    o.require(kraus_res <= 1e-10, m.name + " Kraus condition");
    const ChoiSpectrum spec = verify_cp(qc.t);
    o.require(spec.min_eigenvalue >= -1e-9, m.name + " Choi PSD");
    const CheckResult tp = check_trace_preservation(qc.t_star);
    o.require(tp.pass && tp.lhs <= 1e-10, m.name + " T*(I) = I");
    const CheckResult fp = check_fixed_point(qc.t, pi);
    o.require(fp.pass && fp.lhs <= 1e-10, m.name + " T(Q) = Q");
    const CheckResult km = check_kraus_matches_superop(k, qc.t);
    o.require(km.pass && km.lhs <= 1e-10, m.name + " Kraus route = superoperator route");
    o.detail << m.name << " ok" << (&m == &models.back() ? "" : ", ");
  }
}

void lemma_suite(Outcome& o) {
  const std::vector<ModelInstance> models = {hypercube_model(3), hardcore_model(GraphSpec::path(3), 2.0)};
  for (const ModelInstance& m : models) {
    const CouplingMatrix c = m.coupling_matrix();
    const Eigen::Index n = c.states();
    const Distribution pi = stationary_distribution(*m.chain);
    const Qsample q(pi);
    const Channel t = kraus_from_grand(*m.rmr, pi);

    double lap = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        if (x != y) {
          const CheckResult r = laplacian_preservation_check(c, x, y);
          lap = std::max(lap, r.lhs);
          o.require(r.pass && r.lhs <= 1e-12, m.name + " Laplacian preservation");
        }
    const CheckResult rq = rescaled_qperp_decomposition_check(pi);
    o.require(rq.pass && rq.lhs <= 1e-12, m.name + " rescaled Q-perp");
    for (int k = 0; k <= 20; ++k) {
      const CheckResult ti = coalescence_trace_identity_check(c, k);
      o.require(ti.pass && ti.lhs <= 1e-10, m.name + " trace identity");
    }

    int gentle = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const double eps = 0.01 * static_cast<double>(s + 1);
      Vector v = q.amplitudes() + 0.5 * std::sqrt(eps) * random_unit(n, 11, s);
      const DensityMatrix rho = DensityMatrix::pure(v.normalized());
      const CheckResult g = gentle_measurement_step_check(rho, q, eps);
      if (qperp_overlap(rho.matrix(), q) < eps) ++gentle;
      o.require(g);
    }
    o.require(gentle == 20, m.name + " gentle-measurement preconditions");

    const CoalescenceReport report = coalescence_tail_exact(c, 20);
    std::vector<DensityMatrix> rho0;
    for (std::uint64_t s = 0; s < 50; ++s) rho0.push_back(DensityMatrix::random(n, 17, s));
    o.require(qperp_bound_check(t, pi, report, rho0, m_range(0, 20)));

    for (int k = 1; k <= 10; ++k)
      for (int l = 1; l <= 4; ++l) o.require(check_tail_submultiplicativity(c, k, l));
    o.detail << m.name << " max Laplacian residual " << lap << (&m == &models.back() ? "" : ", ");
  }
}

void main_theorem(Outcome& o) {
  const ModelInstance m = hypercube_model(3);
  const CouplingMatrix c = m.coupling_matrix();
  const Distribution pi = stationary_distribution(*m.chain);
  const Channel t = kraus_from_grand(*m.rmr, pi);
  const CoalescenceReport report = coalescence_tail_exact(c, 60);
  std::vector<DensityMatrix> rho0;
  for (Eigen::Index i = 0; i < 8; ++i) rho0.push_back(DensityMatrix::basis_state(8, i));
  for (std::uint64_t s = 0; s < 20; ++s) rho0.push_back(DensityMatrix::random(8, 23, s));
  o.require(report.t_couple.has_value(), "t_couple resolved");
  o.detail << "t_couple " << report.t_couple.value_or(-1);
  for (const CheckResult& r : main_theorem_check(t, pi, report, rho0, {0.25, 0.04, 0.01})) {
    o.detail << ", " << r.lhs << " <= " << r.rhs;
    o.require(r);
  }
}

CoalescenceReport coupon_mc(unsigned workers) {
  const ModelInstance m = hypercube_model(8, true);
  return coalescence_tail_mc(*m.rmr, {{0, 255}}, {33}, {100000, 2026, workers});
}

void coupon_tail(Outcome& o) {
  const int m_check = static_cast<int>(std::ceil(8.0 * std::log(8.0) + 16.0));
  o.require(m_check == 33, "m = 33");
  const CoalescenceReport mc = coupon_mc(1);
  const double est = mc.tail_at(m_check);
  const double half = mc_half_width(est, mc.samples);
  const double bound = std::exp(-2.0) + 3.0 * half;
  o.detail << "n=8 Pr{tau>33} " << est << " <= " << bound;
  o.require(est <= bound, "n=8 tail bound");

  const CoalescenceReport ex = coalescence_tail_exact(hypercube_model(2).coupling_matrix(), 10);
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double oracle = testing::coupon_tail(2, k);
    worst = std::max({worst, std::abs(ex.tail_at(k) - std::pow(2.0, 1 - k)), std::abs(oracle - std::pow(2.0, 1 - k))});
  }
  o.detail << ", n=2 residual " << worst << ", t_couple " << ex.t_couple.value_or(-1);
  o.require(worst <= 1e-12, "n=2 closed form");
  o.require(ex.t_couple == 3, "n=2 t_couple = 3");
}

RateCheck colorings_rate(unsigned workers) {
  const ModelInstance m = colorings_model(GraphSpec::path(5), 7, true);
  RateOptions opt;
  opt.mode = RateMode::kMonteCarlo;
  opt.samples = 10000;
  opt.seed = 2026;
  opt.workers = workers;
  return contraction_rate_check(m, m_range(5, 70, 5), opt);
}

void rate_envelopes(Outcome& o) {
  const RateCheck col = colorings_rate(1);
  o.require(!col.vacuous, "colorings rate positive");
  o.require(col.check.pass && col.upper_ci_within, "colorings upper CI within envelope");
  double worst = -1.0;
  for (std::size_t i = 0; i < col.m_grid.size(); ++i) worst = std::max(worst, col.report.ci_hi[i] - col.envelope[i]);
  o.detail << "colorings P5 q=7 max(ci_hi - envelope) " << worst;

  const ModelInstance hc = hardcore_model(GraphSpec::path(3), 0.5);
  const RateCheck h = contraction_rate_check(hc, m_range(3, 42, 3), RateOptions{});
  o.require(!h.vacuous, "hardcore rate positive");
  o.require(h.check.pass, "hardcore exact tail within envelope");
  o.detail << ", hardcore P3 l=1/2 max(tail - envelope) " << h.check.lhs;
}

void dilation(Outcome& o) {
  const ModelInstance m = hypercube_model(2);
  const KrausSet k = kraus_from_grand(*m.rmr, *m.stationary);
  const DilationCircuit c = build_dilation(k);
  o.require(c.kappa == 4, "kappa = 4");
  o.require(c.b_identity_residual <= 1e-9, "sum B^T B = 3I");
  double branch = 0.0;
  double fidelity = 1.0;
  double channel = 0.0;
  double acceptance = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vector xi = random_unit(4, 31, s);
    const DecompositionReport d = state_decomposition_check(c, xi);
    branch = std::max({branch, std::abs(d.good_norm - 0.5), std::abs(d.bad_norm - std::sqrt(3.0) / 2.0)});
    fidelity = std::min(fidelity, amplify_and_extract(c, xi, 1).fidelity);
    const DensityMatrix rho = DensityMatrix::random(4, 37, s);
    const Matrix expected = apply_channel(k, rho.matrix()).matrix;
    channel = std::max(channel, max_abs_diff(channel_via_dilation(c, rho, DilationMode::kAmplified).rho, expected));
    const DilationOutput post = channel_via_dilation(c, rho, DilationMode::kPostselect);
    channel = std::max(channel, max_abs_diff(post.rho, expected));
    acceptance = std::max(acceptance, std::abs(post.acceptance - 0.25));
  }
  o.detail << "B residual " << c.b_identity_residual << ", branch residual " << branch << ", min fidelity "
           << fidelity << ", channel residual " << channel << ", acceptance residual " << acceptance;
  o.require(branch <= 1e-10, "branch amplitudes");
  o.require(fidelity >= 1.0 - 1e-9, "fidelity");
  o.require(channel <= 1e-9, "channel equality");
  o.require(acceptance <= 1e-10, "postselect acceptance");
}

void classical_consistency(Outcome& o) {
  const std::vector<ModelInstance> models = {
      hypercube_model(1),
      hypercube_model(2),
      hypercube_model(3),
      cycle_coupling_model(3, 0.5, CycleVariant::kProse),
      cycle_coupling_model(5, 0.3, CycleVariant::kProse),
      colorings_model(GraphSpec::complete(3), 4),
      hardcore_model(GraphSpec::path(3), 0.5),
      hardcore_model(GraphSpec::path(3), 2.0),
  };
  for (const ModelInstance& m : models) {
    const CheckResult b = check_coalescence_bounds_mixing(m.coupling_matrix(), 20);
    o.require(b.pass && b.tolerance <= 1e-10, m.name + " d(m) <= tail");
    const MixingReport r = mixing_report(*m.chain, {1.0 / 8.0, 1.0 / 16.0});
    for (const CheckResult& c : r.bound_checks) o.require(c);
    o.detail << m.name << (&m == &models.back() ? "" : ", ");
  }
}

template <typename T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const T& x, const T& y) {
           return std::memcmp(&x, &y, sizeof(T)) == 0;
         });
}

bool same_report(const CoalescenceReport& a, const CoalescenceReport& b) {
  if (!same_bits(a.tail_max, b.tail_max) || !same_bits(a.ci_hi, b.ci_hi) || !same_bits(a.ci_half, b.ci_half)) return false;
  if (a.pairs != b.pairs || a.pair_tails.size() != b.pair_tails.size() || a.t_couple != b.t_couple) return false;
  for (std::size_t i = 0; i < a.pair_tails.size(); ++i)
    if (!same_bits(a.pair_tails[i], b.pair_tails[i])) return false;
  return true;
}

void determinism(Outcome& o) {
  const CoalescenceReport c1 = coupon_mc(1);
  o.require(same_report(c1, coupon_mc(1)), "coupon repeat");
  o.require(same_report(c1, coupon_mc(4)), "coupon workers 1 vs 4");
  const RateCheck r1 = colorings_rate(1);
  const RateCheck r2 = colorings_rate(1);
  const RateCheck r4 = colorings_rate(4);
  o.require(same_report(r1.report, r2.report) && r1.check.lhs == r2.check.lhs, "colorings repeat");
  o.require(same_report(r1.report, r4.report) && r1.check.lhs == r4.check.lhs, "colorings workers 1 vs 4");
  o.detail << "coupon tail and colorings rate reports compared bitwise";
}

}  // namespace
}  // namespace qcoupling

int main() {
  using qcoupling::Outcome;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"cycle3_choi_fixture", qcoupling::cycle3_fixture},
      {"independent_coupling_cp", qcoupling::independent_cp},
      {"grand_coupling_structure", qcoupling::grand_structure},
      {"lemma_suite", qcoupling::lemma_suite},
      {"main_theorem", qcoupling::main_theorem},
      {"coupon_collector_tail", qcoupling::coupon_tail},
      {"model_rate_envelopes", qcoupling::rate_envelopes},
      {"dilation", qcoupling::dilation},
      {"classical_consistency", qcoupling::classical_consistency},
      {"determinism", qcoupling::determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", ++index, name.c_str(), seconds,
                o.detail.str().c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
