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

#include <gtest/gtest.h>

#include <cmath>

#include "qcoupling/models.hpp"
#include "support.hpp"

namespace qcoupling {
namespace {

struct ModelSetup {
  ModelInstance model;
  Distribution pi;
  Channel channel;
  CouplingMatrix coupling;
};

ModelSetup setup(const std::string& name) {
  ModelInstance m = model_from_name(name);
  Distribution pi = *m.stationary;
  KrausSet k = kraus_from_grand(*m.rmr, pi);
  CouplingMatrix c = m.coupling_matrix();
  return {std::move(m), pi, Channel(std::move(k)), std::move(c)};
}

TEST(TraceDistance, Oracles) {
  const DensityMatrix a = DensityMatrix::basis_state(2, 0);
  EXPECT_EQ(trace_distance(a, a), 0.0);
  EXPECT_NEAR(trace_distance(a, DensityMatrix::basis_state(2, 1)), 1.0, 1e-15);
  Matrix r = Matrix::Zero(2, 2);
  r.diagonal() << 0.7, 0.3;
  EXPECT_NEAR(trace_distance(r, Matrix::Identity(2, 2) / 2.0), 0.2, 1e-15);
}

TEST(Qsample, Amplitudes) {
  EXPECT_NEAR(Qsample(Distribution::uniform(2)).amplitudes()(0), 1.0 / std::sqrt(2.0), 1e-15);
  const Qsample cube(Distribution::uniform(8));
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(cube.amplitudes()(i), std::pow(2.0, -1.5), 1e-15);
  const ModelInstance h = hardcore_model(GraphSpec::path(3), 2.0);
  const double w[] = {1, 2, 2, 2, 4};
  const Qsample q(*h.stationary);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(q.amplitudes()(i), std::sqrt(w[i] / 11.0), 1e-14);
}

TEST(EvolveTrace, FixedPointStaysPut) {
  const ModelSetup s = setup("hypercube3");
  const Qsample q(s.pi);
  const ConvergenceTrace t = evolve_trace(s.channel, q.state(), q, 10);
  for (double d : t.trace_distance) EXPECT_LE(d, 1e-12);
}

TEST(EvolveTrace, HypercubeBasisStartConverges) {
  const ModelSetup s = setup("hypercube3");
  const Qsample q(s.pi);
  const ConvergenceTrace t = evolve_trace(s.channel, DensityMatrix::basis_state(8, 0), q, 40);
  EXPECT_LT(t.trace_distance.back(), 1e-4);
  EXPECT_TRUE(t.distance_non_increasing);
}

TEST(EvolveTrace, HardcoreMixedStartOverlapVanishes) {
  const ModelSetup s = setup("hardcore-P3-l2");
  const Qsample q(s.pi);
  const ConvergenceTrace t = evolve_trace(s.channel, DensityMatrix::maximally_mixed(5), q, 200);
  EXPECT_LT(t.qperp_overlap.back(), 1e-6);
}

TEST(EvolveTrace, BoundsAttached) {
  const ModelSetup s = setup("hypercube2");
  const Qsample q(s.pi);
  const CoalescenceReport r = coalescence_tail_exact(s.coupling, 10);
  const ConvergenceTrace t = evolve_trace(s.channel, DensityMatrix::basis_state(4, 1), q, 10, &r);
  ASSERT_TRUE(t.has_bounds);
  EXPECT_NEAR(t.pi_star, 0.25, 1e-15);
  for (std::size_t i = 0; i < t.m.size(); ++i) {
    EXPECT_NEAR(t.qperp_bound[i], t.classical_tail_max[i] / 0.25, 1e-12);
    EXPECT_NEAR(t.theorem_envelope[i], std::sqrt(t.qperp_bound[i]), 1e-12);
  }
}

TEST(EvolveTrace, UnverifiedChannelRejected) {
  const ModelInstance m = cycle_coupling_model(3, 0.5, CycleVariant::kPrinted);
  const Superoperator s = c_star_superop(*m.coupling, false);
  EXPECT_THROW(evolve_trace(Channel(s), DensityMatrix::maximally_mixed(3), Qsample(Distribution::uniform(3)), 2), Error);
}

TEST(Laplacian, HypercubeOneCoalescesToZero) {
  const CouplingMatrix c = hypercube_model(1).coupling_matrix();
  const CheckResult r = laplacian_preservation_check(c, 0, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.lhs, 1e-15);
}

TEST(Laplacian, HypercubeTwoAndIndependent) {
  EXPECT_TRUE(laplacian_preservation_check(hypercube_model(2).coupling_matrix(), 0, 3).pass);
  const CouplingMatrix c = independent_coupling(testing::random_positive_chain(3, 4, 0));
  for (Eigen::Index x = 0; x < 3; ++x)
    for (Eigen::Index y = 0; y < 3; ++y)
      if (x != y) {
        EXPECT_TRUE(laplacian_preservation_check(c, x, y).pass);
      }
}

TEST(Laplacian, EdgeLaplacianShape) {
  const Matrix l = edge_laplacian(2, 0, 1);
  Matrix expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  EXPECT_LE(max_abs_diff(l, expected), 1e-15);
}

TEST(RescaledQperp, Oracles) {
  EXPECT_TRUE(rescaled_qperp_decomposition_check(Distribution::uniform(2)).pass);
  EXPECT_TRUE(rescaled_qperp_decomposition_check(Distribution::uniform(1)).pass);
  EXPECT_TRUE(rescaled_qperp_decomposition_check(stationary_distribution(testing::random_positive_chain(3, 8, 1))).pass);
}

TEST(TraceIdentity, Oracles) {
  const CouplingMatrix h2 = hypercube_model(2).coupling_matrix();
  EXPECT_TRUE(coalescence_trace_identity_check(h2, 0).pass);
  const CheckResult c3 = coalescence_trace_identity_check(h2, 3);
  EXPECT_TRUE(c3.pass);
  const CouplingMatrix k3 = colorings_model(GraphSpec::complete(3), 4).coupling_matrix();
  for (int m = 0; m <= 10; ++m) EXPECT_TRUE(coalescence_trace_identity_check(k3, m).pass) << m;
}

TEST(QperpBound, HypercubeThreeRandomStates) {
  const ModelSetup s = setup("hypercube3");
  const CoalescenceReport r = coalescence_tail_exact(s.coupling, 20);
  std::vector<DensityMatrix> rho0;
  for (std::uint64_t k = 0; k < 50; ++k) rho0.push_back(DensityMatrix::random(8, 21, k));
  rho0.push_back(Qsample(s.pi).state());
  std::vector<int> grid;
  for (int m = 0; m <= 20; ++m) grid.push_back(m);
  EXPECT_TRUE(qperp_bound_check(s.channel, s.pi, r, rho0, grid).pass);
}

TEST(QperpBound, BeyondCoalescenceHypercubeOne) {
  const ModelSetup s = setup("hypercube1");
  const CoalescenceReport r = coalescence_tail_exact(s.coupling, 5);
  const CheckResult c = qperp_bound_check(s.channel, s.pi, r, {DensityMatrix::basis_state(2, 0)}, {2, 3, 4});
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.lhs, 1e-10);
}

TEST(MainTheorem, StepsArithmetic) {
  EXPECT_EQ(theorem_steps(0.01, 0.125, 7), 35);
  EXPECT_EQ(theorem_steps(0.25, 0.125, 1), 3);
}

TEST(MainTheorem, HypercubeThreeBasisStates) {
  const ModelSetup s = setup("hypercube3");
  const CoalescenceReport r = coalescence_tail_exact(s.coupling, 30);
  std::vector<DensityMatrix> rho0;
  for (Eigen::Index i = 0; i < 8; ++i) rho0.push_back(DensityMatrix::basis_state(8, i));
  rho0.push_back(Qsample(s.pi).state());
  for (const CheckResult& c : main_theorem_check(s.channel, s.pi, r, rho0, {0.25, 0.04, 0.01})) EXPECT_TRUE(c.pass) << c.notes.front();
}

TEST(GentleMeasurement, Oracles) {
  const Qsample q(Distribution::uniform(2));
  const CheckResult at_q = gentle_measurement_step_check(q.state(), q, 0.01);
  EXPECT_TRUE(at_q.pass);
  EXPECT_LE(at_q.lhs, 1e-15);

  const double delta = 0.01;
  Vector orth(2);
  orth << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const DensityMatrix rho((1 - delta) * q.projector() + delta * orth * orth.transpose());
  const CheckResult two = gentle_measurement_step_check(rho, q, 0.011);
  EXPECT_TRUE(two.pass);
  EXPECT_NEAR(two.lhs, 2 * delta, 1e-12);

  const CheckResult bad = gentle_measurement_step_check(DensityMatrix::basis_state(2, 0), q, 0.04);
  EXPECT_FALSE(bad.pass);
}

TEST(GentleMeasurement, RandomNearbyStates) {
  const Qsample q(*hardcore_model(GraphSpec::path(3), 2.0).stationary);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const DensityMatrix rho(0.97 * q.projector() + 0.03 * DensityMatrix::random(5, 2, k).matrix());
    ASSERT_LT(qperp_overlap(rho.matrix(), q), 0.04);
    EXPECT_TRUE(gentle_measurement_step_check(rho, q, 0.04).pass);
  }
}

TEST(Projectors, ReducingExpandingAndStability) {
  const ModelSetup s = setup("hardcore-P3-l2");
  const Qsample q(s.pi);
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (std::uint64_t k = 0; k < 3; ++k)
    pairs.emplace_back(DensityMatrix::random(5, 1, k).matrix(), DensityMatrix::random(5, 1, 10 + k).matrix());
  EXPECT_TRUE(reducing_projector_check(s.channel, q, pairs, 15).pass);
  const QuantizedCoupling qc = quantized_coupling(s.coupling, s.pi);
  const CoalescenceReport r = coalescence_tail_exact(s.coupling, 400);
  EXPECT_TRUE(expanding_projector_check(qc.t_star, q, r).pass);
  EXPECT_TRUE(fixed_point_stability_check(s.channel, q).pass);
}

}  // namespace
}  // namespace qcoupling
