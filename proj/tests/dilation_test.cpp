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

#include "qcoupling/dilation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qcoupling/models.hpp"
#include "qcoupling/rng.hpp"

namespace qcoupling {
namespace {

Vector random_unit(Eigen::Index d, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
  return v.normalized();
}

KrausSet hypercube_kraus(int n) {
  const ModelInstance m = hypercube_model(n);
  return kraus_from_grand(*m.rmr, *m.stationary);
}

// Two-operator channel A_0 = cos(a) R, A_1 = sin(a) I with R a rotation.
KrausSet two_kraus() {
  KrausSet k;
  k.dim = 2;
  Matrix r(2, 2);
  r << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  k.ops = {std::cos(0.7) * r, std::sin(0.7) * Matrix::Identity(2, 2)};
  k.labels = {"rotate", "stay"};
  return k;
}

TEST(Completion, ZeroAndIdentity) {
  const BlockEncoding z = unitary_completion(Matrix::Zero(2, 2));
  Matrix swap = Matrix::Zero(4, 4);
  swap.topRightCorner(2, 2) = Matrix::Identity(2, 2);
  swap.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
  EXPECT_LE(max_abs_diff(z.unitary, swap), 1e-15);

  const BlockEncoding id = unitary_completion(Matrix::Identity(2, 2));
  Matrix refl = Matrix::Identity(4, 4);
  refl.bottomRightCorner(2, 2) *= -1.0;
  EXPECT_LE(max_abs_diff(id.unitary, refl), 1e-15);
}

TEST(Completion, RandomContraction) {
  StreamRng rng(4, 0);
  Matrix a(3, 3);
  for (Eigen::Index i = 0; i < 9; ++i) a.data()[i] = rng.normal();
  a /= 1.0001 * spectral_norm(a);
  const BlockEncoding u = unitary_completion(a);
  EXPECT_LE(max_abs_diff(u.unitary.transpose() * u.unitary, Matrix::Identity(6, 6)), 1e-10);
  EXPECT_LE(max_abs_diff(u.a(), a), 1e-12);
}

TEST(Completion, RejectsExpansion) {
  EXPECT_THROW(unitary_completion(1.1 * Matrix::Identity(2, 2)), Error);
}

TEST(Build, SingleUnitaryKraus) {
  KrausSet k;
  k.dim = 2;
  Matrix r(2, 2);
  r << 0, 1, 1, 0;
  k.ops = {r};
  const DilationCircuit c = build_dilation(k);
  EXPECT_EQ(c.kappa, 1);
  EXPECT_LE(c.blocks[0].b().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(c.b_identity_residual, 1e-9);
}

TEST(Build, HypercubeTwoBIdentity) {
  const DilationCircuit c = build_dilation(hypercube_kraus(2));
  EXPECT_EQ(c.kappa, 4);
  EXPECT_LE(c.b_identity_residual, 1e-9);
  EXPECT_LE(max_abs_diff(c.w.transpose() * c.w, Matrix::Identity(32, 32)), 1e-10);
}

TEST(Build, TwoKrausBIdentity) {
  EXPECT_LE(build_dilation(two_kraus()).b_identity_residual, 1e-9);
}

TEST(Build, RejectsNonKraus) {
  KrausSet k;
  k.dim = 2;
  k.ops = {0.5 * Matrix::Identity(2, 2)};
  EXPECT_THROW(build_dilation(k), Error);
}

TEST(Decomposition, UnitaryChannelFullBranch) {
  KrausSet k;
  k.dim = 2;
  k.ops = {Matrix::Identity(2, 2)};
  const DecompositionReport r = state_decomposition_check(build_dilation(k), random_unit(2, 1, 0));
  EXPECT_TRUE(r.check.pass);
  EXPECT_NEAR(r.good_norm, 1.0, 1e-12);
}

TEST(Decomposition, HypercubeBranchNormsIndependentOfInput) {
  const DilationCircuit c = build_dilation(hypercube_kraus(2));
  Vector e0 = Vector::Zero(4);
  e0(0) = 1.0;
  const DecompositionReport base = state_decomposition_check(c, e0);
  EXPECT_TRUE(base.check.pass);
  EXPECT_NEAR(base.good_norm, 0.5, 1e-12);
  EXPECT_NEAR(base.bad_norm, std::sqrt(3.0) / 2.0, 1e-12);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DecompositionReport r = state_decomposition_check(c, random_unit(4, 9, s));
    EXPECT_TRUE(r.check.pass);
    EXPECT_NEAR(r.good_norm, base.good_norm, 1e-10);
    EXPECT_NEAR(r.bad_norm, base.bad_norm, 1e-10);
  }
  EXPECT_THROW(state_decomposition_check(c, 2.0 * e0), Error);
}

TEST(Amplify, KappaFourOneIteration) {
  const DilationCircuit c = build_dilation(hypercube_kraus(2));
  EXPECT_GE(amplify_and_extract(c, random_unit(4, 2, 0), 1).fidelity, 1.0 - 1e-9);
}

TEST(Amplify, KappaOneNoIterations) {
  KrausSet k;
  k.dim = 2;
  k.ops = {Matrix::Identity(2, 2)};
  EXPECT_NEAR(amplify_and_extract(build_dilation(k), random_unit(2, 3, 0), 0).fidelity, 1.0, 1e-12);
}

TEST(Amplify, KappaTwoFollowsRotation) {
  const DilationCircuit c = build_dilation(two_kraus());
  const double theta = std::asin(1.0 / std::sqrt(2.0));
  const Vector xi = random_unit(2, 5, 0);
  for (int l = 0; l <= 3; ++l) {
    const double fidelity = amplify_and_extract(c, xi, l).fidelity;
    EXPECT_NEAR(std::sqrt(fidelity), std::abs(std::sin((2 * l + 1) * theta)), 1e-10) << l;
  }
  EXPECT_THROW(amplify_and_extract(c, xi, -1), Error);
}

TEST(ExactIterations, List) {
  EXPECT_EQ(exact_iterations(1), 0);
  EXPECT_EQ(exact_iterations(4), 1);
  EXPECT_FALSE(exact_iterations(2).has_value());
}

TEST(Channel, DilationMatchesKraus) {
  const KrausSet k = hypercube_kraus(2);
  const DilationCircuit c = build_dilation(k);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = DensityMatrix::random(4, 7, s);
    const Matrix expected = apply_channel(k, rho.matrix()).matrix;
    const DilationOutput amp = channel_via_dilation(c, rho, DilationMode::kAmplified);
    EXPECT_LE(max_abs_diff(amp.rho, expected), 1e-9);
    const DilationOutput post = channel_via_dilation(c, rho, DilationMode::kPostselect);
    EXPECT_LE(max_abs_diff(post.rho, expected), 1e-9);
    EXPECT_NEAR(post.acceptance, 0.25, 1e-10);
  }
}

TEST(Channel, IdentityChannel) {
  KrausSet k;
  k.dim = 3;
  k.ops = {Matrix::Identity(3, 3)};
  const DensityMatrix rho = DensityMatrix::random(3, 1, 1);
  EXPECT_LE(max_abs_diff(channel_via_dilation(build_dilation(k), rho, DilationMode::kAmplified).rho, rho.matrix()), 1e-12);
}

TEST(Channel, AmplifiedNeedsExactSchedule) {
  const DilationCircuit c = build_dilation(two_kraus());
  EXPECT_THROW(channel_via_dilation(c, DensityMatrix::maximally_mixed(2), DilationMode::kAmplified), Error);
  EXPECT_NO_THROW(channel_via_dilation(c, DensityMatrix::maximally_mixed(2), DilationMode::kPostselect));
}

TEST(Guard, LargeDilationRejected) {
  try {
    build_dilation(hypercube_kraus(8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGuardExceeded);
  }
}

}  // namespace
}  // namespace qcoupling
