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

#include "qcoupling/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcoupling {

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kCStar: return "C*";
    case MapKind::kTStar: return "T*";
    case MapKind::kT: return "T";
    case MapKind::kGeneric: return "generic";
  }
  return "generic";
}

std::string to_string(CpStatus status) {
  switch (status) {
    case CpStatus::kVerified: return "verified";
    case CpStatus::kFailed: return "failed";
    case CpStatus::kUnchecked: return "unchecked";
  }
  return "unchecked";
}

std::string to_string(ChoiOrder order) {
  return order == ChoiOrder::kMapFirst ? "map-factor-first" : "basis-factor-first";
}

Matrix Superoperator::apply(const Matrix& m) const {
  if (m.rows() != dim || m.cols() != dim) throw Error(ErrorKind::kInvalidInput, "superoperator: dimension mismatch");
  return unvec(matrix * vec(m), dim);
}

Superoperator Superoperator::adjoint(MapKind adjoint_kind) const {
  Superoperator out = *this;
  out.matrix = matrix.transpose();
  out.kind = adjoint_kind;
  out.provenance = provenance + " (adjoint)";
  return out;
}

Superoperator c_star_superop(const CouplingMatrix& c, bool require_valid) {
  if (require_valid) {
    const CouplingValidation v = validate_coupling(c);
    if (!v.valid) throw Error(ErrorKind::kInvalidInput, "C* needs a valid coupling: " + v.violations.front());
  }
  const Eigen::Index n = c.states();
  Superoperator s;
  s.dim = n;
  s.kind = MapKind::kCStar;
  s.provenance = "coupling";
  s.matrix = Matrix::Zero(n * n, n * n);
  // Term c |x'⟩⟨x| • |y⟩⟨y'| has A = |x'⟩⟨x|, B = |y⟩⟨y'|, so Bᵀ⊗A = |y'⟩⟨y| ⊗ |x'⟩⟨x|.
  for (Eigen::Index col = 0; col < c.entries().outerSize(); ++col) {
    const Eigen::Index x = col / n;
    const Eigen::Index y = col % n;
    for (SparseMatrix::InnerIterator it(c.entries(), col); it; ++it) {
      const Eigen::Index xp = it.row() / n;
      const Eigen::Index yp = it.row() % n;
      s.matrix(yp * n + xp, y * n + x) += it.value();
    }
  }
  return s;
}

QuantizedCoupling quantized_coupling(const CouplingMatrix& c, const Distribution& pi, bool require_valid) {
  const Eigen::Index n = c.states();
  if (pi.size() != n) throw Error(ErrorKind::kInvalidInput, "stationary distribution size mismatch");
  if (pi.min_weight() <= 0.0) throw Error(ErrorKind::kInvalidInput, "quantization needs a strictly positive distribution");

  const Superoperator c_star = c_star_superop(c, require_valid);
  // (D^{-1/2}⊗D^{-1/2}) C* (D^{1/2}⊗D^{1/2}); diagonal index (b*n + a) carries √(π_a π_b).
  Vector scale(n * n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) scale(b * n + a) = std::sqrt(pi[a] * pi[b]);

  QuantizedCoupling out;
  out.t_star.dim = n;
  out.t_star.kind = MapKind::kTStar;
  out.t_star.provenance = "coupling";
  out.t_star.matrix = scale.cwiseInverse().asDiagonal() * c_star.matrix * scale.asDiagonal();
  out.t = out.t_star.adjoint(MapKind::kT);
  out.t.provenance = "coupling";
  return out;
}

KrausSet kraus_from_grand(const RandomMappingRep& rmr, const Distribution& pi) {
  const auto violations = validate_rmr(rmr);
  if (!violations.empty()) throw Error(ErrorKind::kInvalidInput, "invalid random mapping: " + violations.front());
  const Eigen::Index n = rmr.states();
  if (pi.size() != n) throw Error(ErrorKind::kInvalidInput, "stationary distribution size mismatch");
  if (pi.min_weight() <= 0.0) throw Error(ErrorKind::kInvalidInput, "Kraus construction needs a strictly positive distribution");

  KrausSet kraus;
  kraus.dim = n;
  for (std::size_t r = 0; r < rmr.outcomes(); ++r) {
    const double weight = rmr.randomness()[r].prob;
    Matrix op = Matrix::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
      const Eigen::Index fx = rmr.successor(x, r);
      op(x, fx) += std::sqrt(weight * pi[x] / pi[fx]);
    }
    kraus.ops.push_back(std::move(op));
    kraus.labels.push_back(rmr.randomness()[r].label);
  }
  return kraus;
}

Superoperator superop_from_kraus(const KrausSet& kraus, MapKind kind) {
  const Eigen::Index n = kraus.dim;
  Superoperator s;
  s.dim = n;
  s.kind = kind;
  s.provenance = "kraus";
  s.matrix = Matrix::Zero(n * n, n * n);
  // vec(A ρ Aᵀ) = (A ⊗ A) vec(ρ) for real A.
  for (const Matrix& a : kraus.ops) s.matrix += kron(a, a);
  s.cp_status = CpStatus::kVerified;
  return s;
}

ChoiMatrix choi_matrix(const Superoperator& s, ChoiOrder order) {
  const Eigen::Index n = s.dim;
  ChoiMatrix j;
  j.dim = n;
  j.order = order;
  j.matrix = Matrix::Zero(n * n, n * n);
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      const Matrix image = unvec(s.matrix.col(x + n * y), n);  // S(|x⟩⟨y|)
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a) {
          if (order == ChoiOrder::kBasisFirst) j.matrix(x * n + a, y * n + b) = image(a, b);
          else j.matrix(a * n + x, b * n + y) = image(a, b);
        }
    }
  }
  return j;
}

ChoiMatrix tensor_swap(const ChoiMatrix& j) {
  const Eigen::Index n = j.dim;
  ChoiMatrix out;
  out.dim = n;
  out.order = j.order == ChoiOrder::kMapFirst ? ChoiOrder::kBasisFirst : ChoiOrder::kMapFirst;
  out.matrix.resize(n * n, n * n);
  auto swap = [n](Eigen::Index idx) { return (idx % n) * n + idx / n; };
  for (Eigen::Index c = 0; c < n * n; ++c)
    for (Eigen::Index r = 0; r < n * n; ++r) out.matrix(swap(r), swap(c)) = j.matrix(r, c);
  return out;
}

ChoiSpectrum min_choi_eigenvalue(const ChoiMatrix& j, double relative_tolerance) {
  if (asymmetry(j.matrix) > tol::kComputed) throw Error(ErrorKind::kInvalidInput, "Choi matrix is not symmetric");
  ChoiSpectrum spectrum;
  spectrum.eigenvalues = symmetric_eigenvalues(j.matrix);
  spectrum.min_eigenvalue = spectrum.eigenvalues(0);
  spectrum.tolerance = relative_tolerance * max_abs(j.matrix);
  spectrum.is_cp = spectrum.min_eigenvalue >= -spectrum.tolerance;
  return spectrum;
}

ChoiSpectrum verify_cp(Superoperator& s) {
  const ChoiSpectrum spectrum = min_choi_eigenvalue(choi_matrix(s, ChoiOrder::kMapFirst));
  s.cp_status = spectrum.is_cp ? CpStatus::kVerified : CpStatus::kFailed;
  return spectrum;
}

ChannelOutput apply_channel(const Superoperator& s, const Matrix& rho) {
  ChannelOutput out;
  out.matrix = s.apply(rho);
  out.is_state = s.cp_status == CpStatus::kVerified;
  return out;
}

double kraus_condition_residual(const KrausSet& kraus) {
  Matrix sum = Matrix::Zero(kraus.dim, kraus.dim);
  for (const Matrix& a : kraus.ops) sum += a.transpose() * a;
  return max_abs(sum - Matrix::Identity(kraus.dim, kraus.dim));
}

ChannelOutput apply_channel(const KrausSet& kraus, const Matrix& rho) {
  if (rho.rows() != kraus.dim || rho.cols() != kraus.dim) throw Error(ErrorKind::kInvalidInput, "Kraus channel: dimension mismatch");
  ChannelOutput out;
  out.matrix = Matrix::Zero(kraus.dim, kraus.dim);
  for (const Matrix& a : kraus.ops) out.matrix += a * rho * a.transpose();
  out.is_state = kraus_condition_residual(kraus) <= tol::kComputed;
  return out;
}

DensityMatrix apply_channel_state(const std::variant<Superoperator, KrausSet>& map, const DensityMatrix& rho) {
  const ChannelOutput out = std::visit([&](const auto& m) { return apply_channel(m, rho.matrix()); }, map);
  if (!out.is_state) throw Error(ErrorKind::kUnverified, "map is not CP-verified; output is not labeled as a state");
  Matrix sym = 0.5 * (out.matrix + out.matrix.transpose());
  return DensityMatrix(std::move(sym));
}

Eigen::Index kraus_max_sparsity(const KrausSet& kraus) {
  Eigen::Index worst = 0;
  for (const Matrix& a : kraus.ops) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) worst = std::max<Eigen::Index>(worst, (a.row(i).array() != 0.0).count());
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max<Eigen::Index>(worst, (a.col(j).array() != 0.0).count());
  }
  return worst;
}

namespace {

CheckResult residual_check(std::string name, double residual, double tolerance, std::string provenance) {
  CheckResult check;
  check.name = std::move(name);
  check.lhs = residual;
  check.rhs = 0.0;
  check.tolerance = tolerance;
  check.pass = residual <= tolerance;
  check.provenance = std::move(provenance);
  return check;
}

}  // namespace

CheckResult check_trace_preservation(const Superoperator& t_star) {
  const Eigen::Index n = t_star.dim;
  const Matrix identity = Matrix::Identity(n, n);
  return residual_check("trace_preservation", max_abs(t_star.apply(identity) - identity), tol::kComputed,
                        "T*(I) = I");
}

CheckResult check_fixed_point(const Superoperator& t, const Distribution& pi) {
  const Matrix q = Qsample(pi).projector();
  return residual_check("qsample_fixed_point", max_abs(t.apply(q) - q), tol::kComputed,
                        "T(|sqrt pi><sqrt pi|) = |sqrt pi><sqrt pi|");
}

CheckResult check_cstar_fixes_stationary(const Superoperator& c_star, const Distribution& pi) {
  const Matrix d = pi.weights().asDiagonal();
  return residual_check("cstar_fixes_diag_pi", max_abs(c_star.apply(d) - d), tol::kComputed, "C*(D) = D");
}

CheckResult check_kraus_condition(const KrausSet& kraus) {
  return residual_check("kraus_condition", kraus_condition_residual(kraus), tol::kComputed, "sum_r T_r^T T_r = I");
}

CheckResult check_kraus_matches_superop(const KrausSet& kraus, const Superoperator& t) {
  const Superoperator from_kraus = superop_from_kraus(kraus);
  return residual_check("kraus_route_equals_superoperator_route", max_abs_diff(from_kraus.matrix, t.matrix),
                        tol::kComputed, "sum_r T_r . T_r^T equals the adjoint of the similarity-transformed C*");
}

CheckResult check_cstar_equals_coupling(const Superoperator& c_star, const CouplingMatrix& c) {
  return residual_check("cstar_matrix_equals_coupling", max_abs_diff(c_star.matrix, c.dense()), tol::kInput,
                        "matrix of C* in the vectorized representation is C");
}

CheckResult independent_choi_structure_check(const TransitionMatrix& chain) {
  const Eigen::Index n = chain.size();
  const Matrix& p = chain.entries();
  const Superoperator c_star = c_star_superop(independent_coupling(chain));
  const ChoiMatrix j = choi_matrix(c_star, ChoiOrder::kMapFirst);

  Matrix decomposition = Matrix::Zero(n * n, n * n);
  bool dominant = true;
  double worst_dominance = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y)
      decomposition += kron(p.col(x) * p.col(y).transpose(), matrix_unit(n, x, y));
    const Matrix block = Matrix(p.col(x).asDiagonal()) - p.col(x) * p.col(x).transpose();
    decomposition += kron(block, matrix_unit(n, x, x));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double off = block.row(i).cwiseAbs().sum() - std::abs(block(i, i));
      const double deficit = off - block(i, i);
      worst_dominance = std::max(worst_dominance, deficit);
      if (block(i, i) < -tol::kInput || deficit > tol::kInput) dominant = false;
    }
  }

  CheckResult check = residual_check("independent_choi_decomposition", max_abs_diff(j.matrix, decomposition),
                                     tol::kInput,
                                     "J(C*) = sum |p_x><p_y| (x) |x><y| + sum (diag p_x - p_x p_x^T) (x) |x><x|");
  std::ostringstream os;
  os << "blocks diagonally dominant: " << (dominant ? "yes" : "no") << " (worst deficit " << worst_dominance << ")";
  check.notes.push_back(os.str());
  check.pass = check.pass && dominant;
  return check;
}

}  // namespace qcoupling
