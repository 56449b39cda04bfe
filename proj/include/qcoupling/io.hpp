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
#include <variant>
#include <vector>

#include "qcoupling/chain.hpp"
#include "qcoupling/common.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/evolve.hpp"
#include "qcoupling/quantize.hpp"

namespace qcoupling::io {

/// { "labels": [...], "P": [[...]] } with P[i][j] = Pr(j -> i).
std::string chain_to_json(const TransitionMatrix& p);
/// Parses and validates a chain; errors name the offending field or parse position.
TransitionMatrix chain_from_json(const std::string& text);

/// { "kind": "dense", "labels": [...], "C": [[...]] } over pair indices.
std::string coupling_to_json(const CouplingMatrix& c);
/// { "kind": "rmr", "labels": [...], "R": [{"label", "prob"}], "f": [[successor per r] per state] }.
std::string rmr_to_json(const RandomMappingRep& rmr);

using CouplingInput = std::variant<CouplingMatrix, RandomMappingRep>;
/// Reads either coupling format. A dense coupling without `base` takes its chain from
/// the diagonal-start columns.
CouplingInput coupling_from_json(const std::string& text, const std::optional<TransitionMatrix>& base = std::nullopt);

/// m, tail_max[, tail_ci_hi]
std::string coalescence_csv(const CoalescenceReport& report);
/// m, trace_distance, qperp_overlap, classical_tail_max, qperp_bound, theorem_envelope
std::string trace_csv(const ConvergenceTrace& trace);

std::string choi_to_json(const ChoiMatrix& j, const std::optional<ChoiSpectrum>& spectrum = std::nullopt);
/// Header row "# rows,cols,order", then one matrix row per line.
std::string choi_to_csv(const ChoiMatrix& j);
std::string kraus_to_json(const KrausSet& kraus);

/// [{ "name", "lhs", "rhs", "tolerance", "pass", "provenance", "notes" }]
std::string checks_to_json(const std::vector<CheckResult>& checks);

/// Deterministic text for doubles (round-trip precision).
std::string format_double(double v);

/// 64-bit FNV-1a as 16 hex digits.
std::string content_hash(const std::string& content);

std::string read_file(const std::string& path);
/// Throws kInvalidInput when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace qcoupling::io
