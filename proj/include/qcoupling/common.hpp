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

#include <stdexcept>
#include <string>
#include <vector>

namespace qcoupling {

enum class ErrorKind {
  kInvalidInput,    // malformed or out-of-contract input
  kNotErgodic,      // chain is reducible or periodic
  kGuardExceeded,   // exact computation would exceed the configured size cap
  kNotResolved,     // a search or threshold was not reached within its range
  kUnverified,      // operation requires a CP-verified map
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Outcome of a single mathematical check, serialized into run summaries.
struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;  // where the bound comes from
  std::vector<std::string> notes;
};

/// Default tolerances.
namespace tol {
inline constexpr double kInput = 1e-12;
inline constexpr double kComputed = 1e-10;
}  // namespace tol

}  // namespace qcoupling
