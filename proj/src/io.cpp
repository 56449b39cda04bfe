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

#include "qcoupling/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcoupling::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "malformed JSON at byte " << e.byte << ": " << e.what();
    throw Error(ErrorKind::kInvalidInput, os.str());
  }
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::kInvalidInput, where + ": missing field '" + key + "'");
  return j.at(key);
}

Matrix read_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::kInvalidInput, name + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string rname = name + "[" + std::to_string(i) + "]";
    if (!row.is_array()) throw Error(ErrorKind::kInvalidInput, rname + ": expected an array");
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::kInvalidInput, rname + ": expected " + std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw Error(ErrorKind::kInvalidInput, rname + "[" + std::to_string(k) + "]: expected a number");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> read_labels(const json& j, Eigen::Index n) {
  std::vector<std::string> labels;
  if (!j.contains("labels")) {
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
  }
  const json& l = j.at("labels");
  if (!l.is_array()) throw Error(ErrorKind::kInvalidInput, "labels: expected an array of strings");
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!l[i].is_string()) throw Error(ErrorKind::kInvalidInput, "labels[" + std::to_string(i) + "]: expected a string");
    labels.push_back(l[i].get<std::string>());
  }
  return labels;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string chain_to_json(const TransitionMatrix& p) {
  json j;
  j["labels"] = p.labels();
  j["P"] = matrix_json(p.entries());
  return j.dump(1) + "\n";
}

TransitionMatrix chain_from_json(const std::string& text) {
  const json j = parse(text);
  const Matrix p = read_matrix(field(j, "P", "chain"), "P");
  if (p.rows() != p.cols()) throw Error(ErrorKind::kInvalidInput, "P: matrix must be square");
  const auto labels = read_labels(j, p.rows());
  if (static_cast<Eigen::Index>(labels.size()) != p.rows())
    throw Error(ErrorKind::kInvalidInput, "labels: count does not match the size of P");
  TransitionMatrix chain(labels, p);
  const ChainValidation v = validate_chain(chain);
  if (!v.stochastic) throw Error(ErrorKind::kInvalidInput, "P: " + v.violations.front());
  return chain;
}

std::string coupling_to_json(const CouplingMatrix& c) {
  json j;
  j["kind"] = "dense";
  j["labels"] = c.base().labels();
  j["C"] = matrix_json(c.dense());
  return j.dump(1) + "\n";
}

std::string rmr_to_json(const RandomMappingRep& rmr) {
  json j;
  j["kind"] = "rmr";
  j["labels"] = rmr.labels();
  json r = json::array();
  for (const auto& o : rmr.randomness()) r.push_back({{"label", o.label}, {"prob", o.prob}});
  j["R"] = r;
  json f = json::array();
  for (Eigen::Index x = 0; x < rmr.states(); ++x) {
    json row = json::array();
    for (std::size_t k = 0; k < rmr.outcomes(); ++k) row.push_back(rmr.successor(x, k));
    f.push_back(std::move(row));
  }
  j["f"] = f;
  return j.dump(1) + "\n";
}

CouplingInput coupling_from_json(const std::string& text, const std::optional<TransitionMatrix>& base) {
  const json j = parse(text);
  const json& kind = field(j, "kind", "coupling");
  if (!kind.is_string()) throw Error(ErrorKind::kInvalidInput, "kind: expected \"dense\" or \"rmr\"");
  if (kind == "dense") {
    const Matrix c = read_matrix(field(j, "C", "coupling"), "C");
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(c.rows()))));
    if (c.rows() != c.cols() || n * n != c.rows()) throw Error(ErrorKind::kInvalidInput, "C: must be N^2 x N^2");
    std::optional<TransitionMatrix> chain = base;
    if (!chain) {
      Matrix p = Matrix::Zero(n, n);
      for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index x2 = 0; x2 < n; ++x2)
          for (Eigen::Index y2 = 0; y2 < n; ++y2) p(x2, x) += c(pair_index(x2, y2, n), pair_index(x, x, n));
      chain = TransitionMatrix(read_labels(j, n), p);
    }
    if (chain->size() != n) throw Error(ErrorKind::kInvalidInput, "C: size does not match the base chain");
    return CouplingMatrix(*chain, c.sparseView());
  }
  if (kind == "rmr") {
    const json& r = field(j, "R", "coupling");
    const json& f = field(j, "f", "coupling");
    if (!r.is_array() || r.empty()) throw Error(ErrorKind::kInvalidInput, "R: expected a non-empty array");
    if (!f.is_array() || f.empty()) throw Error(ErrorKind::kInvalidInput, "f: expected a non-empty array");
    std::vector<RandomOutcome> outcomes;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const std::string where = "R[" + std::to_string(k) + "]";
      const json& p = field(r[k], "prob", where);
      if (!p.is_number()) throw Error(ErrorKind::kInvalidInput, where + ".prob: expected a number");
      std::string label = std::to_string(k);
      if (r[k].contains("label")) label = r[k]["label"].is_string() ? r[k]["label"].get<std::string>() : r[k]["label"].dump();
      outcomes.push_back({label, p.get<double>()});
    }
    std::vector<std::int32_t> table;
    for (std::size_t x = 0; x < f.size(); ++x) {
      const std::string where = "f[" + std::to_string(x) + "]";
      if (!f[x].is_array() || f[x].size() != outcomes.size())
        throw Error(ErrorKind::kInvalidInput, where + ": expected " + std::to_string(outcomes.size()) + " successors");
      for (std::size_t k = 0; k < f[x].size(); ++k) {
        if (!f[x][k].is_number_integer())
          throw Error(ErrorKind::kInvalidInput, where + "[" + std::to_string(k) + "]: expected an integer");
        table.push_back(f[x][k].get<std::int32_t>());
      }
    }
    const auto n = static_cast<Eigen::Index>(f.size());
    auto labels = read_labels(j, n);
    if (static_cast<Eigen::Index>(labels.size()) != n) throw Error(ErrorKind::kInvalidInput, "labels: count does not match f");
    RandomMappingRep rmr(labels, outcomes, table, base);
    const auto violations = validate_rmr(rmr);
    if (!violations.empty()) throw Error(ErrorKind::kInvalidInput, "rmr: " + violations.front());
    return rmr;
  }
  throw Error(ErrorKind::kInvalidInput, "kind: expected \"dense\" or \"rmr\", got " + kind.dump());
}

std::string coalescence_csv(const CoalescenceReport& report) {
  const bool mc = report.mode == TailMode::kMonteCarlo;
  std::ostringstream os;
  os << (mc ? "m,tail_max,tail_ci_hi\n" : "m,tail_max\n");
  for (std::size_t i = 0; i < report.m.size(); ++i) {
    os << report.m[i] << ',' << format_double(report.tail_max[i]);
    if (mc) os << ',' << format_double(report.ci_hi[i]);
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream os;
  os << "m,trace_distance,qperp_overlap,classical_tail_max,qperp_bound,theorem_envelope\n";
  const double nan = std::nan("");
  for (std::size_t i = 0; i < trace.m.size(); ++i) {
    auto at = [&](const std::vector<double>& v) { return i < v.size() ? v[i] : nan; };
    os << trace.m[i] << ',' << format_double(trace.trace_distance[i]) << ',' << format_double(trace.qperp_overlap[i]) << ','
       << format_double(at(trace.classical_tail_max)) << ',' << format_double(at(trace.qperp_bound)) << ','
       << format_double(at(trace.theorem_envelope)) << '\n';
  }
  return os.str();
}

std::string choi_to_json(const ChoiMatrix& j, const std::optional<ChoiSpectrum>& spectrum) {
  json out;
  out["dim"] = j.dim;
  out["order"] = to_string(j.order);
  out["J"] = matrix_json(j.matrix);
  if (spectrum) {
    out["eigenvalues"] = std::vector<double>(spectrum->eigenvalues.data(), spectrum->eigenvalues.data() + spectrum->eigenvalues.size());
    out["min_eigenvalue"] = spectrum->min_eigenvalue;
    out["tolerance"] = spectrum->tolerance;
    out["is_cp"] = spectrum->is_cp;
  }
  return out.dump(1) + "\n";
}

std::string choi_to_csv(const ChoiMatrix& j) {
  std::ostringstream os;
  os << "# " << j.matrix.rows() << ',' << j.matrix.cols() << ',' << to_string(j.order) << '\n';
  for (Eigen::Index i = 0; i < j.matrix.rows(); ++i) {
    for (Eigen::Index k = 0; k < j.matrix.cols(); ++k) os << (k ? "," : "") << format_double(j.matrix(i, k));
    os << '\n';
  }
  return os.str();
}

std::string kraus_to_json(const KrausSet& kraus) {
  json out;
  out["dim"] = kraus.dim;
  json ops = json::array();
  for (std::size_t k = 0; k < kraus.ops.size(); ++k) {
    json op;
    op["label"] = k < kraus.labels.size() ? kraus.labels[k] : std::to_string(k);
    op["A"] = matrix_json(kraus.ops[k]);
    ops.push_back(std::move(op));
  }
  out["ops"] = ops;
  return out.dump(1) + "\n";
}

std::string checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json j;
    j["name"] = c.name;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    j["provenance"] = c.provenance;
    j["notes"] = c.notes;
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

std::string content_hash(const std::string& content) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : content) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::kInvalidInput, "failed writing " + path);
}

}  // namespace qcoupling::io
