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

#include "qcoupling/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qcoupling/rng.hpp"

namespace qcoupling {

namespace {

int parse_int(const std::string& text, const std::string& what) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    throw Error(ErrorKind::kInvalidInput, "expected an integer for " + what + ", got '" + text + "'");
  return std::stoi(text);
}

double parse_real(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw Error(ErrorKind::kInvalidInput, "expected a number for " + what + ", got '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_dense_allowed(Eigen::Index states, bool mc_only, const std::string& model) {
  if (!mc_only && states > kDenseStateGuard) {
    std::ostringstream os;
    os << model << " has " << states << " states, above the exact guard " << kDenseStateGuard
       << "; request Monte Carlo only";
    throw Error(ErrorKind::kGuardExceeded, os.str());
  }
}

// Enumerates configurations in {0..base-1}^n, first vertex most significant, keeping those accepted by `keep`.
template <typename Keep>
std::vector<std::vector<int>> enumerate_configs(int n, int base, Keep keep) {
  std::vector<std::vector<int>> out;
  std::vector<int> cfg(static_cast<std::size_t>(n), 0);
  while (true) {
    if (keep(cfg)) out.push_back(cfg);
    int pos = n - 1;
    while (pos >= 0 && cfg[static_cast<std::size_t>(pos)] == base - 1) cfg[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++cfg[static_cast<std::size_t>(pos)];
  }
  return out;
}

std::uint64_t encode(const std::vector<int>& cfg, int base) {
  std::uint64_t code = 0;
  for (int v : cfg) code = code * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(v);
  return code;
}

struct Enumerated {
  std::vector<std::vector<int>> configs;
  std::unordered_map<std::uint64_t, std::int32_t> index;
};

Enumerated index_configs(std::vector<std::vector<int>> configs, int base) {
  Enumerated e;
  e.configs = std::move(configs);
  for (std::size_t i = 0; i < e.configs.size(); ++i) e.index.emplace(encode(e.configs[i], base), static_cast<std::int32_t>(i));
  return e;
}

void attach_chain(ModelInstance& m, bool mc_only) {
  if (mc_only) return;
  TransitionMatrix p = m.rmr->chain();
  m.chain = p;
  m.rmr = RandomMappingRep(m.rmr->labels(), m.rmr->randomness(), m.rmr->table(), p);
}

}  // namespace

GraphSpec::GraphSpec(int vertices, std::vector<std::pair<int, int>> edges)
    : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices_ < 1) throw Error(ErrorKind::kInvalidInput, "graph needs at least one vertex");
  if (vertices_ > 20) throw Error(ErrorKind::kInvalidInput, "graph has more than 20 vertices");
  neighbors_.assign(static_cast<std::size_t>(vertices_), {});
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= vertices_ || b >= vertices_) throw Error(ErrorKind::kInvalidInput, "edge endpoint out of range");
    if (a == b) throw Error(ErrorKind::kInvalidInput, "graph must not contain self-loops");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw Error(ErrorKind::kInvalidInput, "graph must not contain repeated edges");
    neighbors_[static_cast<std::size_t>(a)].push_back(b);
    neighbors_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : neighbors_) {
    std::sort(nb.begin(), nb.end());
    max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
  }
  name_ = "G" + std::to_string(vertices_);
}

GraphSpec GraphSpec::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  GraphSpec g(n, e);
  g.name_ = "P" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  GraphSpec g(n, e);
  g.name_ = "K" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::cycle(int n) {
  if (n < 3) throw Error(ErrorKind::kInvalidInput, "cycle graph needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  GraphSpec g(n, e);
  g.name_ = "C" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::parse(const std::string& name) {
  if (name.size() < 2) throw Error(ErrorKind::kInvalidInput, "unknown graph '" + name + "'");
  const int n = parse_int(name.substr(1), "graph size");
  switch (name[0]) {
    case 'P': return path(n);
    case 'K': return complete(n);
    case 'C': return cycle(n);
    default: throw Error(ErrorKind::kInvalidInput, "unknown graph family '" + name.substr(0, 1) + "' (use P, K or C)");
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kHypercube: return "hypercube";
    case ModelKind::kCycle: return "cycle";
    case ModelKind::kColorings: return "colorings";
    case ModelKind::kHardcore: return "hardcore";
  }
  return "unknown";
}

CouplingMatrix ModelInstance::coupling_matrix() const {
  if (coupling) return *coupling;
  if (rmr) return grand_coupling_matrix(*rmr);
  throw Error(ErrorKind::kInvalidInput, "model carries no coupling");
}

double c_met(int max_degree, int q) { return 1.0 - 3.0 * max_degree / static_cast<double>(q); }

double c_hardcore(double lambda, int max_degree) { return (1.0 + lambda * (1.0 - max_degree)) / (1.0 + lambda); }

ModelInstance hypercube_model(int n, bool mc_only) {
  if (n < 1 || n > 20) throw Error(ErrorKind::kInvalidInput, "hypercube dimension must be in [1, 20]");
  const Eigen::Index size = Eigen::Index{1} << n;
  require_dense_allowed(size, mc_only, "hypercube" + std::to_string(n));

  ModelInstance m;
  m.kind = ModelKind::kHypercube;
  m.name = "hypercube" + std::to_string(n);
  m.n = n;
  for (Eigen::Index s = 0; s < size; ++s) {
    std::string label(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if ((s >> (n - 1 - i)) & 1) label[static_cast<std::size_t>(i)] = '1';
    m.labels.push_back(label);
  }
  std::vector<RandomOutcome> r;
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < 2; ++b) r.push_back({"(" + std::to_string(i + 1) + "," + std::to_string(b) + ")", 1.0 / (2.0 * n)});
  std::vector<std::int32_t> table;
  table.reserve(static_cast<std::size_t>(size) * r.size());
  for (Eigen::Index s = 0; s < size; ++s)
    for (int i = 0; i < n; ++i) {
      const Eigen::Index bit = Eigen::Index{1} << (n - 1 - i);
      table.push_back(static_cast<std::int32_t>(s & ~bit));
      table.push_back(static_cast<std::int32_t>(s | bit));
    }
  m.rmr = RandomMappingRep(m.labels, r, table);
  m.stationary = Distribution::uniform(size);
  m.expect_cp = true;
  attach_chain(m, mc_only);
  return m;
}

ModelInstance cycle_coupling_model(int n, double p, CycleVariant variant) {
  if (n < 3) throw Error(ErrorKind::kInvalidInput, "cycle model needs n >= 3");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kInvalidInput, "bias p must lie in [0, 1]");
  const double q = 1.0 - p;
  ModelInstance m;
  m.kind = ModelKind::kCycle;
  m.n = n;
  m.bias_p = p;
  m.variant = variant;
  m.name = "cycle" + std::to_string(n) + (variant == CycleVariant::kPrinted ? "-printed" : "-prose") +
           (p == 0.5 ? "" : "-p" + format_param(p));
  for (int x = 0; x < n; ++x) m.labels.push_back(std::to_string(x));

  auto up = [n](int x) { return (x + 1) % n; };
  auto down = [n](int x) { return (x + n - 1) % n; };
  Matrix chain = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    chain(x, x) += 0.5;
    chain(up(x), x) += p / 2.0;
    chain(down(x), x) += q / 2.0;
  }
  m.chain = TransitionMatrix(m.labels, chain);

  const double offdiag = variant == CycleVariant::kPrinted ? 1.0 : 0.5;
  std::vector<Triplet> trips;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Eigen::Index col = pair_index(x, y, n);
      if (x == y) {
        trips.emplace_back(pair_index(x, x, n), col, 0.5);
        trips.emplace_back(pair_index(up(x), up(x), n), col, p / 2.0);
        trips.emplace_back(pair_index(down(x), down(x), n), col, q / 2.0);
      } else {
        trips.emplace_back(pair_index(up(x), y, n), col, offdiag * p);
        trips.emplace_back(pair_index(down(x), y, n), col, offdiag * q);
        trips.emplace_back(pair_index(x, up(y), n), col, offdiag * p);
        trips.emplace_back(pair_index(x, down(y), n), col, offdiag * q);
      }
    }
  SparseMatrix c(n * n, n * n);
  c.setFromTriplets(trips.begin(), trips.end());
  m.coupling = CouplingMatrix(*m.chain, c);
  m.stationary = Distribution::uniform(n);
  m.marginal_verified = variant == CycleVariant::kProse;
  if (variant == CycleVariant::kPrinted && n == 3 && p == 0.5) m.expect_cp = false;
  return m;
}

ModelInstance colorings_model(const GraphSpec& g, int q, bool mc_only) {
  const int n = g.vertices();
  if (q < 1) throw Error(ErrorKind::kInvalidInput, "number of colors must be positive");
  if (q < g.max_degree() + 2) {
    std::ostringstream os;
    os << "colorings need q >= max degree + 2 (q = " << q << ", max degree = " << g.max_degree() << ")";
    throw Error(ErrorKind::kInvalidInput, os.str());
  }
  double space = std::pow(static_cast<double>(q), n);
  if (space > 1e8) throw Error(ErrorKind::kGuardExceeded, "coloring configuration space above 1e8 entries");

  const auto& nb = g.neighbors();
  auto proper = [&](const std::vector<int>& cfg) {
    for (const auto& [a, b] : g.edges())
      if (cfg[static_cast<std::size_t>(a)] == cfg[static_cast<std::size_t>(b)]) return false;
    return true;
  };
  Enumerated e = index_configs(enumerate_configs(n, q, proper), q);
  if (e.configs.empty()) throw Error(ErrorKind::kInvalidInput, "graph has no proper coloring with the given colors");
  const auto states = static_cast<Eigen::Index>(e.configs.size());

  ModelInstance m;
  m.kind = ModelKind::kColorings;
  m.name = "colorings-" + g.name() + "-q" + std::to_string(q);
  m.n = n;
  m.colors = q;
  m.graph = g;
  require_dense_allowed(states, mc_only, m.name);
  for (const auto& cfg : e.configs) {
    std::string label;
    for (std::size_t v = 0; v < cfg.size(); ++v) {
      if (q > 9 && v > 0) label += '-';
      label += std::to_string(cfg[v] + 1);
    }
    m.labels.push_back(label);
  }
  std::vector<RandomOutcome> r;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < q; ++k)
      r.push_back({"(" + std::to_string(v) + "," + std::to_string(k + 1) + ")", 1.0 / (static_cast<double>(q) * n)});
  std::vector<std::int32_t> table;
  table.reserve(static_cast<std::size_t>(states) * r.size());
  for (std::size_t s = 0; s < e.configs.size(); ++s) {
    std::vector<int> cfg = e.configs[s];
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < q; ++k) {
        bool allowable = true;
        for (int w : nb[static_cast<std::size_t>(v)])
          if (cfg[static_cast<std::size_t>(w)] == k) allowable = false;
        if (!allowable) {
          table.push_back(static_cast<std::int32_t>(s));
          continue;
        }
        const int old = cfg[static_cast<std::size_t>(v)];
        cfg[static_cast<std::size_t>(v)] = k;
        table.push_back(e.index.at(encode(cfg, q)));
        cfg[static_cast<std::size_t>(v)] = old;
      }
  }
  m.rmr = RandomMappingRep(m.labels, r, table);
  m.stationary = Distribution::uniform(states);
  m.rate_constant = c_met(g.max_degree(), q);
  m.expect_cp = true;
  attach_chain(m, mc_only);
  return m;
}

ModelInstance hardcore_model(const GraphSpec& g, double lambda, bool mc_only) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::kInvalidInput, "fugacity must be positive");
  const int n = g.vertices();
  const auto& nb = g.neighbors();
  auto independent = [&](const std::vector<int>& cfg) {
    for (const auto& [a, b] : g.edges())
      if (cfg[static_cast<std::size_t>(a)] && cfg[static_cast<std::size_t>(b)]) return false;
    return true;
  };
  Enumerated e = index_configs(enumerate_configs(n, 2, independent), 2);
  const auto states = static_cast<Eigen::Index>(e.configs.size());

  ModelInstance m;
  m.kind = ModelKind::kHardcore;
  m.name = "hardcore-" + g.name() + "-l" + format_param(lambda);
  m.n = n;
  m.fugacity = lambda;
  m.graph = g;
  require_dense_allowed(states, mc_only, m.name);

  Vector weights(states);
  for (Eigen::Index s = 0; s < states; ++s) {
    const auto& cfg = e.configs[static_cast<std::size_t>(s)];
    std::string label;
    int occupied = 0;
    for (int v : cfg) {
      label += static_cast<char>('0' + v);
      occupied += v;
    }
    m.labels.push_back(label);
    weights(s) = std::pow(lambda, occupied);
  }
  const double heads = lambda / (n * (1.0 + lambda));
  const double tails = 1.0 / (n * (1.0 + lambda));
  std::vector<RandomOutcome> r;
  for (int v = 0; v < n; ++v) {
    r.push_back({"(" + std::to_string(v) + ",heads)", heads});
    r.push_back({"(" + std::to_string(v) + ",tails)", tails});
  }
  std::vector<std::int32_t> table;
  table.reserve(static_cast<std::size_t>(states) * r.size());
  for (std::size_t s = 0; s < e.configs.size(); ++s) {
    std::vector<int> cfg = e.configs[s];
    for (int v = 0; v < n; ++v) {
      const int old = cfg[static_cast<std::size_t>(v)];
      bool free = true;
      for (int w : nb[static_cast<std::size_t>(v)])
        if (cfg[static_cast<std::size_t>(w)]) free = false;
      cfg[static_cast<std::size_t>(v)] = free ? 1 : old;
      table.push_back(e.index.at(encode(cfg, 2)));
      cfg[static_cast<std::size_t>(v)] = 0;
      table.push_back(e.index.at(encode(cfg, 2)));
      cfg[static_cast<std::size_t>(v)] = old;
    }
  }
  m.rmr = RandomMappingRep(m.labels, r, table);
  m.stationary = Distribution(weights / weights.sum(), tol::kComputed);
  m.rate_constant = c_hardcore(lambda, g.max_degree());
  m.expect_cp = true;
  attach_chain(m, mc_only);
  return m;
}

ModelInstance model_from_name(const std::string& name, bool mc_only) {
  const auto parts = split(name, '-');
  const std::string& head = parts[0];
  if (head.rfind("hypercube", 0) == 0) {
    if (parts.size() != 1) throw Error(ErrorKind::kInvalidInput, "hypercube model takes no options: '" + name + "'");
    return hypercube_model(parse_int(head.substr(9), "hypercube dimension"), mc_only);
  }
  if (head.rfind("cycle", 0) == 0) {
    const int n = parse_int(head.substr(5), "cycle length");
    CycleVariant variant = CycleVariant::kProse;
    double p = 0.5;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i] == "prose") variant = CycleVariant::kProse;
      else if (parts[i] == "printed") variant = CycleVariant::kPrinted;
      else if (!parts[i].empty() && parts[i][0] == 'p') p = parse_real(parts[i].substr(1), "cycle bias");
      else throw Error(ErrorKind::kInvalidInput, "unknown cycle option '" + parts[i] + "'");
    }
    return cycle_coupling_model(n, p, variant);
  }
  if (head == "colorings") {
    if (parts.size() != 3 || parts[2].empty() || parts[2][0] != 'q')
      throw Error(ErrorKind::kInvalidInput, "colorings model name is colorings-<graph>-q<colors>");
    return colorings_model(GraphSpec::parse(parts[1]), parse_int(parts[2].substr(1), "colors"), mc_only);
  }
  if (head == "hardcore") {
    if (parts.size() != 3 || parts[2].empty() || parts[2][0] != 'l')
      throw Error(ErrorKind::kInvalidInput, "hardcore model name is hardcore-<graph>-l<fugacity>");
    return hardcore_model(GraphSpec::parse(parts[1]), parse_real(parts[2].substr(1), "fugacity"), mc_only);
  }
  throw Error(ErrorKind::kInvalidInput, "unknown model '" + name + "'");
}

std::vector<Matrix> hypercube_flip_operators(int n) {
  if (n < 1 || n > 10) throw Error(ErrorKind::kInvalidInput, "flip operators need n in [1, 10]");
  const Eigen::Index size = Eigen::Index{1} << n;
  std::vector<Matrix> ops;
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < 2; ++b) {
      Matrix t = Matrix::Zero(size, size);
      const Eigen::Index bit = Eigen::Index{1} << (n - 1 - i);
      for (Eigen::Index s = 0; s < size; ++s) t(b ? (s | bit) : (s & ~bit), s) = 1.0;
      ops.push_back(t);
    }
  return ops;
}

Matrix cycle3_choi_fixture() {
  Matrix j(9, 9);
  j << 0.5, 0, 0, 0.5, 0, 0.5, 0.5, 0.5, 0,
       0, 0.25, 0, 0, 0.5, 0, 0, 0, 0.5,
       0, 0, 0.25, 0, 0.5, 0, 0, 0, 0.5,
       0.5, 0, 0, 0.25, 0, 0, 0, 0, 0.5,
       0, 0.5, 0.5, 0, 0.5, 0, 0.5, 0.5, 0,
       0.5, 0, 0, 0, 0, 0.25, 0, 0, 0.5,
       0.5, 0, 0, 0, 0.5, 0, 0.25, 0, 0,
       0.5, 0, 0, 0, 0.5, 0, 0, 0.25, 0,
       0, 0.5, 0.5, 0.5, 0, 0.5, 0, 0, 0.5;
  return j;
}

std::vector<double> cycle3_eigenvalue_fixture() { return {-1.04, -0.34, -0.34, 0.25, 0.25, 0.25, 1.09, 1.09, 1.79}; }

double rate_envelope(const ModelInstance& model, int m) {
  const double n = model.n;
  switch (model.kind) {
    case ModelKind::kHypercube: return std::exp(-(m - n * std::log(n)) / n);
    case ModelKind::kColorings:
    case ModelKind::kHardcore: return n * std::exp(-m * *model.rate_constant / n);
    case ModelKind::kCycle: break;
  }
  throw Error(ErrorKind::kInvalidInput, "model " + model.name + " has no contraction envelope");
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> default_start_pairs(Eigen::Index n, std::uint64_t seed, int extra) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  if (n < 2) return pairs;
  pairs.emplace_back(0, n - 1);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen(pairs.begin(), pairs.end());
  const std::uint64_t possible = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);
  StreamRng rng(seed, ~std::uint64_t{0});
  while (static_cast<int>(pairs.size()) < extra + 1 && seen.size() < possible) {
    const auto x = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
    const auto y = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
    if (x == y || x >= n || y >= n) continue;
    if (seen.insert({x, y}).second) pairs.emplace_back(x, y);
  }
  return pairs;
}

RateCheck contraction_rate_check(const ModelInstance& model, const std::vector<int>& m_grid, const RateOptions& options) {
  if (m_grid.empty()) throw Error(ErrorKind::kInvalidInput, "m grid must be non-empty");
  if (model.kind == ModelKind::kCycle) throw Error(ErrorKind::kInvalidInput, "cycle model has no contraction envelope");
  RateCheck out;
  out.m_grid = m_grid;
  out.check.name = "contraction_rate:" + model.name;
  out.check.rhs = 0.0;
  if (model.kind == ModelKind::kHypercube)
    out.check.provenance = "Pr{tau > n log n + c n} <= exp(-c)";
  else
    out.check.provenance = "Pr{X_m^x != X_m^y} <= n exp(-m c / n)";
  if (model.rate_constant && *model.rate_constant <= 0.0) {
    out.vacuous = true;
    out.check.pass = true;
    out.check.notes.push_back("rate constant " + format_param(*model.rate_constant) + " is not positive; bound is vacuous");
    return out;
  }
  for (int m : m_grid) out.envelope.push_back(rate_envelope(model, m));

  const int horizon = *std::max_element(m_grid.begin(), m_grid.end());
  double worst = -std::numeric_limits<double>::infinity();
  if (options.mode == RateMode::kExact) {
    out.check.tolerance = tol::kComputed;
    out.report = coalescence_tail_exact(model.coupling_matrix(), horizon, 256);
    for (std::size_t i = 0; i < m_grid.size(); ++i)
      worst = std::max(worst, out.report.tail_at(m_grid[i]) - out.envelope[i]);
    out.check.pass = worst <= out.check.tolerance;
  } else {
    if (options.samples < 1000) throw Error(ErrorKind::kInvalidInput, "Monte Carlo rate check needs at least 1000 samples");
    if (!model.rmr) throw Error(ErrorKind::kInvalidInput, "Monte Carlo rate check needs a random mapping");
    const auto pairs = options.start_pairs.empty() ? default_start_pairs(model.states(), options.seed) : options.start_pairs;
    out.report = coalescence_tail_mc(*model.rmr, pairs, m_grid, {options.samples, options.seed, options.workers});
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      const double est = out.report.tail_max[i];
      worst = std::max(worst, est - out.report.ci_half[i] - out.envelope[i]);
      if (out.report.ci_hi[i] > out.envelope[i]) out.upper_ci_within = false;
    }
    out.check.tolerance = 0.0;
    out.check.pass = worst <= 0.0;
    out.check.notes.push_back(std::string("upper confidence bound within envelope: ") + (out.upper_ci_within ? "yes" : "no"));
  }
  out.check.lhs = worst;
  return out;
}

}  // namespace qcoupling
