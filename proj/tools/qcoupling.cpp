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

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcoupling/chain.hpp"
#include "qcoupling/coupling.hpp"
#include "qcoupling/density.hpp"
#include "qcoupling/dilation.hpp"
#include "qcoupling/evolve.hpp"
#include "qcoupling/io.hpp"
#include "qcoupling/models.hpp"
#include "qcoupling/quantize.hpp"

namespace fs = std::filesystem;
using namespace qcoupling;
using nlohmann::json;

namespace {

struct Options {
  std::string model;
  std::string chain_path;
  std::string coupling_path;
  std::string out_dir = ".";
  std::string rho0 = "basis:0";
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  unsigned workers = 1;
  int m_max = 50;
  long guard = kExactPairGuard;
  bool mc = false;
  bool mc_only = false;
  std::vector<double> eps = {0.25, 0.04, 0.01};
};

struct Inputs {
  std::string name;
  std::optional<ModelInstance> model;
  std::optional<TransitionMatrix> chain;
  std::optional<RandomMappingRep> rmr;
  std::optional<CouplingMatrix> coupling;
  std::optional<Distribution> stationary;
  std::optional<bool> expect_cp;
  bool coupling_trusted = true;

  CouplingMatrix coupling_matrix() const {
    if (coupling) return *coupling;
    if (rmr) return grand_coupling_matrix(*rmr);
    throw Error(ErrorKind::kInvalidInput, "no coupling given (use --model or --coupling)");
  }
  const TransitionMatrix& require_chain() const {
    if (!chain) throw Error(ErrorKind::kInvalidInput, "no dense chain available (instance is Monte Carlo only)");
    return *chain;
  }
  Distribution pi() const {
    if (stationary) return *stationary;
    require_ergodic(require_chain());
    return stationary_distribution(require_chain());
  }
};

Inputs load_inputs(const Options& o, bool need_coupling) {
  Inputs in;
  if (!o.model.empty()) {
    ModelInstance m = model_from_name(o.model, o.mc_only);
    in.name = m.name;
    in.chain = m.chain;
    in.rmr = m.rmr;
    in.coupling = m.coupling;
    in.stationary = m.stationary;
    in.expect_cp = m.expect_cp;
    in.coupling_trusted = m.marginal_verified;
    in.model = std::move(m);
    return in;
  }
  if (!o.chain_path.empty()) {
    in.chain = io::chain_from_json(io::read_file(o.chain_path));
    in.name = fs::path(o.chain_path).stem().string();
  }
  if (!o.coupling_path.empty()) {
    auto c = io::coupling_from_json(io::read_file(o.coupling_path), in.chain);
    if (auto* rmr = std::get_if<RandomMappingRep>(&c)) {
      in.rmr = *rmr;
      if (!in.chain && rmr->states() <= kDenseStateGuard) in.chain = rmr->chain();
    } else {
      in.coupling = std::get<CouplingMatrix>(c);
      if (!in.chain) in.chain = in.coupling->base();
    }
    if (in.name.empty()) in.name = fs::path(o.coupling_path).stem().string();
  }
  if (!in.chain && !in.rmr) throw Error(ErrorKind::kInvalidInput, "give --model, --chain or --coupling");
  if (need_coupling && !in.rmr && !in.coupling) throw Error(ErrorKind::kInvalidInput, "this command needs a coupling");
  return in;
}

// Kraus set for grand couplings, otherwise T when its Choi matrix is PSD.
std::optional<Channel> physical_channel(const Inputs& in, const Distribution& pi, CheckResult& cp) {
  cp.name = "channel_completely_positive";
  cp.provenance = "Choi matrix of T is positive semidefinite";
  if (in.rmr) {
    cp.pass = true;
    cp.notes.push_back("grand coupling: Kraus representation");
    return Channel(kraus_from_grand(*in.rmr, pi));
  }
  QuantizedCoupling qc = quantized_coupling(in.coupling_matrix(), pi);
  const ChoiSpectrum spec = verify_cp(qc.t);
  cp.lhs = -spec.min_eigenvalue;
  cp.tolerance = spec.tolerance;
  cp.pass = spec.is_cp;
  if (!spec.is_cp) return std::nullopt;
  return Channel(qc.t);
}

class Report {
 public:
  Report(const Options& o, std::string command, std::string name) : o_(o), command_(std::move(command)), name_(std::move(name)) {
    summary_["command"] = command_;
    summary_["model"] = name_;
    summary_["seed"] = o.seed;
  }

  json& summary() { return summary_; }
  void add(const CheckResult& c) { checks_.push_back(c); }
  void add(const std::vector<CheckResult>& cs) { checks_.insert(checks_.end(), cs.begin(), cs.end()); }
  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  std::string emit(const std::string& tag, const std::string& ext, const std::string& content) {
    fs::create_directories(o_.out_dir);
    const std::string file = name_ + "_" + tag + "_s" + std::to_string(o_.seed) + "_" + io::content_hash(content).substr(0, 8) + "." + ext;
    io::write_file((fs::path(o_.out_dir) / file).string(), content);
    files_.push_back(file);
    return file;
  }

  int finish() {
    summary_["checks"] = json::parse(io::checks_to_json(checks_));
    summary_["pass"] = all_pass();
    summary_["files"] = files_;
    const std::string text = summary_.dump(1) + "\n";
    emit(command_ + "_summary", "json", text);
    std::cout << text;
    return all_pass() ? 0 : 1;
  }

 private:
  const Options& o_;
  std::string command_;
  std::string name_;
  json summary_;
  std::vector<CheckResult> checks_;
  std::vector<std::string> files_;
};

CheckResult flag_check(const std::string& name, bool pass, const std::string& note = "") {
  CheckResult c;
  c.name = name;
  c.pass = pass;
  c.lhs = pass ? 0.0 : 1.0;
  if (!note.empty()) c.notes.push_back(note);
  return c;
}

DensityMatrix parse_rho0(const std::string& spec, Eigen::Index n, std::uint64_t seed) {
  if (spec == "mixed") return DensityMatrix::maximally_mixed(n);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "basis") {
    const long i = arg.empty() ? 0 : std::stol(arg);
    if (i < 0 || i >= n) throw Error(ErrorKind::kInvalidInput, "basis index out of range");
    return DensityMatrix::basis_state(n, i);
  }
  if (kind == "random") return DensityMatrix::random(n, seed, arg.empty() ? 0 : std::stoull(arg));
  throw Error(ErrorKind::kInvalidInput, "unknown --rho0 '" + spec + "' (basis:i, mixed, random:k)");
}

std::vector<int> range_grid(int m_max) {
  std::vector<int> g;
  for (int m = 0; m <= m_max; ++m) g.push_back(m);
  return g;
}

int cmd_model(const Options& o) {
  if (o.model.empty()) throw Error(ErrorKind::kInvalidInput, "model needs --model");
  Inputs in = load_inputs(o, false);
  Report r(o, "model", in.name);
  if (in.chain) r.summary()["chain_file"] = r.emit("chain", "json", io::chain_to_json(*in.chain));
  if (in.rmr) r.summary()["coupling_file"] = r.emit("coupling", "json", io::rmr_to_json(*in.rmr));
  else if (in.coupling) r.summary()["coupling_file"] = r.emit("coupling", "json", io::coupling_to_json(*in.coupling));
  r.summary()["states"] = in.model->states();
  r.summary()["marginal_verified"] = in.model->marginal_verified;
  if (in.model->rate_constant) r.summary()["rate_constant"] = *in.model->rate_constant;
  return r.finish();
}

int cmd_validate(const Options& o) {
  Inputs in = load_inputs(o, false);
  Report r(o, "validate", in.name);
  if (in.chain) {
    const ChainValidation v = validate_chain(*in.chain);
    r.add(flag_check("chain_stochastic", v.stochastic));
    r.add(flag_check("chain_ergodic", v.ergodic, v.violations.empty() ? "" : v.violations.front()));
    r.summary()["period"] = v.period;
  }
  if (in.rmr) {
    const auto v = validate_rmr(*in.rmr);
    r.add(flag_check("random_mapping", v.empty(), v.empty() ? "" : v.front()));
  }
  if (in.coupling || (in.rmr && in.chain)) {
    const CouplingValidation v = validate_coupling(in.coupling_matrix());
    r.add(flag_check("coupling_marginals", v.marginals));
    r.add(flag_check("coupling_coalescence", v.coalescence));
    r.add(flag_check("coupling_symmetry", v.symmetry));
    r.summary()["coupling_violations"] = v.violations;
  }
  return r.finish();
}

int cmd_quantize(const Options& o) {
  Inputs in = load_inputs(o, true);
  Report r(o, "quantize", in.name);
  const CouplingMatrix c = in.coupling_matrix();
  const bool valid = validate_coupling(c).valid;
  const Superoperator c_star = c_star_superop(c, false);
  const ChoiMatrix j = choi_matrix(c_star, ChoiOrder::kBasisFirst);
  const ChoiSpectrum spec = min_choi_eigenvalue(j);
  r.summary()["coupling_valid"] = valid;
  r.summary()["min_choi_eigenvalue"] = spec.min_eigenvalue;
  r.summary()["cp"] = spec.is_cp;
  r.summary()["choi_file"] = r.emit("choi", "json", io::choi_to_json(j, spec));
  if (in.expect_cp) r.add(flag_check("cp_matches_construction", spec.is_cp == *in.expect_cp));
  if (valid) {
    const Distribution pi = in.pi();
    QuantizedCoupling qc = quantized_coupling(c, pi);
    r.summary()["t_cp"] = verify_cp(qc.t).is_cp;
    r.add(check_trace_preservation(qc.t_star));
    r.add(check_fixed_point(qc.t, pi));
    r.add(check_cstar_fixes_stationary(c_star, pi));
    if (in.rmr) {
      const KrausSet k = kraus_from_grand(*in.rmr, pi);
      r.add(check_kraus_condition(k));
      r.add(check_kraus_matches_superop(k, qc.t));
      r.summary()["kraus_file"] = r.emit("kraus", "json", io::kraus_to_json(k));
    }
  }
  return r.finish();
}

int cmd_coalesce(const Options& o) {
  Inputs in = load_inputs(o, true);
  Report r(o, "coalesce", in.name);
  CoalescenceReport rep;
  if (o.mc) {
    if (!in.rmr) throw Error(ErrorKind::kInvalidInput, "Monte Carlo coalescence needs a random mapping");
    rep = coalescence_tail_mc(*in.rmr, default_start_pairs(in.rmr->states(), o.seed), range_grid(o.m_max),
                              {o.samples, o.seed, o.workers});
    r.summary()["samples"] = o.samples;
  } else {
    rep = coalescence_tail_exact(in.coupling_matrix(), o.m_max, o.guard);
    r.summary()["expected_tau_max"] = rep.expected_tau_max;
  }
  r.summary()["mode"] = o.mc ? "mc" : "exact";
  r.summary()["tail_file"] = r.emit("coalesce", "csv", io::coalescence_csv(rep));
  try {
    r.summary()["t_couple"] = coupling_time(rep);
  } catch (const Error& e) {
    r.summary()["t_couple"] = nullptr;
    r.summary()["t_couple_note"] = e.what();
  }
  return r.finish();
}

int cmd_evolve(const Options& o) {
  Inputs in = load_inputs(o, true);
  Report r(o, "evolve", in.name);
  const Distribution pi = in.pi();
  CheckResult cp;
  const auto channel = physical_channel(in, pi, cp);
  r.add(cp);
  if (!channel) return r.finish();
  const Channel& t = *channel;
  const DensityMatrix rho0 = parse_rho0(o.rho0, pi.size(), o.seed);
  std::optional<CoalescenceReport> rep;
  if (pi.size() <= o.guard) rep = coalescence_tail_exact(in.coupling_matrix(), o.m_max, o.guard);
  const ConvergenceTrace tr = evolve_trace(t, rho0, Qsample(pi), o.m_max, rep ? &*rep : nullptr);
  r.summary()["trace_file"] = r.emit("evolve", "csv", io::trace_csv(tr));
  CheckResult mono = flag_check("trace_distance_non_increasing", tr.distance_non_increasing);
  r.add(mono);
  r.summary()["qperp_overlap_non_increasing"] = tr.overlap_non_increasing;
  return r.finish();
}

int cmd_verify(const Options& o) {
  Inputs in = load_inputs(o, true);
  Report r(o, "verify", in.name);
  const CouplingMatrix c = in.coupling_matrix();
  const Distribution pi = in.pi();
  const Qsample q(pi);
  const Eigen::Index n = pi.size();
  CheckResult cp;
  const auto channel = physical_channel(in, pi, cp);
  r.add(cp);

  const int horizon = std::max(o.m_max, 20);
  const CoalescenceReport rep = coalescence_tail_exact(c, horizon, o.guard);
  std::vector<int> grid;
  for (int m = 0; m <= 20; ++m) grid.push_back(m);

  double lap_worst = 0.0;
  bool lap_pass = true;
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) {
        const CheckResult lc = laplacian_preservation_check(c, x, y);
        lap_worst = std::max(lap_worst, lc.lhs);
        lap_pass = lap_pass && lc.pass;
      }
  CheckResult lap = laplacian_preservation_check(c, 0, n - 1);
  lap.lhs = lap_worst;
  lap.pass = lap_pass;
  lap.notes.push_back("worst over all ordered pairs");
  r.add(lap);
  r.add(rescaled_qperp_decomposition_check(pi));

  CheckResult ident = coalescence_trace_identity_check(c, 0, o.guard);
  for (int m = 1; m <= 20; ++m) {
    const CheckResult ic = coalescence_trace_identity_check(c, m, o.guard);
    if (ic.lhs > ident.lhs) ident.lhs = ic.lhs;
    ident.pass = ident.pass && ic.pass;
  }
  ident.notes.push_back("worst over m <= 20");
  r.add(ident);

  CheckResult sub = check_tail_submultiplicativity(c, 1, 1, o.guard);
  sub.lhs -= sub.rhs;
  sub.rhs = 0.0;
  for (int m = 1; m <= 10; ++m)
    for (int l = 1; l <= 4; ++l) {
      const CheckResult sc = check_tail_submultiplicativity(c, m, l, o.guard);
      sub.pass = sub.pass && sc.pass;
      sub.lhs = std::max(sub.lhs, sc.lhs - sc.rhs);
    }
  sub.notes.push_back("lhs is the worst gap over m <= 10, l <= 4");
  r.add(sub);
  r.add(check_diagonal_block(c, 20, o.guard));
  r.add(check_coalescence_bounds_mixing(c, 20, o.guard));
  const MixingReport mix = mixing_report(in.require_chain(), {0.125, 0.0625});
  r.add(mix.bound_checks);

  if (in.model && in.model->kind != ModelKind::kCycle) {
    const int nv = in.model->n;
    std::vector<int> mg;
    for (int k = 1; k <= 14; ++k) mg.push_back(k * nv);
    RateOptions ro;
    ro.mode = RateMode::kExact;
    r.add(contraction_rate_check(*in.model, mg, ro).check);
  }
  if (channel) {
    const Channel& t = *channel;
    QuantizedCoupling qc = quantized_coupling(c, pi);
    std::vector<DensityMatrix> rho0_set;
    for (Eigen::Index i = 0; i < n; ++i) rho0_set.push_back(DensityMatrix::basis_state(n, i));
    for (std::uint64_t k = 0; k < 20; ++k) rho0_set.push_back(DensityMatrix::random(n, o.seed, k));
    r.add(qperp_bound_check(t, pi, rep, rho0_set, grid));
    r.add(main_theorem_check(t, pi, rep, rho0_set, o.eps));

    CheckResult gentle = flag_check("gentle_measurement", true);
    gentle.lhs = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < 20; ++k) {
      const double delta = 0.005 * static_cast<double>(k + 1);
      const Matrix mixed = (1.0 - delta) * q.projector() + delta * DensityMatrix::random(n, o.seed, 100 + k).matrix();
      const DensityMatrix rho(mixed);
      const double eps = 2.0 * qperp_overlap(mixed, q) + 1e-12;
      const CheckResult g = gentle_measurement_step_check(rho, q, eps);
      gentle.pass = gentle.pass && g.pass;
      gentle.lhs = std::max(gentle.lhs, g.lhs - g.rhs);
      gentle.provenance = g.provenance;
    }
    gentle.notes.push_back("lhs is the worst gap ||rho - post||_tr - 2 sqrt(eps) over 20 states");
    r.add(gentle);

    std::vector<std::pair<Matrix, Matrix>> pairs;
    for (std::uint64_t k = 0; k < 5; ++k)
      pairs.emplace_back(DensityMatrix::random(n, o.seed, 200 + k).matrix(), DensityMatrix::random(n, o.seed, 300 + k).matrix());
    r.add(reducing_projector_check(t, q, pairs, 20));
    if (rep.tail_max.back() < 1e-7) {
      r.add(expanding_projector_check(qc.t_star, q, rep));
    } else {
      const CoalescenceReport longer = coalescence_tail_exact(c, default_couple_cap(n), o.guard);
      r.add(expanding_projector_check(qc.t_star, q, longer));
    }
    r.add(fixed_point_stability_check(t, q));

  }
  r.summary()["t_couple"] = rep.t_couple ? json(*rep.t_couple) : json(nullptr);
  return r.finish();
}

int cmd_dilate(const Options& o) {
  Inputs in = load_inputs(o, true);
  if (!in.rmr) throw Error(ErrorKind::kInvalidInput, "dilation needs a grand coupling (random mapping)");
  Report r(o, "dilate", in.name);
  const Distribution pi = in.pi();
  const KrausSet k = kraus_from_grand(*in.rmr, pi);
  const DilationCircuit circ = build_dilation(k);
  const Eigen::Index d = circ.dim;
  r.summary()["kappa"] = circ.kappa;
  r.summary()["b_identity_residual"] = circ.b_identity_residual;

  Vector xi = DensityMatrix::random(d, o.seed, 0).matrix().col(0);
  xi.normalize();
  const DecompositionReport dec = state_decomposition_check(circ, xi);
  r.add(dec.check);
  r.summary()["branch_norms"] = {dec.good_norm, dec.bad_norm};

  const auto iters = exact_iterations(circ.kappa);
  const DilationMode mode = iters ? DilationMode::kAmplified : DilationMode::kPostselect;
  if (iters) {
    const AmplifiedState a = amplify_and_extract(circ, xi, *iters);
    r.summary()["iterations"] = *iters;
    r.summary()["fidelity"] = a.fidelity;
    CheckResult f = flag_check("amplified_fidelity", a.fidelity >= 1.0 - 1e-9);
    f.lhs = 1.0 - a.fidelity;
    f.tolerance = 1e-9;
    r.add(f);
  }
  double residual = 0.0;
  double acceptance_gap = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DensityMatrix rho = DensityMatrix::random(d, o.seed, 10 + s);
    const DilationOutput out = channel_via_dilation(circ, rho, mode);
    residual = std::max(residual, max_abs_diff(out.rho, apply_channel(k, rho.matrix()).matrix));
    const DilationOutput post = channel_via_dilation(circ, rho, DilationMode::kPostselect);
    acceptance_gap = std::max(acceptance_gap, std::abs(post.acceptance - 1.0 / circ.kappa));
  }
  r.summary()["mode"] = iters ? "amplified" : "postselect";
  r.summary()["channel_residual"] = residual;
  r.summary()["acceptance_probability"] = 1.0 / circ.kappa;
  CheckResult eq = flag_check("dilation_channel_equality", residual <= 1e-9);
  eq.lhs = residual;
  eq.tolerance = 1e-9;
  r.add(eq);
  CheckResult acc = flag_check("postselect_acceptance", acceptance_gap <= 1e-10);
  acc.lhs = acceptance_gap;
  acc.tolerance = 1e-10;
  r.add(acc);
  return r.finish();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kGuardExceeded: return 3;
    case ErrorKind::kNotResolved: return 1;
    default: return 2;
  }
}

// Turns a JSON config into flags placed ahead of the real arguments, so explicit flags win.
std::vector<std::string> config_args(const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::kInvalidInput, "config: expected a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const auto& v : value) args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      args.push_back(flag);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Markov chain couplings: build, check and simulate", "qcoupling"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Options o;
  std::string config;

  auto common = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--model", o.model, "bundled model, e.g. hypercube3, cycle3-printed, colorings-K3-q4, hardcore-P3-l2");
    sub->add_option("--chain", o.chain_path, "chain JSON file");
    sub->add_option("--coupling", o.coupling_path, "coupling JSON file (dense or rmr)");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--samples", o.samples, "Monte Carlo trajectories")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--m-max", o.m_max, "largest step count")->check(CLI::NonNegativeNumber);
    sub->add_option("--guard", o.guard, "exact state-count cap")->check(CLI::PositiveNumber);
    sub->add_option("--eps", o.eps, "accuracy targets")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',');
    sub->add_option("--rho0", o.rho0, "initial state: basis:i, mixed or random:k");
    sub->add_flag("--mc", o.mc, "Monte Carlo tails");
    sub->add_flag("--mc-only", o.mc_only, "skip the dense chain for large models");
    sub->add_option("--config", config, "JSON file mirroring the flags");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Sub subs[] = {
      {"model", "write a bundled model as chain and coupling JSON", cmd_model},
      {"validate", "check chain and coupling conditions", cmd_validate},
      {"quantize", "build the quantized maps and report Choi positivity", cmd_quantize},
      {"coalesce", "coalescence tails and t_couple", cmd_coalesce},
      {"evolve", "trace-distance convergence trace", cmd_evolve},
      {"verify", "run the convergence check suite", cmd_verify},
      {"dilate", "unitary dilation and amplitude amplification report", cmd_dilate},
  };
  for (const Sub& s : subs) common(app.add_subcommand(s.name, s.help));

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") {
        auto extra = config_args(args[i + 1]);
        const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
        args.insert(sub == args.end() ? sub : sub + 1, extra.begin(), extra.end());
        break;
      }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const Sub& s : subs)
      if (app.got_subcommand(s.name)) return s.run(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
