// Copyright 2026 The chicat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
//
//   acceptance [OUT_DIR]
//
// Artifacts (CSV curves, chi files, manifests) go to OUT_DIR, default
// ./acceptance_out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chicat/chi_io.h"
#include "chicat/circuit.h"
#include "chicat/cli.h"
#include "chicat/mcwf.h"
#include "chicat/process_matrix.h"
#include "chicat/rydberg.h"
#include "test_util.h"

namespace {

using namespace chicat;
namespace ct = chicat::testing;
namespace fs = std::filesystem;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kProductionTraj = 500;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::cout << fmt::format("[{}] {:>2}. {}: {} ({:.1f} s)", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs)
            << std::endl;
}

OperatorBasis qubits(std::size_t n, BasisKind kind = BasisKind::kMatrixUnit) {
  return OperatorBasis(SubsystemShape::uniform(n, 2), kind);
}

// Half the trace norm of a Hermitian difference, through Eigen's solver.
double oracle_distance(const ProcessMatrix& p, const std::vector<ComplexMatrix>& kraus) {
  const ct::Mat diff = ct::to_eigen(to_choi(p)) - ct::choi_oracle(kraus);
  const Eigen::SelfAdjointEigenSolver<ct::Mat> eig(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

Outcome algebra_oracles() {
  std::mt19937_64 rng(20260001);
  double worst = 0.0;
  int checks = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rep % 2;
    const std::size_t d = std::size_t{1} << n;
    const BasisKind kind = rep % 4 < 2 ? BasisKind::kMatrixUnit : BasisKind::kPauliLike;
    const auto ka = ct::random_kraus(d, 1 + rep % 4, rng);
    const auto kb = ct::random_kraus(d, 1 + (rep / 4) % 4, rng);
    const ProcessMatrix a = chi_from_kraus(ka, qubits(n, kind));
    const ProcessMatrix b = chi_from_kraus(kb, qubits(n, kind));
    worst = std::max(worst, oracle_distance(serial_concat(a, b).in_basis(BasisKind::kMatrixUnit),
                                            ct::compose_kraus(ka, kb)));
    worst = std::max(worst, oracle_distance(parallel_concat(a, b).in_basis(BasisKind::kMatrixUnit),
                                            ct::tensor_kraus(ka, kb)));
    checks += 2;
  }
  return {worst < 1e-10, fmt::format("max distance {:.2e} over {} serial/parallel checks (< 1e-10)", worst, checks)};
}

Outcome structure_route() {
  std::mt19937_64 rng(20260002);
  double worst = 0.0;
  for (BasisKind kind : {BasisKind::kMatrixUnit, BasisKind::kPauliLike}) {
    const OperatorBasis basis = qubits(2, kind);
    const StructureConstants c = structure_constants(basis);
    for (int rep = 0; rep < 25; ++rep) {
      const ProcessMatrix a = chi_from_kraus(ct::random_kraus(4, 1 + rep % 4, rng), basis);
      const ProcessMatrix b = chi_from_kraus(ct::random_kraus(4, 1 + (rep + 1) % 4, rng), basis);
      worst = std::max(worst, trace_distance(serial_concat_structure(a, b, c), serial_concat(a, b)));
    }
  }
  return {worst < 1e-10, fmt::format("max distance {:.2e} over 50 two-qubit pairs (< 1e-10)", worst)};
}

Outcome mcwf_two_level() {
  const double omega = kTwoPi * 1e6, gamma = kTwoPi * 0.1e6, t = 5e-6;
  const ComplexMatrix h{{0.0, omega / 2}, {omega / 2, 0.0}};
  const JumpOperator decay{ComplexMatrix{{0.0, std::sqrt(gamma)}, {0.0, 0.0}}, "decay"};
  TrajectoryConfig cfg;
  cfg.n_traj = 1000;
  cfg.base_seed = 20260003;

  PulseSchedule driven(SubsystemShape{2});
  driven.add(HamiltonianSegment{h, t, "drive"});
  const EnsembleResult e = run_ensemble(driven, std::span(&decay, 1), ComplexMatrix::column({1.0, 0.0}), cfg);
  std::vector<double> pops;
  for (const auto& s : e.final_states) pops.push_back(std::norm(s(1, 0)));
  double mean = 0.0, var = 0.0;
  for (double p : pops) mean += p;
  mean /= static_cast<double>(pops.size());
  for (double p : pops) var += (p - mean) * (p - mean);
  const double se = std::sqrt(var / static_cast<double>(pops.size() - 1) / static_cast<double>(pops.size()));
  const ct::Mat rho0 = ct::to_eigen(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
  const double want = ct::lindblad_evolve(ct::to_eigen(h), {ct::to_eigen(decay.l)}, rho0, t)(1, 1).real();
  const bool pop_ok = std::abs(mean - want) <= 3.0 * se;

  PulseSchedule idle(SubsystemShape{2});
  idle.add(HamiltonianSegment{ComplexMatrix(2, 2), t, "idle"});
  const EnsembleResult d = run_ensemble(idle, std::span(&decay, 1), ComplexMatrix::column({0.0, 1.0}), cfg);
  const double p = std::exp(-gamma * t);
  const double sb = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.n_traj));
  const bool surv_ok = std::abs(d.no_jump_fraction - p) <= 3.0 * sb;
  return {pop_ok && surv_ok,
          fmt::format("P_e {:.4f} vs oracle {:.4f} (3 se = {:.4f}); survival {:.4f} vs {:.4f} (3 se = {:.4f})", mean,
                      want, 3.0 * se, d.no_jump_fraction, p, 3.0 * sb)};
}

Outcome choi_extraction() {
  RegisterModel reg;
  reg.n_atoms = 2;
  reg.params = AtomParams::table1();
  reg = reg.closed();
  TrajectoryConfig cfg;
  cfg.n_traj = 1;
  const ProcessMatrix ideal = exact_gate_library().at("CNOT");

  reg.blockade_mode = BlockadeMode::kInfinite;
  const double infinite = trace_distance(simulate_schedule(build_cnot_sequence(reg, 0, 1), reg, cfg).chi, ideal);

  // A finite shift of 1e4 Omega_eff leaves an intrinsic conditional phase of
  // order pi Omega_eff / (4 B); reported for reference.
  reg.blockade_mode = BlockadeMode::kFinite;
  reg.params.blockade = 1e4 * adiabatic_eliminate(reg.params).omega_eff;
  const double finite = trace_distance(simulate_schedule(build_cnot_sequence(reg, 0, 1), reg, cfg).chi, ideal);
  return {infinite < 1e-6, fmt::format("B -> infinity: {:.2e} (< 1e-6); finite B = 1e4 Omega_eff: {:.2e}",
                                       infinite, finite)};
}

struct Production {
  std::vector<double> grid_hz;
  std::vector<double> sweep_t;
  ComparisonReport report;
  std::vector<double> sweep_bound, sweep_nojump, sweep_fraction;
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = text.find('\n') + 1;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::vector<double> row;
    std::size_t f = pos;
    while (f < end) {
      const std::size_t comma = std::min(text.find(',', f), end);
      row.push_back(std::stod(text.substr(f, comma - f)));
      f = comma + 1;
    }
    rows.push_back(row);
    pos = end + 1;
  }
  return rows;
}

Production run_production(const fs::path& out) {
  Production p;
  const cli::RunConfig sweep_cfg = cli::parse_config("", {"mode=cnot-sweep"});
  cli::cmd_sweep(sweep_cfg, {out / "sweep", false});
  for (const auto& row : csv_rows(read_file((out / "sweep" / "sweep_detail.csv").string()))) {
    p.grid_hz.push_back(row[0]);
    p.sweep_t.push_back(row[1]);
    p.sweep_bound.push_back(row[4]);
    p.sweep_nojump.push_back(row[5]);
    p.sweep_fraction.push_back(row[6]);
  }

  RegisterModel base;
  base.params = AtomParams::table1();
  TrajectoryConfig cfg;
  cfg.n_traj = kProductionTraj;
  std::vector<double> grid;
  for (double hz : p.grid_hz) grid.push_back(hz * kTwoPi);
  p.report = compare_implementations(grid, base, cfg);
  write_file_atomic((out / "compare" / "toffoli_compare.csv").string(), p.report.to_csv());
  write_file_atomic((out / "compare" / "toffoli_compare_detail.csv").string(), p.report.to_detail_csv());
  return p;
}

Outcome sweep_shape(const Production& p) {
  const auto it = std::min_element(p.sweep_t.begin(), p.sweep_t.end());
  const std::size_t k = static_cast<std::size_t>(it - p.sweep_t.begin());
  const bool interior = k > 0 && k + 1 < p.sweep_t.size();
  const bool ends = p.sweep_t.front() > *it && p.sweep_t.back() > *it;
  return {interior && ends, fmt::format("minimum {:.4f} at {:g} MHz; endpoints {:.4f} (10 MHz), {:.4f} (100 MHz)", *it,
                                        p.grid_hz[k] / 1e6, p.sweep_t.front(), p.sweep_t.back())};
}

Outcome ordering(const Production& p) {
  std::size_t ok = 0;
  double worst_margin = 1.0;
  for (const auto& r : p.report.rows) {
    if (r.t_c2not < r.t_cat && r.t_c2not < r.t_cir) ++ok;
    worst_margin = std::min(worst_margin, std::min(r.t_cat, r.t_cir) - r.t_c2not);
  }
  return {ok == p.report.rows.size(), fmt::format("C2NOT below both circuit curves at {}/{} points, smallest gap {:.4f}",
                                                  ok, p.report.rows.size(), worst_margin)};
}

Outcome ratios(const Production& p) {
  double cnot = 1.0, cir = 1.0, c2not = 1.0;
  for (const auto& r : p.report.rows) {
    cnot = std::min(cnot, r.t_cnot);
    cir = std::min(cir, r.t_cir);
    c2not = std::min(c2not, r.t_c2not);
  }
  const double circuit_ratio = cir / cnot, c2_ratio = c2not / cnot;
  const bool ok = circuit_ratio >= 4.0 && circuit_ratio <= 8.0 && c2_ratio >= 1.2 && c2_ratio <= 2.0;
  return {ok, fmt::format("circuit/CNOT {:.2f} in [4, 8]; C2NOT/CNOT {:.2f} in [1.2, 2.0]", circuit_ratio, c2_ratio)};
}

Outcome convergence(const Production& p) {
  const auto& lo = p.report.rows.front();
  const auto& hi = p.report.rows.back();
  const double gap_lo = std::abs(lo.t_cat - lo.t_cir), gap_hi = std::abs(hi.t_cat - hi.t_cir);
  const double tol = 3.0 * std::hypot(hi.sigma_cat, hi.sigma_cir);
  return {gap_hi < gap_lo && gap_hi <= tol,
          fmt::format("|T_cat - T_cir| {:.4f} at 10 MHz, {:.4f} at 100 MHz (3 sigma = {:.4f})", gap_lo, gap_hi, tol)};
}

// No-jump trajectories all end in the same state, so the sampled ensemble is
// f chi_nj + (1 - f) chi_jump with f the observed no-jump fraction and
// T(chi_nj, chi_ens) <= 1 - f holds exactly. Against the exact 1 - p_nj the
// sampled distance also carries the binomial noise of f.
Outcome nojump_bound(const Production& p) {
  std::size_t total = 0, strict = 0, sampled = 0, within = 0;
  double tightest = 1.0;
  auto check = [&](double distance, double bound, double fraction) {
    const double p_nj = 1.0 - bound;
    const double sigma = std::sqrt(p_nj * (1.0 - p_nj) / static_cast<double>(kProductionTraj));
    ++total;
    if (distance <= bound) ++strict;
    if (distance <= 1.0 - fraction + 1e-12) ++sampled;
    if (distance <= bound + 3.0 * sigma) ++within;
    tightest = std::min(tightest, bound - distance);
  };
  for (std::size_t i = 0; i < p.sweep_t.size(); ++i) check(p.sweep_nojump[i], p.sweep_bound[i], p.sweep_fraction[i]);
  for (const auto& r : p.report.rows) {
    check(r.nojump_distance_cnot, r.bound_nojump_cnot, r.nojump_fraction_cnot);
    check(r.nojump_distance_cir, r.bound_nojump_cir, r.nojump_fraction_cir);
    check(r.nojump_distance_c2not, r.bound_nojump_c2not, r.nojump_fraction_c2not);
  }
  return {sampled == total && within == total,
          fmt::format("{}/{} within 1 - f_nj (observed), {}/{} within 1 - p_nj + 3 binomial sigma; "
                      "{}/{} strictly below 1 - p_nj, smallest slack {:.4f}",
                      sampled, total, within, total, strict, total, tightest)};
}

// Every file of `a` exists in `b` with the same bytes.
bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other) || read_file(entry.path().string()) != read_file(other.string())) return false;
    ++files;
  }
  return true;
}

Outcome determinism(const fs::path& out) {
  const std::vector<std::vector<std::string>> runs = {
      {"gate-chi", "--traj", "500", "--seed", "1"},
      {"gate-chi", "--traj", "100", "--override", "gate=C2NOT"},
      {"sweep", "--traj", "100", "--override", "omega_b_grid_hz=[2e7,6e7]"},
      {"toffoli-compare", "--traj", "40", "--override", "omega_b_grid_hz=[5e7]"},
  };
  std::size_t files = 0;
  bool ok = true;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<fs::path> dirs;
    for (const std::string& workers : {"0", "1"}) {
      dirs.push_back(out / "determinism" / fmt::format("run{}_{}", r, workers));
      std::vector<std::string> args = {"chicat"};
      args.insert(args.end(), runs[r].begin(), runs[r].end());
      args.insert(args.end(), {"--out", dirs.back().string(), "--override", "n_workers=" + workers});
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      if (cli::main_entry(static_cast<int>(argv.size()), argv.data()) != 0) return {false, "command failed"};
    }
    // Worker count is part of the config, so the manifests differ there; the
    // data files must not.
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string name = entry.path().filename().string();
      if (name.starts_with("manifest")) continue;
      ok = ok && read_file(entry.path().string()) == read_file((dirs[1] / name).string());
    }
    const fs::path again = out / "determinism" / fmt::format("run{}_again", r);
    std::vector<std::string> args = {"chicat"};
    args.insert(args.end(), runs[r].begin(), runs[r].end());
    args.insert(args.end(), {"--out", again.string(), "--override", "n_workers=0"});
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    if (cli::main_entry(static_cast<int>(argv.size()), argv.data()) != 0) return {false, "command failed"};
    ok = ok && same_tree(dirs[0], again, files);
  }
  // concat on the CNOT estimate just written, twice.
  for (const char* tag : {"concat_a", "concat_b"}) {
    const fs::path lib = out / "determinism" / "run0_0" / "chi_CNOT.json";
    const cli::RunConfig c = cli::parse_config("", {"library.CNOT=" + lib.string()});
    cli::cmd_concat(c, {out / "determinism" / tag, false});
  }
  ok = ok && same_tree(out / "determinism" / "concat_a", out / "determinism" / "concat_b", files);
  return {ok, fmt::format("{} output files byte-identical across reruns and worker counts", files)};
}

}  // namespace

// Swallows stdout/stderr chatter from the commands while in scope.
class Quiet {
 public:
  Quiet() : out_(std::cout.rdbuf(sink_.rdbuf())), err_(std::cerr.rdbuf(sink_.rdbuf())) {}
  ~Quiet() {
    std::cout.rdbuf(out_);
    std::cerr.rdbuf(err_);
  }

 private:
  std::ostringstream sink_;
  std::streambuf* out_;
  std::streambuf* err_;
};

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::remove_all(out);
  fs::create_directories(out);

  report(1, "algebra oracle equivalence", algebra_oracles);
  report(2, "structure-constant route", structure_route);
  report(3, "MCWF driven lossy atom", mcwf_two_level);
  report(4, "Choi extraction of the closed C-NOT", choi_extraction);

  Production production;
  std::string production_error;
  try {
    const auto start = std::chrono::steady_clock::now();
    {
      Quiet quiet;
      production = run_production(out);
    }
    std::cout << fmt::format("       production sweep and comparison: {} points, {} trajectories ({:.1f} s)",
                             production.grid_hz.size(), kProductionTraj,
                             std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count())
              << std::endl;
  } catch (const std::exception& e) {
    production_error = e.what();
  }
  auto needs_production = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!production_error.empty()) return {false, "production run failed: " + production_error};
      return fn(production);
    };
  };
  report(5, "CNOT sweep has an interior optimum", needs_production(sweep_shape));
  report(6, "C2NOT beats the Toffoli circuit", needs_production(ordering));
  report(7, "error ratios at the optima", needs_production(ratios));
  report(8, "chi_cat and chi_cir converge", needs_production(convergence));
  report(9, "no-jump bound", needs_production(nojump_bound));
  report(10, "CLI determinism", [&] {
    Quiet quiet;
    return determinism(out);
  });

  std::cout << fmt::format("{} of 10 criteria passed", 10 - failures) << std::endl;
  return failures == 0 ? 0 : 1;
}
