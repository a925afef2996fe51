// Acceptance suite: one test case per release criterion, each printing a
// PASS/FAIL line. Run via ctest or directly; everything is deterministic.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "arlda/experiment.hpp"
#include "arlda/problems.hpp"
#include "arlda/solver.hpp"
#include "arlda/subproblem.hpp"
#include "arlda/verify.hpp"
#include "test_util.hpp"

using namespace arlda;
using arlda::testing::Rng;
using arlda::testing::snapshot_of;

namespace {

void report(const std::string& name, bool pass) {
  std::printf("[ACCEPTANCE] %-26s %s\n", name.c_str(), pass ? "PASS" : "FAIL");
  std::fflush(stdout);
}

struct RunCase {
  std::string problem;
  std::string oracle;
  double epsilon = 0.0;
  bool monotonic = false;
  ProblemSpec spec;
  AlgoConstants consts;
  TerminationReport rep;
  std::vector<IterationRecord> records;
  std::vector<AuditSample> samples;
};

RunCase execute(const std::string& problem, const std::string& oracle, double epsilon,
                bool monotonic = false) {
  RunCase rc;
  rc.problem = problem;
  rc.oracle = oracle;
  rc.epsilon = epsilon;
  rc.monotonic = monotonic;
  SuiteProblem p = make_problem(problem);
  rc.spec = p.spec;
  rc.consts.epsilon = epsilon;
  rc.consts.max_iterations = 500000;
  rc.consts.monotonic = monotonic;

  std::unique_ptr<Oracle> o;
  if (oracle == "exact")
    o = std::make_unique<ExactOracle>(rc.spec);
  else
    o = std::make_unique<AdditiveNoiseOracle>(rc.spec, 3, NoiseMode::adversarial);
  rc.rep = run_arlda(rc.spec, rc.consts, *o, {}, &rc.records, &rc.samples);
  return rc;
}

// The shared pool of audited runs: the brute-force termination matrix plus
// larger composite problems and the monotonic variants.
const std::vector<RunCase>& audited_runs() {
  static const std::vector<RunCase> runs = [] {
    std::vector<RunCase> out;
    for (const char* prob : {"quad", "lasso1d", "rosenbrock-pen"})
      for (const char* oracle : {"exact", "noise"})
        for (double eps : {1e-2, 1e-3, 1e-4})
          out.push_back(execute(prob, oracle, eps));
    for (const char* prob : {"lassoNd", "nl-l1-regression"})
      for (const char* oracle : {"exact", "noise"})
        out.push_back(execute(prob, oracle, 1e-2));
    out.push_back(execute("lasso1d", "exact", 1e-3, true));
    out.push_back(execute("lassoNd", "noise", 1e-2, true));
    return out;
  }();
  return runs;
}

long failures_matching(const RunCase& rc, const std::vector<std::string>& checks) {
  auto findings = audit_run(rc.spec, rc.consts, rc.records, rc.samples);
  long bad = 0;
  for (const auto& f : findings) {
    if (f.pass) continue;
    for (const auto& c : checks)
      if (f.check == c) ++bad;
  }
  return bad;
}

}  // namespace

TEST_CASE("termination correctness against the brute-force measure") {
  bool pass = true;
  for (const auto& rc : audited_runs()) {
    if (rc.spec.n > 3 || rc.monotonic) continue;
    bool terminated =
        rc.rep.status == SolveStatus::Exit1 || rc.rep.status == SolveStatus::Exit2;
    INFO(rc.problem << " " << rc.oracle << " eps=" << rc.epsilon);
    CHECK(terminated);
    pass &= terminated;
    if (!terminated) continue;
    double phi_exact = brute_force_phi(rc.spec, rc.rep.x, 300);
    CHECK(phi_exact <= rc.epsilon + 1e-6);
    pass &= phi_exact <= rc.epsilon + 1e-6;
  }
  report("termination-correctness", pass);
  CHECK(pass);
}

TEST_CASE("error bounds hold on every audited iteration") {
  bool pass = true;
  for (const auto& rc : audited_runs()) {
    long bad = failures_matching(
        rc, {"err-psi", "err-psi-trial", "err-dell", "err-psi-relative",
             "err-psi-relative-trial"});
    INFO(rc.problem << " " << rc.oracle << " eps=" << rc.epsilon);
    CHECK(bad == 0);
    pass &= bad == 0;
  }
  report("error-bound-audit", pass);
  CHECK(pass);
}

TEST_CASE("decrease conditions hold on every iteration") {
  bool pass = true;
  for (const auto& rc : audited_runs()) {
    long bad = failures_matching(rc, {"sufficient-decrease", "step-quadratic-decrease"});
    INFO(rc.problem << " " << rc.oracle << " eps=" << rc.epsilon);
    CHECK(bad == 0);
    pass &= bad == 0;
  }
  report("decrease-conditions", pass);
  CHECK(pass);
}

TEST_CASE("sigma never exceeds its Lipschitz ceiling") {
  bool pass = true;
  for (const auto& rc : audited_runs()) {
    long bad = failures_matching(rc, {"sigma-cap"});
    INFO(rc.problem << " " << rc.oracle << " eps=" << rc.epsilon);
    CHECK(bad == 0);
    CHECK(rc.rep.audits.sigma_within_bound);
    pass &= bad == 0 && rc.rep.audits.sigma_within_bound;
  }
  report("sigma-cap", pass);
  CHECK(pass);
}

TEST_CASE("per-iteration loop budgets and the monotonic total") {
  bool pass = true;
  for (const auto& rc : audited_runs()) {
    long bad = failures_matching(rc, {"shrink-budget", "f-evals"});
    INFO(rc.problem << " " << rc.oracle << " eps=" << rc.epsilon);
    CHECK(bad == 0);
    CHECK(rc.rep.audits.f_evals_within_two);
    CHECK(rc.rep.audits.shrinks_within_nu);
    pass &= bad == 0 && rc.rep.audits.f_evals_within_two && rc.rep.audits.shrinks_within_nu;
    if (rc.monotonic) {
      long mbad = failures_matching(rc, {"total-shrink-budget", "eps-monotone"});
      CHECK(mbad == 0);
      CHECK(rc.rep.audits.monotonic_shrinks_ok);
      pass &= mbad == 0 && rc.rep.audits.monotonic_shrinks_ok;
    }
  }
  report("loop-budget", pass);
  CHECK(pass);
}

TEST_CASE("complexity envelope on the regression sweep") {
  ExperimentConfig cfg;
  cfg.problem = "nl-l1-regression";
  cfg.oracle = "exact";
  cfg.epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  cfg.max_iters = 500000;

  auto t0 = std::chrono::steady_clock::now();
  SweepReport rep = run_sweep(cfg);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = rep.rows.size() == 5;
  for (const auto& row : rep.rows) {
    INFO("eps=" << row.epsilon << " status=" << row.status);
    bool ok = (row.status == "Exit1" || row.status == "Exit2") && row.tau_ok;
    CHECK(ok);
    pass &= ok;
  }
  CHECK(seconds < 300.0);
  pass &= seconds < 300.0;
  std::printf("  (sweep wall time %.1fs, slope %.2f)\n", seconds, rep.slope);
  report("complexity-envelope", pass);
  CHECK(pass);
}

TEST_CASE("smooth specialization identity on random snapshots") {
  OuterFunction zero{OuterKind::zero, 1.0};
  Rng rng(2024);
  bool pass = true;
  for (int t = 0; t < 100; ++t) {
    Index n = 1 + static_cast<Index>(rng.uniform() * 6);
    auto snap = snapshot_of(rng.vector(n), rng.vector(n, -5, 5), Vector::Zero(1),
                            Matrix::Zero(1, n));
    auto sol = solve_criticality(snap, zero);
    bool ok = std::abs(sol.phi_bar - snap.g->value.norm()) <= 1e-8;
    CHECK(ok);
    pass &= ok;
  }
  report("specialization-identity", pass);
  CHECK(pass);
}

TEST_CASE("subproblem solutions bracket the grid oracle") {
  Rng rng(512);
  const OuterFunction kinds[] = {{OuterKind::l1, 1.0},
                                 {OuterKind::l2, 1.2},
                                 {OuterKind::linf, 0.8},
                                 {OuterKind::weighted_l1, 1.5}};
  SubproblemOptions tight;
  tight.gap_tol = 1e-9;
  tight.gap_tol_abs = 1e-9;
  tight.max_iter = 600000;

  bool pass = true;
  for (int t = 0; t < 50; ++t) {
    const OuterFunction& h = kinds[t % 4];
    auto snap = snapshot_of(rng.vector(2), rng.vector(2, -2, 2), rng.vector(2, -2, 2),
                            rng.matrix(2, 2, -1.5, 1.5));
    double sigma = rng.uniform(0.4, 2.5);

    auto crit = solve_criticality(snap, h, tight);
    double grid_phi =
        grid_max_linearized_decrease(snap.g->value, snap.c->value, snap.J->value, h, 400);
    bool ok_crit = grid_phi >= crit.certificate.primal_value - 1e-6 &&
                   grid_phi <= crit.certificate.dual_bound + 1e-6;

    auto model = solve_model(snap, h, sigma, std::numeric_limits<double>::infinity(), tight);
    double grid_model = grid_max_model_decrease(snap.g->value, snap.c->value, snap.J->value,
                                                h, sigma, 400);
    bool ok_model = grid_model >= model.certificate.primal_value - 1e-6 &&
                    grid_model <= model.certificate.dual_bound + 1e-6;

    INFO("instance " << t << " kind " << to_string(h.kind));
    CHECK(ok_crit);
    CHECK(ok_model);
    pass &= ok_crit && ok_model;
  }
  report("subproblem-soundness", pass);
  CHECK(pass);
}

TEST_CASE("floors force a diagnosed stall, never an endless loop") {
  bool pass = true;
  for (const char* prob : {"quad", "lasso1d"}) {
    SuiteProblem p = make_problem(prob);
    AlgoConstants k;
    k.epsilon = 1e-6;
    k.max_iterations = 20000;
    AccuracyFloor floors;
    floors.f = floors.g = floors.c = floors.J = 1e-3;
    AdditiveNoiseOracle oracle(p.spec, 17, NoiseMode::adversarial, floors);
    std::vector<IterationRecord> records;
    TerminationReport rep = run_arlda(p.spec, k, oracle, {}, &records);

    bool stalled = rep.status == SolveStatus::AccuracyStalled && rep.stall != StallCase::None;
    bool bound_ok = std::isfinite(rep.noisy_bound) && rep.noisy_bound > 0.0;
    bool caps_ok = true;
    AccuracyState maxima = AccuracyState::from_constants(k);
    for (const auto& r : records) {
      if (!(r.omega > 0.0)) continue;
      double theta = theta_threshold(maxima, p.spec.L_h, r.omega, k.sigma_min);
      double nu = nu_k_bound(maxima, p.spec.L_h, theta, r.omega, k.epsilon,
                             delta_k_eps(k.epsilon, r.sigma), k.gamma_eps);
      if (std::isfinite(nu)) caps_ok &= r.shrinks <= std::ceil(nu) + 5;
    }
    INFO(prob);
    CHECK(stalled);
    CHECK(bound_ok);
    CHECK(caps_ok);
    pass &= stalled && bound_ok && caps_ok;
  }
  report("stall-taxonomy", pass);
  CHECK(pass);
}
