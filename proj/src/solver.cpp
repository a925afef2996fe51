#include "arlda/solver.hpp"

#include <algorithm>
#include <cmath>

namespace arlda {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Exit1: return "Exit1";
    case SolveStatus::Exit2: return "Exit2";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::AccuracyStalled: return "AccuracyStalled";
    case SolveStatus::TargetUnreachable: return "TargetUnreachable";
  }
  return "?";
}

const char* to_string(StallCase c) {
  switch (c) {
    case StallCase::None: return "None";
    case StallCase::PhiNoise: return "PhiNoise";
    case StallCase::StepNoise: return "StepNoise";
    case StallCase::FunctionNoise: return "FunctionNoise";
  }
  return "?";
}

SolverState initialize(const ProblemSpec& spec, const AlgoConstants& consts) {
  consts.validate();
  if (spec.n < 1 || spec.m < 1) throw std::invalid_argument("problem needs n >= 1, m >= 1");

  SolverState st;
  st.k = 0;
  st.x = spec.x0;
  st.sigma = consts.sigma0;
  st.accuracy = AccuracyState::from_constants(consts);

  const double omega_target = std::min(consts.kappa_omega, 1.0 / consts.sigma0);
  if (spec.L_h == 0.0) {
    // The c budget does not enter omega_0.
    st.accuracy.eps_f = std::min(consts.eps_f_max, omega_target);
    st.accuracy.eps_c = consts.eps_c_max;
  } else {
    double share = omega_target / (2.0 * std::max(1.0, spec.L_h));
    st.accuracy.eps_f = std::min(consts.eps_f_max, share);
    st.accuracy.eps_c = std::min(consts.eps_c_max, share);
  }
  st.accuracy.eps_g = consts.eps_g_max;
  st.accuracy.eps_J = consts.eps_J_max;
  st.accuracy.omega = st.accuracy.eps_f + spec.L_h * st.accuracy.eps_c;
  st.current = InexactSnapshot(st.x);
  return st;
}

std::vector<std::string> feasibility_warnings(const ProblemSpec& spec,
                                              const AlgoConstants& consts,
                                              const AccuracyFloor& floors) {
  std::vector<std::string> w;
  if (!floors.any()) return w;
  const double eps = consts.epsilon;
  const double L_h = spec.L_h;

  double lhs0 = floors.g + L_h * floors.J + 2.0 * L_h * floors.c;
  if (lhs0 > 0.5 * eps)
    w.push_back("accuracy floors exceed the epsilon/2 level needed by the termination test");

  if (spec.L_g && spec.L_J) {
    double smax = sigma_max_bound(*spec.L_g, *spec.L_J, L_h, consts);
    if ((floors.g + L_h * floors.J) * std::sqrt(eps) + 2.0 * L_h * floors.c > eps / smax)
      w.push_back("accuracy floors exceed the level the step test needs near convergence");
    double f_level =
        eps * (1.0 - consts.eta2) / (consts.gamma3 * (3.0 + 2.0 * (*spec.L_g + L_h * *spec.L_J)));
    if (floors.f > f_level)
      w.push_back("function accuracy floor exceeds the level the ratio test needs");
  }
  return w;
}

Solver::Solver(const ProblemSpec& spec, const AlgoConstants& consts, Oracle& oracle,
               SubproblemOptions sub, bool capture_audit)
    : spec_(&spec), consts_(consts), oracle_(&oracle), sub_(sub), capture_(capture_audit) {
  st_ = initialize(spec, consts);
  audits_.sigma_max = sigma_max_bound(spec, consts);
  if (spec.psi_low && audits_.sigma_max) {
    double gap = spec.psi(spec.x0) - *spec.psi_low;
    audits_.tau = tau_bound(*audits_.sigma_max, std::max(gap, 0.0), consts, consts.epsilon);
  }
  if (consts.monotonic && audits_.sigma_max)
    audits_.nu_total = nu_eps_bound(st_.accuracy, spec.L_h, *audits_.sigma_max,
                                    consts.sigma_min, consts.gamma_eps, consts.epsilon);
}

void Solver::ensure_gcJ() {
  auto& a = st_.accuracy;
  auto& sn = st_.current;
  if (!sn.g_fresh(a.eps_g)) sn.set_g(oracle_->eval_g(st_.x, a.eps_g), a.eps_g);
  if (!sn.c_fresh(a.eps_c)) sn.set_c(oracle_->eval_c(st_.x, a.eps_c), a.eps_c);
  if (!sn.J_fresh(a.eps_J)) sn.set_J(oracle_->eval_J(st_.x, a.eps_J), a.eps_J);
}

double Solver::noisy_optimality_bound() const {
  const auto& a = st_.accuracy;
  double dell = std::isnan(last_phi_primal_) ? 0.0 : last_phi_primal_;
  return std::max(0.5 * consts_.epsilon, dell) +
         (a.eps_g + spec_->L_h * a.eps_J + 2.0 * spec_->L_h * a.eps_c);
}

void Solver::begin_iteration() {
  oracle_->ledger().begin_iteration();
  iter_shrinks_ = 0;
  const auto& a = st_.accuracy;
  double theta_k = a.omega > 0.0
                       ? theta_threshold(a, spec_->L_h, a.omega, consts_.sigma_min)
                       : std::numeric_limits<double>::infinity();
  double delta_k = delta_k_eps(consts_.epsilon, st_.sigma);
  nu_k_audit_ = nu_k_bound(a, spec_->L_h, theta_k, a.omega, consts_.epsilon, delta_k,
                           consts_.gamma_eps);
  shrink_cap_ = std::isfinite(nu_k_audit_)
                    ? static_cast<long>(std::ceil(nu_k_audit_)) + 5
                    : std::numeric_limits<long>::max();
}

long Solver::shrink_or_stall(StallCase where) {
  if (iter_shrinks_ >= shrink_cap_) throw AccuracyStall(where, noisy_optimality_bound());
  st_.accuracy.shrink_gcJ();
  oracle_->ledger().note_shrink();
  return ++iter_shrinks_;
}

Solver::Step1Result Solver::step1_check_termination() {
  const double eps = consts_.epsilon;
  const double L_h = spec_->L_h;
  auto& a = st_.accuracy;
  const double thr1 = eps / (1.0 + a.omega);

  for (;;) {  // Step 1.3 -> Step 1 accuracy loop
    try {
      ensure_gcJ();
    } catch (const AccuracyFloorError&) {
      throw AccuracyStall(StallCase::PhiNoise, noisy_optimality_bound());
    }

    double abs_tol = std::max(sub_.gap_tol_abs, eps / 32.0);
    CriticalitySolution sol;
    auto resolve = [&]() {
      SubproblemOptions o = sub_;
      o.gap_tol_abs = abs_tol;
      try {
        sol = solve_criticality(st_.current, spec_->h, o, &st_.crit_warm);
      } catch (const NonConvergenceError&) {
        throw AccuracyStall(StallCase::PhiNoise, noisy_optimality_bound());
      }
      st_.crit_warm = {sol.d, sol.dual};
      last_phi_primal_ = sol.phi_bar;
      last_phi_cons_ = sol.phi_bar + std::max(sol.certificate.gap, 0.0);
    };
    resolve();

    const double lhs = a.eps_g + L_h * a.eps_J + 2.0 * L_h * a.eps_c;
    bool go_shrink = false;
    for (int refine = 0;; ++refine) {
      const double primal = sol.phi_bar;
      const double cons = primal + std::max(sol.certificate.gap, 0.0);
      const bool at_floor = refine >= 25 || abs_tol <= sub_.gap_tol_abs;
      const double slack = at_floor ? 1.0 + 1e-9 : 1.0;

      if (lhs <= a.omega * primal) {
        if (cons <= thr1 * slack)
          return {true, SolveStatus::Exit1, primal, cons, sol.d};
        if (primal > thr1) return {false, SolveStatus::Exit1, primal, cons, sol.d};
        if (at_floor) return {false, SolveStatus::Exit1, primal, cons, sol.d};
      } else if (primal <= 0.5 * eps && lhs <= 0.5 * eps) {
        if (cons <= 0.5 * eps * slack)
          return {true, SolveStatus::Exit2, primal, cons, sol.d};
        if (at_floor) {
          go_shrink = true;
          break;
        }
      } else {
        go_shrink = true;
        break;
      }
      // Certificate too loose to decide: tighten the subproblem, which costs
      // no oracle evaluations.
      abs_tol = std::max(abs_tol * 0.2, sub_.gap_tol_abs);
      resolve();
    }
    if (go_shrink) {
      shrink_or_stall(StallCase::PhiNoise);
      continue;
    }
  }
}

Solver::Step2Result Solver::step2_compute_step(double phi_bar) {
  const double L_h = spec_->L_h;
  auto& a = st_.accuracy;
  const double target = 0.25 * std::min(1.0, phi_bar / st_.sigma) * phi_bar;

  ModelSolution sol;
  try {
    sol = solve_model(st_.current, spec_->h, st_.sigma, target, sub_, &st_.model_warm);
  } catch (const NonConvergenceError&) {
    throw AccuracyStall(StallCase::StepNoise, noisy_optimality_bound());
  }
  st_.model_warm = {sol.s, sol.dual};

  const double lhs = (a.eps_g + L_h * a.eps_J) * sol.report.norm_v + 2.0 * L_h * a.eps_c;
  if (lhs <= a.omega * sol.report.linearized_decrease)
    return {false, sol.s, sol.report};

  shrink_or_stall(StallCase::StepNoise);
  return {true, sol.s, sol.report};
}

Solver::Step3Result Solver::step3_accept(const Vector& s, double lin_decrease) {
  auto& a = st_.accuracy;
  const double bound = a.omega * lin_decrease;
  const double floor_f = oracle_->floors().f;
  while (a.eps_f > bound) {
    double next = a.eps_f * a.gamma_eps;
    if (next < floor_f) throw AccuracyStall(StallCase::FunctionNoise, noisy_optimality_bound());
    a.eps_f = next;
  }

  try {
    if (!st_.current.f_fresh(a.eps_f))
      st_.current.set_f(oracle_->eval_f(st_.x, a.eps_f), a.eps_f);
    st_.trial = InexactSnapshot(st_.x + s);
    st_.trial.set_f(oracle_->eval_f(st_.trial.point, a.eps_f), a.eps_f);
    // The trial c becomes the next iterate's cache; charge it there.
    st_.trial.set_c(oracle_->eval_c(st_.trial.point, a.eps_c, Attribution::next), a.eps_c);
  } catch (const AccuracyFloorError&) {
    throw AccuracyStall(StallCase::FunctionNoise, noisy_optimality_bound());
  }

  Step3Result r;
  r.psi_bar = st_.current.f->value + spec_->h.value(st_.current.c->value);
  r.psi_bar_trial = st_.trial.f->value + spec_->h.value(st_.trial.c->value);
  r.rho = (r.psi_bar - r.psi_bar_trial) / lin_decrease;
  r.accepted = r.rho >= consts_.eta1;
  oracle_->ledger().note_outcome(r.accepted);
  if (r.accepted) {
    st_.x = st_.trial.point;
    st_.current = st_.trial;
  }
  return r;
}

double Solver::step4_update_sigma(double rho) {
  if (rho >= consts_.eta2)
    st_.sigma = std::max(consts_.sigma_min, consts_.gamma1 * st_.sigma);
  else if (rho < consts_.eta1)
    st_.sigma = consts_.gamma2 * st_.sigma;
  return st_.sigma;
}

void Solver::step5_update_accuracy() {
  auto& a = st_.accuracy;
  const double omega_next = std::min(consts_.kappa_omega, 1.0 / st_.sigma);
  if (!consts_.monotonic && a.omega > 0.0) {
    double r = omega_next / a.omega;
    a.eps_f = std::min(a.max_f, r * a.eps_f);
    a.eps_g = std::min(a.max_g, r * a.eps_g);
    a.eps_c = std::min(a.max_c, r * a.eps_c);
    a.eps_J = std::min(a.max_J, r * a.eps_J);
  }
  a.omega = omega_next;
  double sum = a.eps_f + spec_->L_h * a.eps_c;
  if (sum > a.omega && sum > 0.0) {
    double scale = a.omega / sum;
    a.eps_f *= scale;
    a.eps_c *= scale;
  }
}

IterationRecord Solver::partial_record() const {
  IterationRecord rec;
  rec.k = st_.k;
  rec.sigma = st_.sigma;
  rec.omega = st_.accuracy.omega;
  rec.eps_f = st_.accuracy.eps_f;
  rec.eps_g = st_.accuracy.eps_g;
  rec.eps_c = st_.accuracy.eps_c;
  rec.eps_J = st_.accuracy.eps_J;
  rec.phi_bar = last_phi_primal_;
  rec.shrinks = iter_shrinks_;
  auto led = oracle_->ledger().snapshot();
  rec.nf = led.iter_f;
  rec.ng = led.iter_g;
  rec.nc = led.iter_c;
  rec.nJ = led.iter_J;
  return rec;
}

void Solver::finish_report(TerminationReport& rep) {
  rep.x = st_.x;
  rep.iterations = static_cast<long>(records_.size());
  rep.ledger = oracle_->ledger().snapshot();
  if (audits_.tau) audits_.iterations_within_tau = rep.iterations <= *audits_.tau;
  if (consts_.monotonic && audits_.nu_total)
    audits_.monotonic_shrinks_ok =
        rep.ledger.shrink_events <= std::ceil(*audits_.nu_total);
  rep.audits = audits_;
  // Inexact objective value at the final iterate, for reporting only.
  try {
    if (!st_.current.f_fresh(st_.accuracy.eps_f))
      st_.current.set_f(oracle_->eval_f(st_.x, st_.accuracy.eps_f), st_.accuracy.eps_f);
    if (!st_.current.c_fresh(st_.accuracy.eps_c))
      st_.current.set_c(oracle_->eval_c(st_.x, st_.accuracy.eps_c), st_.accuracy.eps_c);
    rep.psi_bar = st_.current.f->value + spec_->h.value(st_.current.c->value);
  } catch (const AccuracyFloorError&) {
  }
}

TerminationReport Solver::run() {
  TerminationReport rep;
  rep.warnings = feasibility_warnings(*spec_, consts_, oracle_->floors());
  if (audits_.sigma_max && st_.sigma > *audits_.sigma_max)
    audits_.sigma_within_bound = false;

  try {
    for (;;) {
      if (st_.k >= consts_.max_iterations) {
        rep.status = SolveStatus::MaxIterations;
        rep.phi_bar = last_phi_primal_;
        rep.phi_conservative = last_phi_cons_;
        finish_report(rep);
        return rep;
      }
      begin_iteration();

      Step1Result r1 = step1_check_termination();
      Step2Result r2;
      while (!r1.terminated) {
        r2 = step2_compute_step(r1.phi_bar);
        if (!r2.restart_step1) break;
        r1 = step1_check_termination();
      }
      if (r1.terminated) {
        IterationRecord rec = partial_record();
        rec.phi_bar = r1.phi_bar;
        records_.push_back(rec);
        rep.status = r1.exit;
        rep.phi_bar = r1.phi_bar;
        rep.phi_conservative = r1.phi_cons;
        finish_report(rep);
        return rep;
      }

      const double sigma_k = st_.sigma;
      const Vector x_k = st_.x;
      Step3Result r3 = step3_accept(r2.s, r2.report.linearized_decrease);
      step4_update_sigma(r3.rho);

      IterationRecord rec = partial_record();
      rec.sigma = sigma_k;
      rec.phi_bar = r1.phi_bar;
      rec.lin_decrease = r2.report.linearized_decrease;
      rec.step_norm = r2.report.norm_v;
      rec.rho = r3.rho;
      rec.accepted = r3.accepted;
      records_.push_back(rec);

      if (capture_) {
        AuditSample smp;
        smp.k = st_.k;
        smp.x = x_k;
        smp.s = r2.s;
        smp.psi_bar_x = r3.psi_bar;
        smp.psi_bar_trial = r3.psi_bar_trial;
        smp.phi_cons = r1.phi_cons;
        samples_.push_back(smp);
      }

      audits_.f_evals_within_two &= rec.nf <= 2;
      if (std::isfinite(nu_k_audit_))
        audits_.shrinks_within_nu &= iter_shrinks_ <= std::ceil(nu_k_audit_);
      if (audits_.sigma_max) audits_.sigma_within_bound &= st_.sigma <= *audits_.sigma_max;

      step5_update_accuracy();
      ++st_.k;
    }
  } catch (const AccuracyStall& stall) {
    records_.push_back(partial_record());
    rep.status = SolveStatus::AccuracyStalled;
    rep.stall = stall.stall_case;
    rep.noisy_bound = stall.noisy_bound;
    rep.phi_bar = last_phi_primal_;
    rep.phi_conservative = last_phi_cons_;
    finish_report(rep);
    return rep;
  } catch (const TargetUnreachableError& tu) {
    records_.push_back(partial_record());
    rep.status = SolveStatus::TargetUnreachable;
    rep.phi_bar = last_phi_primal_;
    rep.phi_conservative = last_phi_cons_;
    rep.noisy_bound = tu.best_decrease;
    finish_report(rep);
    return rep;
  }
}

TerminationReport run_arlda(const ProblemSpec& spec, const AlgoConstants& consts,
                            Oracle& oracle, const SubproblemOptions& sub,
                            std::vector<IterationRecord>* records,
                            std::vector<AuditSample>* samples) {
  Solver solver(spec, consts, oracle, sub, samples != nullptr);
  TerminationReport rep = solver.run();
  if (records) *records = solver.records();
  if (samples) *samples = solver.audit_samples();
  return rep;
}

}  // namespace arlda
