#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "arlda/accuracy.hpp"
#include "arlda/constants.hpp"
#include "arlda/formulas.hpp"
#include "arlda/oracles.hpp"
#include "arlda/problem.hpp"
#include "arlda/snapshot.hpp"
#include "arlda/subproblem.hpp"

namespace arlda {

enum class SolveStatus { Exit1, Exit2, MaxIterations, AccuracyStalled, TargetUnreachable };
enum class StallCase { None, PhiNoise, StepNoise, FunctionNoise };

const char* to_string(SolveStatus s);
const char* to_string(StallCase c);

// Raised when an accuracy floor (or the per-iteration loop cap) makes further
// certified progress impossible; carries the noisy-optimality bound.
class AccuracyStall : public std::runtime_error {
 public:
  AccuracyStall(StallCase stall_case, double noisy_bound)
      : std::runtime_error(std::string("accuracy stalled (") + to_string(stall_case) + ")"),
        stall_case(stall_case),
        noisy_bound(noisy_bound) {}
  StallCase stall_case;
  double noisy_bound;
};

struct IterationRecord {
  long k = 0;
  double sigma = 0.0;
  double omega = 0.0;
  double eps_f = 0.0, eps_g = 0.0, eps_c = 0.0, eps_J = 0.0;
  double phi_bar = std::numeric_limits<double>::quiet_NaN();
  double lin_decrease = std::numeric_limits<double>::quiet_NaN();
  double step_norm = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  bool accepted = false;
  long shrinks = 0;
  long nf = 0, ng = 0, nc = 0, nJ = 0;
};

// Per-iteration data captured for the exact-reference audits; holds the
// iterate and step so the exact quantities can be recomputed afterwards.
struct AuditSample {
  long k = 0;
  Vector x;
  Vector s;
  double psi_bar_x = std::numeric_limits<double>::quiet_NaN();
  double psi_bar_trial = std::numeric_limits<double>::quiet_NaN();
  double phi_cons = std::numeric_limits<double>::quiet_NaN();
};

struct RunAudits {
  std::optional<double> sigma_max;
  bool sigma_within_bound = true;
  std::optional<double> tau;
  bool iterations_within_tau = true;
  bool shrinks_within_nu = true;   // per-iteration: shrinks <= ceil(nu_k)
  bool f_evals_within_two = true;  // per-iteration f evaluations <= 2
  std::optional<double> nu_total;  // monotonic mode budget
  bool monotonic_shrinks_ok = true;
};

struct TerminationReport {
  SolveStatus status = SolveStatus::MaxIterations;
  StallCase stall = StallCase::None;
  Vector x;
  double phi_bar = std::numeric_limits<double>::quiet_NaN();
  double phi_conservative = std::numeric_limits<double>::quiet_NaN();
  double noisy_bound = std::numeric_limits<double>::quiet_NaN();
  double psi_bar = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;
  LedgerSnapshot ledger;
  RunAudits audits;
  std::vector<std::string> warnings;
};

struct SolverState {
  long k = 0;
  Vector x;
  double sigma = 1.0;
  AccuracyState accuracy;
  InexactSnapshot current;  // at x
  InexactSnapshot trial;    // at x + s, during Step 3
  WarmStart crit_warm;
  WarmStart model_warm;
};

// Step 0: pick the initial accuracy budgets and relative level omega_0.
SolverState initialize(const ProblemSpec& spec, const AlgoConstants& consts);

// Pre-run check of the limited-accuracy sanity conditions against declared
// oracle floors; returns human-readable warnings, empty when all achievable.
std::vector<std::string> feasibility_warnings(const ProblemSpec& spec,
                                              const AlgoConstants& consts,
                                              const AccuracyFloor& floors);

class Solver {
 public:
  Solver(const ProblemSpec& spec, const AlgoConstants& consts, Oracle& oracle,
         SubproblemOptions sub = {}, bool capture_audit = true);

  struct Step1Result {
    bool terminated = false;
    SolveStatus exit = SolveStatus::Exit1;
    double phi_bar = 0.0;   // primal criticality value
    double phi_cons = 0.0;  // primal + certificate gap
    Vector d;
  };
  // Steps 1.1-1.3 with the accuracy loop; may throw AccuracyStall.
  Step1Result step1_check_termination();

  struct Step2Result {
    bool restart_step1 = false;
    Vector s;
    DecreaseReport report;
  };
  // Steps 2.1-2.3; a restart sends control back to Step 1 with tightened
  // accuracy. May throw AccuracyStall or TargetUnreachableError.
  Step2Result step2_compute_step(double phi_bar);

  struct Step3Result {
    double rho = 0.0;
    bool accepted = false;
    double psi_bar = 0.0;
    double psi_bar_trial = 0.0;
  };
  Step3Result step3_accept(const Vector& s, double lin_decrease);

  double step4_update_sigma(double rho);
  void step5_update_accuracy();

  TerminationReport run();

  SolverState& state() { return st_; }
  const SolverState& state() const { return st_; }
  const std::vector<IterationRecord>& records() const { return records_; }
  const std::vector<AuditSample>& audit_samples() const { return samples_; }

 private:
  void ensure_gcJ();
  void begin_iteration();
  long shrink_or_stall(StallCase where);  // returns updated shrink count
  double noisy_optimality_bound() const;
  IterationRecord partial_record() const;
  void finish_report(TerminationReport& rep);

  const ProblemSpec* spec_;
  AlgoConstants consts_;
  Oracle* oracle_;
  SubproblemOptions sub_;
  bool capture_;
  SolverState st_;
  std::vector<IterationRecord> records_;
  std::vector<AuditSample> samples_;

  long iter_shrinks_ = 0;
  long shrink_cap_ = std::numeric_limits<long>::max();
  double nu_k_audit_ = std::numeric_limits<double>::infinity();
  double last_phi_primal_ = std::numeric_limits<double>::quiet_NaN();
  double last_phi_cons_ = std::numeric_limits<double>::quiet_NaN();
  RunAudits audits_;
};

// Convenience wrapper: solve and collect records/audit samples.
TerminationReport run_arlda(const ProblemSpec& spec, const AlgoConstants& consts,
                            Oracle& oracle, const SubproblemOptions& sub = {},
                            std::vector<IterationRecord>* records = nullptr,
                            std::vector<AuditSample>* samples = nullptr);

}  // namespace arlda
