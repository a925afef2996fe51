#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arlda/constants.hpp"
#include "arlda/oracles.hpp"
#include "arlda/solver.hpp"
#include "arlda/verify.hpp"

namespace arlda {

// One experiment: a catalogued problem, an oracle selection and the solver
// configuration. Mirrors the CLI flags one-to-one; a JSON config file holds
// the same fields and flags override it.
struct ExperimentConfig {
  std::string problem = "quad";
  std::optional<std::string> h_kind;  // override of the problem's default h
  double h_weight = 1.0;
  std::string oracle = "exact";  // exact | noise | series | partial
  std::uint64_t seed = 0;
  std::string noise_mode = "adversarial";  // adversarial | uniform
  AccuracyFloor floors;
  std::vector<double> epsilons;  // one for solve, >= 3 for sweep
  bool monotonic = false;
  long max_iters = 100000;
  double sigma0 = 1.0;
  long summands = 100;     // partial-sum oracle
  double amplitude = 1.0;  // series / partial-sum oracles
  double gap_tol = 1e-2;
  long sub_max_iter = 200000;
  std::string out = "run.csv";
  std::string format = "csv";  // csv | json

  void validate() const;  // throws std::invalid_argument
};

ExperimentConfig load_config_file(const std::string& path);

struct SweepRow {
  double epsilon = 0.0;
  std::string status;
  long iterations = 0;
  long successful = 0;
  long unsuccessful = 0;
  long nf = 0, ng = 0, nc = 0, nJ = 0;
  long shrink_events = 0;
  double phi_bar = 0.0;
  std::optional<double> tau;
  bool tau_ok = true;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();  // log(successes) vs log(1/eps)
  bool all_within_tau = true;
};

// Process-style entry points; they write the output files and return the
// process exit code (0 Exit1/Exit2, 1 configuration or file errors, 2 stall
// or inconsistency, 3 iteration cap).
int solve_command(const ExperimentConfig& config);
int sweep_command(const ExperimentConfig& config);
int audit_command(const ExperimentConfig& config, const std::string& run_csv,
                  const std::string& out_path);

// Pieces reused by tests.
int status_exit_code(SolveStatus status);
std::string run_csv_text(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> parse_run_csv(const std::string& text);
std::string summary_json_text(const ExperimentConfig& config, const AlgoConstants& consts,
                              const TerminationReport& report);
std::string findings_json_text(const std::vector<AuditFinding>& findings);
SweepReport run_sweep(const ExperimentConfig& config);

}  // namespace arlda
