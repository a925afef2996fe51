#pragma once

#include <string>
#include <vector>

#include "arlda/problem.hpp"
#include "arlda/solver.hpp"
#include "arlda/types.hpp"

namespace arlda {

struct AuditFinding {
  long iteration = -1;  // -1 for run-level checks
  std::string check;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = true;  // measured <= bound + tolerance
};

// Exact criticality measure at x: maximize the exact linearized decrease over
// the unit ball by dense grid plus coordinate polish. n <= 3 only.
double brute_force_phi(const ProblemSpec& spec, const Vector& x, long resolution);

// Grid maximizers on raw data, shared by tests. n <= 3.
double grid_max_linearized_decrease(const Vector& g, const Vector& c, const Matrix& J,
                                    const OuterFunction& h, long resolution);
double grid_max_model_decrease(const Vector& g, const Vector& c, const Matrix& J,
                               const OuterFunction& h, double sigma, long resolution);

struct FiniteDiffReport {
  double max_dev_g = 0.0;
  double max_dev_J = 0.0;
};

// Central differences of f_exact against g_exact and of c_exact against
// J_exact; reports the largest entrywise deviation.
FiniteDiffReport finite_diff_check(const ProblemSpec& spec, const Vector& x, double step);

// Replays the lemma-level bounds against a finished run. Every finding
// carries the bound, the measured value and a pass flag; comparisons get a
// 1e-9 absolute slack for roundoff.
std::vector<AuditFinding> audit_run(const ProblemSpec& spec, const AlgoConstants& consts,
                                    const std::vector<IterationRecord>& records,
                                    const std::vector<AuditSample>& samples);

inline long count_failures(const std::vector<AuditFinding>& findings) {
  long n = 0;
  for (const auto& f : findings)
    if (!f.pass) ++n;
  return n;
}

}  // namespace arlda
