#pragma once

#include <stdexcept>

#include "arlda/formulas.hpp"
#include "arlda/outer_function.hpp"
#include "arlda/snapshot.hpp"
#include "arlda/types.hpp"

namespace arlda {

struct SubproblemOptions {
  double gap_tol = 1e-2;      // relative, against the primal value
  double gap_tol_abs = 1e-12; // absolute fallback
  long max_iter = 200000;
  long check_interval = 10;
};

struct SubproblemCertificate {
  double primal_value = 0.0;  // attained by the returned feasible point
  double dual_bound = 0.0;    // weak-duality bound on the optimum
  double gap = 0.0;           // dual_bound - primal_value (max problems)
  long iterations_used = 0;
};

struct CriticalitySolution {
  Vector d;            // ||d|| <= 1
  double phi_bar = 0;  // linearized decrease at d, >= 0
  SubproblemCertificate certificate;
  Vector dual;  // dual iterate, usable as warm start
};

struct ModelSolution {
  Vector s;
  DecreaseReport report;
  SubproblemCertificate certificate;
  Vector dual;
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(double gap)
      : std::runtime_error("subproblem solver did not reach the requested gap (gap=" +
                           std::to_string(gap) + ")"),
        gap(gap) {}
  double gap;
};

class TargetUnreachableError : public std::runtime_error {
 public:
  TargetUnreachableError(double best_decrease, double gap)
      : std::runtime_error("gap-certified optimum violates the requested decrease target"),
        best_decrease(best_decrease),
        gap(gap) {}
  double best_decrease;
  double gap;
};

struct WarmStart {
  Vector primal;
  Vector dual;
};

// Ball-constrained criticality maximization: max_{||d||<=1} of the
// linearized decrease at the snapshot.
CriticalitySolution solve_criticality(const InexactSnapshot& snap, const OuterFunction& h,
                                      const SubproblemOptions& opts = {},
                                      const WarmStart* warm = nullptr);

// Regularized model minimization; early-exits once `target_decrease` on the
// linearized decrease is certified. Throws TargetUnreachableError if the
// gap-certified optimum cannot meet the target.
ModelSolution solve_model(const InexactSnapshot& snap, const OuterFunction& h, double sigma,
                          double target_decrease, const SubproblemOptions& opts = {},
                          const WarmStart* warm = nullptr);

Vector prox_h(const OuterFunction& h, double lambda, const Vector& v);
Vector project_unit_ball(const Vector& v);

// Fenchel-duality optimality gap for one of the two composite subproblems.
struct SubproblemInstance {
  enum class Kind { criticality, model };
  Kind kind = Kind::criticality;
  Vector g;
  Vector c;
  Matrix J;
  OuterFunction h;
  double sigma = 1.0;  // model only
};

double dual_gap(const SubproblemInstance& inst, const Vector& primal, const Vector& dual);

}  // namespace arlda
