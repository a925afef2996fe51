#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "arlda/problem.hpp"
#include "arlda/types.hpp"

namespace arlda {

struct OracleRequest {
  Vector point;
  Quantity quantity = Quantity::f;
  double accuracy = 0.0;  // requested absolute error bound
};

using OracleValue = std::variant<double, Vector, Matrix>;

struct OracleResponse {
  OracleValue value;
  double certified_error = 0.0;  // guaranteed <= requested accuracy
  double cost_units = 0.0;       // oracle-defined work measure
};

// Smallest honorable accuracy per quantity. Requests strictly below a floor
// are rejected, never silently violated.
struct AccuracyFloor {
  double f = 0.0;
  double g = 0.0;
  double c = 0.0;
  double J = 0.0;

  double of(Quantity q) const {
    switch (q) {
      case Quantity::f: return f;
      case Quantity::g: return g;
      case Quantity::c: return c;
      case Quantity::J: return J;
    }
    return 0.0;
  }
  bool any() const { return f > 0.0 || g > 0.0 || c > 0.0 || J > 0.0; }
};

class AccuracyFloorError : public std::runtime_error {
 public:
  AccuracyFloorError(Quantity q, double requested, double floor)
      : std::runtime_error(std::string("accuracy floor reached for ") + quantity_name(q) +
                           ": requested " + std::to_string(requested) + " < floor " +
                           std::to_string(floor)),
        quantity(q),
        requested(requested),
        floor(floor) {}
  Quantity quantity;
  double requested;
  double floor;
};

// Whether an evaluation is charged to the current iteration's counters or
// carried into the next one (trial-point evaluations that become the next
// iterate's cache).
enum class Attribution { current, next };

struct LedgerSnapshot {
  long total_f = 0, total_g = 0, total_c = 0, total_J = 0;
  long iter_f = 0, iter_g = 0, iter_c = 0, iter_J = 0;
  double min_eps_f = std::numeric_limits<double>::infinity();
  double min_eps_g = std::numeric_limits<double>::infinity();
  double min_eps_c = std::numeric_limits<double>::infinity();
  double min_eps_J = std::numeric_limits<double>::infinity();
  long shrink_events = 0;
  long iter_shrinks = 0;
  long successful = 0;
  long unsuccessful = 0;

  long total(Quantity q) const {
    switch (q) {
      case Quantity::f: return total_f;
      case Quantity::g: return total_g;
      case Quantity::c: return total_c;
      case Quantity::J: return total_J;
    }
    return 0;
  }
};

class EvaluationLedger {
 public:
  void record(Quantity q, double eps, Attribution att = Attribution::current);
  void note_shrink();
  void note_outcome(bool accepted);
  // Rolls evaluations pre-charged to "next" into the new iteration's counters
  // and resets the per-iteration tallies.
  void begin_iteration();
  LedgerSnapshot snapshot() const { return snap_; }

 private:
  LedgerSnapshot snap_;
  long pending_f_ = 0, pending_g_ = 0, pending_c_ = 0, pending_J_ = 0;
};

// Inexact evaluation interface. Every response is certified: the returned
// value differs from the exact quantity by at most certified_error in the
// matching norm (absolute value for f, Euclidean for g and c, Frobenius for
// J, which upper-bounds the operator norm).
class Oracle {
 public:
  virtual ~Oracle() = default;

  OracleResponse evaluate(const OracleRequest& req, Attribution att = Attribution::current);

  double eval_f(const Vector& x, double eps, Attribution att = Attribution::current);
  Vector eval_g(const Vector& x, double eps, Attribution att = Attribution::current);
  Vector eval_c(const Vector& x, double eps, Attribution att = Attribution::current);
  Matrix eval_J(const Vector& x, double eps, Attribution att = Attribution::current);

  virtual bool exact_capable(Quantity q) const = 0;
  virtual std::string name() const = 0;

  const AccuracyFloor& floors() const { return floors_; }
  EvaluationLedger& ledger() { return ledger_; }
  const EvaluationLedger& ledger() const { return ledger_; }
  const ProblemSpec& problem() const { return *spec_; }

 protected:
  Oracle(const ProblemSpec& spec, AccuracyFloor floors) : spec_(&spec), floors_(floors) {}
  virtual OracleValue compute(const OracleRequest& req, double& certified,
                              double& cost) = 0;

  const ProblemSpec* spec_;
  AccuracyFloor floors_;
  EvaluationLedger ledger_;
};

// Exact reference oracle: ignores the request accuracy, certifies zero error.
class ExactOracle : public Oracle {
 public:
  explicit ExactOracle(const ProblemSpec& spec, AccuracyFloor floors = {})
      : Oracle(spec, floors) {}
  bool exact_capable(Quantity) const override { return true; }
  std::string name() const override { return "exact"; }

 protected:
  OracleValue compute(const OracleRequest& req, double& certified, double& cost) override;
};

enum class NoiseMode { uniform, adversarial };

// Seeded deterministic perturbation scaled to the requested accuracy.
// Adversarial mode uses the maximal allowed magnitude 0.999*eps; uniform mode
// draws the magnitude in [0, 0.999*eps].
class AdditiveNoiseOracle : public Oracle {
 public:
  AdditiveNoiseOracle(const ProblemSpec& spec, std::uint64_t seed,
                      NoiseMode mode = NoiseMode::adversarial, AccuracyFloor floors = {})
      : Oracle(spec, floors), state_(seed ? seed : 0x9e3779b97f4a7c15ull), mode_(mode) {}
  bool exact_capable(Quantity) const override { return true; }  // eps = 0 -> no noise
  std::string name() const override { return "noise"; }

 protected:
  OracleValue compute(const OracleRequest& req, double& certified, double& cost) override;

 private:
  double next_uniform();   // [0,1)
  double next_gaussian();  // standard normal, deterministic
  std::uint64_t state_;
  NoiseMode mode_;
};

// Truncated-series evaluation of f and g: the computed value is the exact one
// plus the tail of a geometrically convergent sine series whose infinite sum
// is known in closed form. Requesting accuracy eps selects the truncation
// order from the closed-form tail bound; c and J are returned exactly.
class TruncatedSeriesOracle : public Oracle {
 public:
  TruncatedSeriesOracle(const ProblemSpec& spec, double amplitude = 1.0,
                        AccuracyFloor floors = {})
      : Oracle(spec, floors), amplitude_(amplitude) {}
  bool exact_capable(Quantity q) const override {
    return q == Quantity::c || q == Quantity::J;
  }
  std::string name() const override { return "series"; }

  // Truncation order honoring the tail bound for a value (amplitude*2^-N) or
  // a gradient (amplitude*(N+2)*2^-N) request.
  static long terms_for_value(double amplitude, double eps);
  static long terms_for_gradient(double amplitude, double eps);

 protected:
  OracleValue compute(const OracleRequest& req, double& certified, double& cost) override;

 private:
  double amplitude_;
};

// Deterministic prefix-mean evaluation of an additive decomposition into
// `summands` terms whose deviations from the exact quantity are bounded
// sinusoids summing to zero; the worst-case tail bound 2*A*(K-N)/K selects
// how many leading terms a request needs.
class PartialSumOracle : public Oracle {
 public:
  PartialSumOracle(const ProblemSpec& spec, long summands = 100, double amplitude = 1.0,
                   AccuracyFloor floors = {})
      : Oracle(spec, floors), summands_(summands), amplitude_(amplitude) {
    if (summands_ < 2) throw std::invalid_argument("partial-sum oracle needs >= 2 summands");
  }
  bool exact_capable(Quantity) const override { return true; }  // N = K reproduces the mean
  std::string name() const override { return "partial"; }

  static long terms_needed(long summands, double amplitude, double eps);

 protected:
  OracleValue compute(const OracleRequest& req, double& certified, double& cost) override;

 private:
  long summands_;
  double amplitude_;
};

}  // namespace arlda
