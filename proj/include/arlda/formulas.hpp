#pragma once

#include <optional>

#include "arlda/accuracy.hpp"
#include "arlda/constants.hpp"
#include "arlda/outer_function.hpp"
#include "arlda/problem.hpp"
#include "arlda/snapshot.hpp"
#include "arlda/types.hpp"

namespace arlda {

// Decrease of the first-order composite model at direction v,
//   -g^T v + h(c) - h(c + J v),
// without the quadratic regularization term.
double linearized_decrease(const Vector& g, const Vector& c, const Matrix& J,
                           const OuterFunction& h, const Vector& v);
double linearized_decrease(const InexactSnapshot& snap, const OuterFunction& h,
                           const Vector& v);

// linearized_decrease minus (sigma/2)*||v||^2.
double model_decrease(const Vector& g, const Vector& c, const Matrix& J,
                      const OuterFunction& h, const Vector& v, double sigma);
double model_decrease(const InexactSnapshot& snap, const OuterFunction& h,
                      const Vector& v, double sigma);

struct DecreaseReport {
  Vector direction;
  double linearized_decrease = 0.0;
  double model_decrease = 0.0;
  double norm_v = 0.0;
};

DecreaseReport make_decrease_report(const InexactSnapshot& snap, const OuterFunction& h,
                                    const Vector& v, double sigma);

// Bound on |psi_bar - psi|.
inline double psi_error_bound(double eps_f, double eps_c, double L_h) {
  return eps_f + L_h * eps_c;
}

// Bound on the linearized-decrease error at a direction of norm `norm_v`:
// (eps_g + L_h*eps_J)*norm_v + 2*L_h*eps_c.
double error_bound_rhs(double eps_g, double eps_c, double eps_J, double L_h, double norm_v);
double error_bound_rhs(const AccuracyState& acc, double L_h, double norm_v);

// Step-norm threshold above which the step-accuracy test is guaranteed to
// pass; uses the accuracy ceilings.
double theta_threshold(const AccuracyState& acc, double L_h, double omega, double sigma_min);

// Lower bound on the linearized decrease before termination:
// (1/16)*min(1, epsilon/sigma)*epsilon.
double delta_k_eps(double epsilon, double sigma);

// Per-iteration cap on the number of accuracy shrinks.
double nu_k_bound(const AccuracyState& acc, double L_h, double theta_k, double omega,
                  double epsilon, double delta_k, double gamma_eps);

// Uniform (k-independent) versions used by the monotonic-variant audit.
double theta_uniform_bound(const AccuracyState& acc, double L_h, double sigma_max,
                           double sigma_min);
double nu_eps_bound(const AccuracyState& acc, double L_h, double sigma_max,
                    double sigma_min, double gamma_eps, double epsilon);

// Regularization-parameter ceiling; needs the Lipschitz constants.
double sigma_max_bound(double L_g, double L_J, double L_h, const AlgoConstants& k);
std::optional<double> sigma_max_bound(const ProblemSpec& spec, const AlgoConstants& k);

// Iteration-count ceiling.
double tau_bound(double sigma_max, double psi0_minus_low, const AlgoConstants& k,
                 double epsilon);

}  // namespace arlda
