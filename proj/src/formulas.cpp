#include "arlda/formulas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arlda {

double linearized_decrease(const Vector& g, const Vector& c, const Matrix& J,
                           const OuterFunction& h, const Vector& v) {
  return -g.dot(v) + h.value(c) - h.value(c + J * v);
}

static void require_gcJ(const InexactSnapshot& snap) {
  if (!snap.g || !snap.c || !snap.J)
    throw std::invalid_argument("snapshot is missing g, c or J");
}

double linearized_decrease(const InexactSnapshot& snap, const OuterFunction& h,
                           const Vector& v) {
  require_gcJ(snap);
  return linearized_decrease(snap.g->value, snap.c->value, snap.J->value, h, v);
}

double model_decrease(const Vector& g, const Vector& c, const Matrix& J,
                      const OuterFunction& h, const Vector& v, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("model_decrease requires sigma > 0");
  return linearized_decrease(g, c, J, h, v) - 0.5 * sigma * v.squaredNorm();
}

double model_decrease(const InexactSnapshot& snap, const OuterFunction& h,
                      const Vector& v, double sigma) {
  require_gcJ(snap);
  return model_decrease(snap.g->value, snap.c->value, snap.J->value, h, v, sigma);
}

DecreaseReport make_decrease_report(const InexactSnapshot& snap, const OuterFunction& h,
                                    const Vector& v, double sigma) {
  DecreaseReport r;
  r.direction = v;
  r.linearized_decrease = linearized_decrease(snap, h, v);
  r.norm_v = v.norm();
  r.model_decrease = r.linearized_decrease - 0.5 * sigma * r.norm_v * r.norm_v;
  return r;
}

double error_bound_rhs(double eps_g, double eps_c, double eps_J, double L_h,
                       double norm_v) {
  return (eps_g + L_h * eps_J) * norm_v + 2.0 * L_h * eps_c;
}

double error_bound_rhs(const AccuracyState& acc, double L_h, double norm_v) {
  return error_bound_rhs(acc.eps_g, acc.eps_c, acc.eps_J, L_h, norm_v);
}

double theta_threshold(const AccuracyState& acc, double L_h, double omega,
                       double sigma_min) {
  double a = acc.max_g + L_h * acc.max_J;
  double root = std::sqrt(a * a + 4.0 * L_h * acc.max_c);
  return (a + root) / (omega * sigma_min);
}

double delta_k_eps(double epsilon, double sigma) {
  return (1.0 / 16.0) * std::min(1.0, epsilon / sigma) * epsilon;
}

double nu_k_bound(const AccuracyState& acc, double L_h, double theta_k, double omega,
                  double epsilon, double delta_k, double gamma_eps) {
  double a = (acc.max_g + L_h * acc.max_J) * std::max(1.0, theta_k) + 2.0 * L_h * acc.max_c;
  double b = omega * std::min(0.5 * epsilon, delta_k);
  if (a <= 0.0) return 0.0;  // exact ceilings: no shrink can ever be needed
  if (b <= 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(std::log(a) - std::log(b)) / std::abs(std::log(gamma_eps));
}

double theta_uniform_bound(const AccuracyState& acc, double L_h, double sigma_max,
                           double sigma_min) {
  double a = acc.max_g + L_h * acc.max_J;
  double root = std::sqrt(a * a + 4.0 * L_h * acc.max_c);
  return std::max(1.0, (sigma_max / sigma_min) * (a + root));
}

double nu_eps_bound(const AccuracyState& acc, double L_h, double sigma_max,
                    double sigma_min, double gamma_eps, double epsilon) {
  double theta = theta_uniform_bound(acc, L_h, sigma_max, sigma_min);
  double a = (acc.max_g + L_h * acc.max_J) * theta + 2.0 * L_h * acc.max_c;
  if (a <= 0.0) return 0.0;
  double numer = std::abs(2.0 * std::log(epsilon)) +
                 std::abs(std::log(a) + 2.0 * std::log(4.0 * sigma_max));
  return numer / std::abs(std::log(gamma_eps));
}

double sigma_max_bound(double L_g, double L_J, double L_h, const AlgoConstants& k) {
  double growth = k.gamma3 * (4.0 + 2.0 * (L_g + L_h * L_J)) / (1.0 - k.eta2);
  return std::max({k.sigma0, growth, 1.0 / k.kappa_omega});
}

std::optional<double> sigma_max_bound(const ProblemSpec& spec, const AlgoConstants& k) {
  if (!spec.L_g || !spec.L_J) return std::nullopt;
  return sigma_max_bound(*spec.L_g, *spec.L_J, spec.L_h, k);
}

double tau_bound(double sigma_max, double psi0_minus_low, const AlgoConstants& k,
                 double epsilon) {
  // The successful-iteration count scales like eps^-2.
  double successes = std::floor(8.0 * sigma_max * psi0_minus_low /
                                    (k.eta1 * (1.0 - k.alpha) * epsilon * epsilon) +
                                1.0);
  double unsuccessful_factor = 1.0 + std::abs(std::log(k.gamma1)) / std::log(k.gamma2);
  double sigma_term = std::log(sigma_max / k.sigma0) / std::log(k.gamma2);
  return successes * unsuccessful_factor + sigma_term;
}

}  // namespace arlda
