#include "arlda/subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace arlda {

Vector prox_h(const OuterFunction& h, double lambda, const Vector& v) {
  return h.prox(lambda, v);
}

Vector project_unit_ball(const Vector& v) {
  double nv = v.norm();
  if (nv <= 1.0) return v;
  return v / nv;
}

namespace {

// Both subproblems share the shape  min_x G(x) + h(Jx + c)  with
//   criticality: G(d) = g.d + indicator(||d|| <= 1)
//   model:       G(s) = g.s + (sigma/2)||s||^2
// solved by a primal-dual splitting on the saddle form with h* handled by
// projection onto the dual ball.
struct Splitting {
  const Vector& g;
  const Vector& c;
  const Matrix& J;
  const OuterFunction& h;
  double sigma;  // model only
  bool ball;     // criticality when true

  double primal_objective(const Vector& x) const {
    double v = g.dot(x) + h.value(c + J * x);
    if (!ball) v += 0.5 * sigma * x.squaredNorm();
    return v;
  }

  double dual_value(const Vector& y) const {
    Vector w = g + J.transpose() * y;
    if (ball) return -w.norm() + c.dot(y);
    return -w.squaredNorm() / (2.0 * sigma) + c.dot(y);
  }

  Vector primal_prox(const Vector& z, double tau) const {
    if (ball) return project_unit_ball(z - tau * g);
    return (z - tau * g) / (1.0 + tau * sigma);
  }
};

struct PdhgResult {
  Vector x;
  Vector y;
  double primal_obj = 0.0;  // objective at x
  double dual_val = 0.0;    // best dual value seen
  double gap = 0.0;
  long iterations = 0;
  bool converged = false;
  bool target_met = false;
};

// Runs the splitting until the duality gap closes or, in target mode, until
// the linearized decrease h(c) - (g.x + h(Jx+c)) certifiably reaches
// `target` with a nonnegative model decrease.
PdhgResult run_pdhg(const Splitting& p, const SubproblemOptions& opts, const Vector& x0,
                    const Vector& y0, bool target_mode, double target) {
  const double scale_floor = 1e-12;
  const double L = p.J.norm();
  const double tau = 0.99 / std::max(L, 1e-6);
  const double h_at_c = p.h.value(p.c);

  Vector x = x0;
  Vector y = p.h.project_dual_ball(y0);
  Vector xbar = x;

  PdhgResult best;
  best.x = x;
  best.y = y;
  best.primal_obj = p.primal_objective(x);
  // The zero point is always feasible; never return anything worse.
  Vector zero = Vector::Zero(x.size());
  if (h_at_c < best.primal_obj) {
    best.x = zero;
    best.primal_obj = h_at_c;
  }
  best.dual_val = p.dual_value(y);

  auto check = [&](long it) -> bool {
    double obj = p.primal_objective(x);
    if (obj < best.primal_obj) {
      best.primal_obj = obj;
      best.x = x;
    }
    double dv = p.dual_value(y);
    if (dv > best.dual_val) best.dual_val = dv;
    best.y = y;
    best.iterations = it;
    best.gap = best.primal_obj - best.dual_val;

    if (target_mode) {
      double model_dec = h_at_c - best.primal_obj;  // >= 0 by construction
      double lin_dec = model_dec + 0.5 * p.sigma * best.x.squaredNorm();
      if (lin_dec >= target && model_dec >= 0.0) {
        best.target_met = true;
        best.converged = true;
        return true;
      }
    }
    double primal_decrease = h_at_c - best.primal_obj;
    double tol = std::max(opts.gap_tol * std::max(std::abs(primal_decrease), scale_floor),
                          opts.gap_tol_abs);
    if (best.gap <= tol) {
      best.converged = true;
      return true;
    }
    return false;
  };

  if (check(0)) return best;
  for (long it = 1; it <= opts.max_iter; ++it) {
    y = p.h.project_dual_ball(y + tau * (p.J * xbar + p.c));
    Vector xn = p.primal_prox(x - tau * p.J.transpose() * y, tau);
    xbar = 2.0 * xn - x;
    x = xn;
    if (it % opts.check_interval == 0 || it == opts.max_iter) {
      if (check(it)) return best;
    }
  }
  return best;  // converged stays false
}

}  // namespace

CriticalitySolution solve_criticality(const InexactSnapshot& snap, const OuterFunction& h,
                                      const SubproblemOptions& opts, const WarmStart* warm) {
  if (!snap.g || !snap.c || !snap.J)
    throw std::invalid_argument("solve_criticality needs g, c and J in the snapshot");
  const Vector& g = snap.g->value;
  const Vector& c = snap.c->value;
  const Matrix& J = snap.J->value;

  CriticalitySolution out;
  if (h.kind == OuterKind::zero) {
    // max_{||d||<=1} -g.d has the closed-form boundary solution.
    double ng = g.norm();
    out.d = ng > 0.0 ? Vector(-g / ng) : Vector(Vector::Zero(g.size()));
    out.phi_bar = ng;
    out.certificate = {ng, ng, 0.0, 0};
    out.dual = Vector::Zero(c.size());
    return out;
  }

  Splitting p{g, c, J, h, 0.0, true};
  Vector x0 = warm && warm->primal.size() == g.size() ? project_unit_ball(warm->primal)
                                                      : Vector(Vector::Zero(g.size()));
  Vector y0 = warm && warm->dual.size() == c.size() ? warm->dual
                                                    : Vector(Vector::Zero(c.size()));
  PdhgResult r = run_pdhg(p, opts, x0, y0, false, 0.0);
  double h_at_c = h.value(c);
  out.d = r.x;
  out.phi_bar = h_at_c - r.primal_obj;
  out.certificate.primal_value = out.phi_bar;
  out.certificate.dual_bound = h_at_c - r.dual_val;
  out.certificate.gap = r.gap;
  out.certificate.iterations_used = r.iterations;
  out.dual = r.y;
  if (!r.converged) throw NonConvergenceError(r.gap);
  return out;
}

ModelSolution solve_model(const InexactSnapshot& snap, const OuterFunction& h, double sigma,
                          double target_decrease, const SubproblemOptions& opts,
                          const WarmStart* warm) {
  if (!snap.g || !snap.c || !snap.J)
    throw std::invalid_argument("solve_model needs g, c and J in the snapshot");
  if (!(sigma > 0.0)) throw std::invalid_argument("solve_model requires sigma > 0");
  const Vector& g = snap.g->value;
  const Vector& c = snap.c->value;
  const Matrix& J = snap.J->value;

  // A non-finite target disables the early exit: solve to the gap tolerance.
  const bool has_target = std::isfinite(target_decrease);

  ModelSolution out;
  if (h.kind == OuterKind::zero) {
    Vector s = -g / sigma;
    out.s = s;
    out.report = make_decrease_report(snap, h, s, sigma);
    out.certificate = {out.report.model_decrease, out.report.model_decrease, 0.0, 0};
    out.dual = Vector::Zero(c.size());
    if (has_target && out.report.linearized_decrease < target_decrease)
      throw TargetUnreachableError(out.report.linearized_decrease, 0.0);
    return out;
  }

  Splitting p{g, c, J, h, sigma, false};
  Vector x0 = warm && warm->primal.size() == g.size() ? warm->primal
                                                      : Vector(Vector::Zero(g.size()));
  Vector y0 = warm && warm->dual.size() == c.size() ? warm->dual
                                                    : Vector(Vector::Zero(c.size()));
  PdhgResult r = run_pdhg(p, opts, x0, y0, has_target, target_decrease);
  if (!r.converged) throw NonConvergenceError(r.gap);

  double h_at_c = h.value(c);
  out.s = r.x;
  out.report = make_decrease_report(snap, h, out.s, sigma);
  out.certificate.primal_value = h_at_c - r.primal_obj;  // model decrease at s
  out.certificate.dual_bound = h_at_c - r.dual_val;
  out.certificate.gap = r.gap;
  out.certificate.iterations_used = r.iterations;
  out.dual = r.y;

  if (has_target && !r.target_met && out.report.linearized_decrease < target_decrease)
    throw TargetUnreachableError(out.report.linearized_decrease, r.gap);
  return out;
}

double dual_gap(const SubproblemInstance& inst, const Vector& primal, const Vector& dual) {
  Splitting p{inst.g, inst.c, inst.J, inst.h, inst.sigma,
              inst.kind == SubproblemInstance::Kind::criticality};
  return p.primal_objective(primal) - p.dual_value(dual);
}

}  // namespace arlda
