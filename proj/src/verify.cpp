#include "arlda/verify.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "arlda/formulas.hpp"

namespace arlda {

namespace {

using Objective = std::function<double(const Vector&)>;
using IntervalFn = std::function<std::pair<double, double>(const Vector&, const Vector&)>;

// Line searches along the coordinate axes alone can stall on the kink lines
// of h composed with an affine map (those lines are rarely axis-aligned), so
// the polish also searches along each kink direction of J and a few fixed
// diagonals, restarted from several grid candidates.
std::vector<Vector> polish_directions(Index n, const Matrix& J) {
  std::vector<Vector> dirs;
  for (Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  // Kink normals: single rows for separable norms, row sums/differences for
  // the max norm.
  std::vector<Vector> normals;
  for (Index r = 0; r < J.rows(); ++r) normals.push_back(J.row(r).transpose());
  for (Index r = 0; r < J.rows(); ++r)
    for (Index q = r + 1; q < J.rows(); ++q) {
      normals.push_back((J.row(r) - J.row(q)).transpose());
      normals.push_back((J.row(r) + J.row(q)).transpose());
    }
  for (Vector row : normals) {
    double nr = row.norm();
    if (nr < 1e-12) continue;
    row /= nr;
    if (n == 2) {
      Vector t(2);
      t << -row[1], row[0];
      dirs.push_back(t);
    } else if (n == 3) {
      // two spanning directions of the kink plane
      Vector seed = std::abs(row[0]) < 0.9 ? Vector(Vector::Unit(3, 0)) : Vector(Vector::Unit(3, 1));
      Vector t1 = seed - row * row.dot(seed);
      t1.normalize();
      Vector t2(3);
      t2[0] = row[1] * t1[2] - row[2] * t1[1];
      t2[1] = row[2] * t1[0] - row[0] * t1[2];
      t2[2] = row[0] * t1[1] - row[1] * t1[0];
      dirs.push_back(t1);
      dirs.push_back(t2);
    }
  }
  if (n >= 2) {
    Vector d1 = Vector::Ones(n).normalized();
    dirs.push_back(d1);
    Vector d2 = d1;
    d2[0] = -d2[0];
    dirs.push_back(d2.normalized());
  }
  return dirs;
}

// Golden-section refinement along a direction set; `interval` returns the
// feasible parameter range from a point along a direction.
double line_polish(const Objective& obj, Vector& s, const std::vector<Vector>& dirs,
                   const IntervalFn& interval, int rounds) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = obj(s);
  for (int round = 0; round < rounds; ++round) {
    double before = best;
    for (const auto& u : dirs) {
      auto [lo, hi] = interval(s, u);
      if (!(hi > lo)) continue;
      double arg_best = 0.0;
      double a = lo, b = hi;
      auto eval1 = [&](double t) {
        double v = obj(s + t * u);
        if (v > best) {
          best = v;
          arg_best = t;
        }
        return v;
      };
      double c = b - invphi * (b - a);
      double e = a + invphi * (b - a);
      double fc = eval1(c), fe = eval1(e);
      for (int it = 0; it < 72; ++it) {
        if (fc > fe) {
          b = e;
          e = c;
          fe = fc;
          c = b - invphi * (b - a);
          fc = eval1(c);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + invphi * (b - a);
          fe = eval1(e);
        }
      }
      if (arg_best != 0.0) s += arg_best * u;
    }
    if (best - before <= 1e-15 && round >= 2) break;
  }
  return best;
}

std::pair<double, double> ball_interval(const Vector& s, const Vector& u) {
  // solve ||s + t u|| = 1 for the feasible t range
  double uu = u.squaredNorm();
  if (uu < 1e-18) return {0.0, 0.0};
  double su = s.dot(u);
  double disc = su * su - uu * (s.squaredNorm() - 1.0);
  if (disc < 0.0) return {0.0, 0.0};
  double root = std::sqrt(disc);
  return {(-su - root) / uu, (-su + root) / uu};
}

// Local pattern search: dense grid in a box around the incumbent, halving
// the box whenever the argmax is interior. Robust at kink vertices where
// pure line searches stall.
double zoom_polish(const Objective& obj, Vector& s, double radius,
                   const std::function<Vector(const Vector&)>& project) {
  const int steps = 5;  // offsets -5..5 per axis
  const Index n = s.size();
  double best = obj(s);
  for (int it = 0; it < 160 && radius > 1e-11; ++it) {
    Vector center = s;
    bool on_edge = false;
    bool improved = false;
    Vector offset = Vector::Zero(n);
    std::function<void(Index)> sweep = [&](Index dim) {
      for (int o = -steps; o <= steps; ++o) {
        offset[dim] = static_cast<double>(o) * radius / steps;
        if (dim + 1 < n) {
          sweep(dim + 1);
        } else {
          Vector p = project(center + offset);
          double v = obj(p);
          if (v > best) {
            best = v;
            s = p;
            improved = true;
            on_edge = offset.lpNorm<Eigen::Infinity>() >= radius - 1e-15;
          }
        }
      }
    };
    sweep(0);
    if (improved && on_edge)
      radius *= 1.6;  // the walk is still moving; widen the net
    else
      radius *= 0.5;
  }
  return best;
}

// Keeps the best few grid candidates as polish starting points.
struct TopCandidates {
  explicit TopCandidates(size_t k) : cap(k) {}
  void offer(double value, const Vector& point) {
    if (entries.size() < cap) {
      entries.push_back({value, point});
    } else {
      size_t worst = 0;
      for (size_t i = 1; i < entries.size(); ++i)
        if (entries[i].first < entries[worst].first) worst = i;
      if (value > entries[worst].first) entries[worst] = {value, point};
    }
  }
  size_t cap;
  std::vector<std::pair<double, Vector>> entries;
};

double grid_max_over_ball(const Objective& obj, Index n, long resolution,
                          const Matrix& J) {
  if (n > 3) throw std::invalid_argument("brute force limited to n <= 3");
  if (resolution < 100) throw std::invalid_argument("resolution must be >= 100");

  TopCandidates top(8);
  double best = obj(Vector::Zero(n));
  top.offer(best, Vector::Zero(n));
  auto consider = [&](const Vector& d) {
    double v = obj(d);
    best = std::max(best, v);
    top.offer(v, d);
  };

  for (Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    consider(e);
    consider(-e);
  }

  const long nr = std::max<long>(resolution / 4, 25);
  if (n == 1) {
    for (long i = 0; i <= resolution; ++i) {
      Vector d(1);
      d[0] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(resolution);
      consider(d);
    }
  } else if (n == 2) {
    for (long ir = 1; ir <= nr; ++ir) {
      double r = static_cast<double>(ir) / static_cast<double>(nr);
      for (long ia = 0; ia < resolution; ++ia) {
        double t = 2.0 * M_PI * static_cast<double>(ia) / static_cast<double>(resolution);
        Vector d(2);
        d << r * std::cos(t), r * std::sin(t);
        consider(d);
      }
    }
  } else {
    const long np = std::max<long>(resolution / 2, 50);
    for (long ir = 1; ir <= nr; ++ir) {
      double r = static_cast<double>(ir) / static_cast<double>(nr);
      for (long ip = 0; ip <= np; ++ip) {
        double phi = M_PI * static_cast<double>(ip) / static_cast<double>(np);
        for (long ia = 0; ia < resolution; ++ia) {
          double t = 2.0 * M_PI * static_cast<double>(ia) / static_cast<double>(resolution);
          Vector d(3);
          d << r * std::sin(phi) * std::cos(t), r * std::sin(phi) * std::sin(t),
              r * std::cos(phi);
          consider(d);
        }
      }
    }
  }

  auto dirs = polish_directions(n, J);
  auto to_ball = [](const Vector& p) {
    double np = p.norm();
    return np > 1.0 ? Vector(p / np) : p;
  };
  for (auto& [value, point] : top.entries) {
    Vector s = point;
    line_polish(obj, s, dirs, ball_interval, 40);
    zoom_polish(obj, s, 0.5, to_ball);
    best = std::max(best, line_polish(obj, s, dirs, ball_interval, 200));
  }
  return best;
}

}  // namespace

double grid_max_linearized_decrease(const Vector& g, const Vector& c, const Matrix& J,
                                    const OuterFunction& h, long resolution) {
  Objective obj = [&](const Vector& d) { return linearized_decrease(g, c, J, h, d); };
  return grid_max_over_ball(obj, g.size(), resolution, J);
}

double grid_max_model_decrease(const Vector& g, const Vector& c, const Matrix& J,
                               const OuterFunction& h, double sigma, long resolution) {
  Index n = g.size();
  if (n > 3) throw std::invalid_argument("brute force limited to n <= 3");
  Objective obj = [&](const Vector& s) { return model_decrease(g, c, J, h, s, sigma); };

  // Any maximizer with nonnegative model decrease lies in this box.
  double radius = 2.0 * (g.norm() + h.lipschitz_constant(c.size()) * J.norm()) / sigma;
  radius = 1.05 * radius + 1e-9;

  TopCandidates top(8);
  double best = obj(Vector::Zero(n));
  top.offer(best, Vector::Zero(n));
  long res = std::max<long>(resolution, 100);
  long per_dim = n == 1 ? res : (n == 2 ? std::max<long>(res / 2, 60) : std::max<long>(res / 4, 40));
  std::function<void(Vector&, Index)> sweep = [&](Vector& s, Index dim) {
    for (long i = 0; i <= per_dim; ++i) {
      s[dim] = -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(per_dim);
      if (dim + 1 < n)
        sweep(s, dim + 1);
      else {
        double v = obj(s);
        best = std::max(best, v);
        top.offer(v, s);
      }
    }
  };
  Vector scratch = Vector::Zero(n);
  sweep(scratch, 0);

  auto dirs = polish_directions(n, J);
  auto box_interval = [radius](const Vector& s, const Vector& u) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < s.size(); ++i) {
      if (std::abs(u[i]) < 1e-18) continue;
      double a = (-radius - s[i]) / u[i];
      double b = (radius - s[i]) / u[i];
      lo = std::max(lo, std::min(a, b));
      hi = std::min(hi, std::max(a, b));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return std::pair<double, double>(0.0, 0.0);
    return std::pair<double, double>(lo, hi);
  };
  auto clamp_box = [radius](const Vector& p) {
    return Vector(p.cwiseMax(-radius).cwiseMin(radius));
  };
  for (auto& [value, point] : top.entries) {
    Vector s = point;
    line_polish(obj, s, dirs, box_interval, 40);
    zoom_polish(obj, s, radius / 4.0, clamp_box);
    best = std::max(best, line_polish(obj, s, dirs, box_interval, 200));
  }
  return best;
}

double brute_force_phi(const ProblemSpec& spec, const Vector& x, long resolution) {
  Vector g = spec.g_exact(x);
  Vector c = spec.c_exact(x);
  Matrix J = spec.J_exact(x);
  return grid_max_linearized_decrease(g, c, J, spec.h, resolution);
}

FiniteDiffReport finite_diff_check(const ProblemSpec& spec, const Vector& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check requires step > 0");
  FiniteDiffReport rep;
  Vector g = spec.g_exact(x);
  Matrix J = spec.J_exact(x);
  for (Index i = 0; i < spec.n; ++i) {
    Vector xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    double gi = (spec.f_exact(xp) - spec.f_exact(xm)) / (2.0 * step);
    rep.max_dev_g = std::max(rep.max_dev_g, std::abs(gi - g[i]));
    Vector ji = (spec.c_exact(xp) - spec.c_exact(xm)) / (2.0 * step);
    rep.max_dev_J = std::max(rep.max_dev_J, (ji - J.col(i)).cwiseAbs().maxCoeff());
  }
  return rep;
}

std::vector<AuditFinding> audit_run(const ProblemSpec& spec, const AlgoConstants& consts,
                                    const std::vector<IterationRecord>& records,
                                    const std::vector<AuditSample>& samples) {
  const double tol = 1e-9;
  std::vector<AuditFinding> out;
  auto add = [&](long k, const std::string& name, double bound, double measured) {
    out.push_back({k, name, bound, measured, measured <= bound + tol});
  };

  const double L_h = spec.L_h;
  auto sigma_max = sigma_max_bound(spec, consts);
  AccuracyState maxima = AccuracyState::from_constants(consts);

  // Index samples by iteration.
  auto sample_for = [&](long k) -> const AuditSample* {
    for (const auto& s : samples)
      if (s.k == k) return &s;
    return nullptr;
  };

  for (const auto& rec : records) {
    bool full = std::isfinite(rec.step_norm);

    // Relative accuracy level: recurrence for k >= 1, bound only at k = 0.
    if (rec.k == 0)
      add(rec.k, "omega-initial", std::min(consts.kappa_omega, 1.0 / consts.sigma0), rec.omega);
    else
      add(rec.k, "omega-update",
          0.0, std::abs(rec.omega - std::min(consts.kappa_omega, 1.0 / rec.sigma)));

    add(rec.k, "omega-coupling", rec.omega, rec.eps_f + L_h * rec.eps_c);

    if (sigma_max) add(rec.k, "sigma-cap", *sigma_max, rec.sigma);

    if (rec.omega > 0.0) {
      double theta_k = theta_threshold(maxima, L_h, rec.omega, consts.sigma_min);
      double delta_k = delta_k_eps(consts.epsilon, rec.sigma);
      double nu_k = nu_k_bound(maxima, L_h, theta_k, rec.omega, consts.epsilon, delta_k,
                               consts.gamma_eps);
      if (std::isfinite(nu_k))
        add(rec.k, "shrink-budget", std::ceil(nu_k), static_cast<double>(rec.shrinks));
    }
    add(rec.k, "f-evals", 2.0, static_cast<double>(rec.nf));

    if (!full) continue;

    add(rec.k, "sufficient-decrease",
        rec.lin_decrease, 0.25 * std::min(1.0, rec.phi_bar / rec.sigma) * rec.phi_bar);
    add(rec.k, "step-quadratic-decrease",
        rec.lin_decrease, 0.5 * rec.sigma * rec.step_norm * rec.step_norm);

    const AuditSample* smp = sample_for(rec.k);
    if (!smp) continue;

    double psi_x = spec.psi(smp->x);
    Vector trial = smp->x + smp->s;
    double psi_trial = spec.psi(trial);
    double psi_bound = psi_error_bound(rec.eps_f, rec.eps_c, L_h);
    add(rec.k, "err-psi", psi_bound, std::abs(smp->psi_bar_x - psi_x));
    add(rec.k, "err-psi-trial", psi_bound, std::abs(smp->psi_bar_trial - psi_trial));

    // Exact linearized decrease at the recorded step.
    Vector g = spec.g_exact(smp->x);
    Vector c = spec.c_exact(smp->x);
    Matrix J = spec.J_exact(smp->x);
    double dell_exact = linearized_decrease(g, c, J, spec.h, smp->s);
    double dell_bound = error_bound_rhs(rec.eps_g, rec.eps_c, rec.eps_J, L_h, rec.step_norm);
    add(rec.k, "err-dell", dell_bound, std::abs(rec.lin_decrease - dell_exact));

    double rel_bound = 1.5 * rec.omega * rec.lin_decrease;
    add(rec.k, "err-psi-relative", rel_bound, std::abs(smp->psi_bar_x - psi_x));
    add(rec.k, "err-psi-relative-trial", rel_bound, std::abs(smp->psi_bar_trial - psi_trial));
  }

  // Run-level bounds.
  if (sigma_max && spec.psi_low) {
    double gap = std::max(spec.psi(spec.x0) - *spec.psi_low, 0.0);
    double tau = tau_bound(*sigma_max, gap, consts, consts.epsilon);
    add(-1, "iterations-tau", tau, static_cast<double>(records.size()));
  }
  if (consts.monotonic) {
    double worst_increase = 0.0;
    long total_shrinks = 0;
    for (size_t i = 0; i < records.size(); ++i) {
      total_shrinks += records[i].shrinks;
      if (i == 0) continue;
      worst_increase = std::max({worst_increase, records[i].eps_f - records[i - 1].eps_f,
                                 records[i].eps_g - records[i - 1].eps_g,
                                 records[i].eps_c - records[i - 1].eps_c,
                                 records[i].eps_J - records[i - 1].eps_J});
    }
    add(-1, "eps-monotone", 0.0, worst_increase);
    if (sigma_max) {
      double nu = nu_eps_bound(maxima, L_h, *sigma_max, consts.sigma_min, consts.gamma_eps,
                               consts.epsilon);
      add(-1, "total-shrink-budget", std::ceil(nu), static_cast<double>(total_shrinks));
    }
  }
  return out;
}

}  // namespace arlda
