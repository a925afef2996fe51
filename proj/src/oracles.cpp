#include "arlda/oracles.hpp"

#include <cmath>

namespace arlda {

void EvaluationLedger::record(Quantity q, double eps, Attribution att) {
  auto bump = [&](long& total, long& iter, long& pending, double& min_eps) {
    ++total;
    if (att == Attribution::next)
      ++pending;
    else
      ++iter;
    if (eps < min_eps) min_eps = eps;
  };
  switch (q) {
    case Quantity::f: bump(snap_.total_f, snap_.iter_f, pending_f_, snap_.min_eps_f); break;
    case Quantity::g: bump(snap_.total_g, snap_.iter_g, pending_g_, snap_.min_eps_g); break;
    case Quantity::c: bump(snap_.total_c, snap_.iter_c, pending_c_, snap_.min_eps_c); break;
    case Quantity::J: bump(snap_.total_J, snap_.iter_J, pending_J_, snap_.min_eps_J); break;
  }
}

void EvaluationLedger::note_shrink() {
  ++snap_.shrink_events;
  ++snap_.iter_shrinks;
}

void EvaluationLedger::note_outcome(bool accepted) {
  if (accepted)
    ++snap_.successful;
  else
    ++snap_.unsuccessful;
}

void EvaluationLedger::begin_iteration() {
  snap_.iter_f = pending_f_;
  snap_.iter_g = pending_g_;
  snap_.iter_c = pending_c_;
  snap_.iter_J = pending_J_;
  pending_f_ = pending_g_ = pending_c_ = pending_J_ = 0;
  snap_.iter_shrinks = 0;
}

OracleResponse Oracle::evaluate(const OracleRequest& req, Attribution att) {
  if (req.accuracy < 0.0) throw std::invalid_argument("oracle accuracy must be >= 0");
  if (req.accuracy == 0.0 && !exact_capable(req.quantity))
    throw std::invalid_argument(std::string("oracle '") + name() +
                                "' cannot evaluate " + quantity_name(req.quantity) +
                                " exactly; request a positive accuracy");
  double floor = floors_.of(req.quantity);
  if (req.accuracy < floor) throw AccuracyFloorError(req.quantity, req.accuracy, floor);

  OracleResponse resp;
  resp.value = compute(req, resp.certified_error, resp.cost_units);
  ledger_.record(req.quantity, req.accuracy, att);
  return resp;
}

double Oracle::eval_f(const Vector& x, double eps, Attribution att) {
  return std::get<double>(evaluate({x, Quantity::f, eps}, att).value);
}
Vector Oracle::eval_g(const Vector& x, double eps, Attribution att) {
  return std::get<Vector>(evaluate({x, Quantity::g, eps}, att).value);
}
Vector Oracle::eval_c(const Vector& x, double eps, Attribution att) {
  return std::get<Vector>(evaluate({x, Quantity::c, eps}, att).value);
}
Matrix Oracle::eval_J(const Vector& x, double eps, Attribution att) {
  return std::get<Matrix>(evaluate({x, Quantity::J, eps}, att).value);
}

// ---------------------------------------------------------------- exact ----

OracleValue ExactOracle::compute(const OracleRequest& req, double& certified,
                                 double& cost) {
  certified = 0.0;
  cost = 1.0;
  switch (req.quantity) {
    case Quantity::f: return spec_->f_exact(req.point);
    case Quantity::g: return spec_->g_exact(req.point);
    case Quantity::c: return spec_->c_exact(req.point);
    case Quantity::J: return spec_->J_exact(req.point);
  }
  return 0.0;
}

// ---------------------------------------------------------------- noise ----

double AdditiveNoiseOracle::next_uniform() {
  // splitmix64; deterministic across platforms
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double AdditiveNoiseOracle::next_gaussian() {
  double u1 = next_uniform();
  double u2 = next_uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

OracleValue AdditiveNoiseOracle::compute(const OracleRequest& req, double& certified,
                                         double& cost) {
  cost = 1.0;
  const double eps = req.accuracy;
  if (eps == 0.0) {
    certified = 0.0;
    switch (req.quantity) {
      case Quantity::f: return spec_->f_exact(req.point);
      case Quantity::g: return spec_->g_exact(req.point);
      case Quantity::c: return spec_->c_exact(req.point);
      case Quantity::J: return spec_->J_exact(req.point);
    }
  }
  double magnitude = 0.999 * eps;
  if (mode_ == NoiseMode::uniform) magnitude *= next_uniform();
  certified = magnitude;

  switch (req.quantity) {
    case Quantity::f: {
      double sign = next_uniform() < 0.5 ? -1.0 : 1.0;
      return spec_->f_exact(req.point) + sign * magnitude;
    }
    case Quantity::g:
    case Quantity::c: {
      Index dim = req.quantity == Quantity::g ? spec_->n : spec_->m;
      Vector dir(dim);
      for (Index i = 0; i < dim; ++i) dir[i] = next_gaussian();
      double nd = dir.norm();
      if (nd == 0.0) {
        dir.setZero();
        dir[0] = 1.0;
        nd = 1.0;
      }
      Vector base = req.quantity == Quantity::g ? spec_->g_exact(req.point)
                                                : spec_->c_exact(req.point);
      return Vector(base + dir * (magnitude / nd));
    }
    case Quantity::J: {
      Matrix dir(spec_->m, spec_->n);
      for (Index i = 0; i < spec_->m; ++i)
        for (Index j = 0; j < spec_->n; ++j) dir(i, j) = next_gaussian();
      double nd = dir.norm();  // Frobenius
      if (nd == 0.0) {
        dir.setZero();
        dir(0, 0) = 1.0;
        nd = 1.0;
      }
      return Matrix(spec_->J_exact(req.point) + dir * (magnitude / nd));
    }
  }
  return 0.0;
}

// --------------------------------------------------------------- series ----

namespace {

// S(t) = sum_{i>=1} 2^-i sin(i t) = 2 sin t / (5 - 4 cos t)
double series_closed_form(double t) { return 2.0 * std::sin(t) / (5.0 - 4.0 * std::cos(t)); }

// d/dt S(t) = (10 cos t - 8) / (5 - 4 cos t)^2
double series_closed_form_derivative(double t) {
  double d = 5.0 - 4.0 * std::cos(t);
  return (10.0 * std::cos(t) - 8.0) / (d * d);
}

double series_partial(double t, long terms) {
  double s = 0.0, w = 1.0;
  for (long i = 1; i <= terms; ++i) {
    w *= 0.5;
    s += w * std::sin(static_cast<double>(i) * t);
  }
  return s;
}

double series_partial_derivative(double t, long terms) {
  double s = 0.0, w = 1.0;
  for (long i = 1; i <= terms; ++i) {
    w *= 0.5;
    s += w * static_cast<double>(i) * std::cos(static_cast<double>(i) * t);
  }
  return s;
}

}  // namespace

long TruncatedSeriesOracle::terms_for_value(double amplitude, double eps) {
  long n = 1;
  while (amplitude * std::pow(2.0, -static_cast<double>(n)) > eps && n < 4000) ++n;
  return n;
}

long TruncatedSeriesOracle::terms_for_gradient(double amplitude, double eps) {
  long n = 1;
  while (amplitude * static_cast<double>(n + 2) * std::pow(2.0, -static_cast<double>(n)) > eps &&
         n < 4000)
    ++n;
  return n;
}

OracleValue TruncatedSeriesOracle::compute(const OracleRequest& req, double& certified,
                                           double& cost) {
  const double t = req.point[0];
  switch (req.quantity) {
    case Quantity::f: {
      long n = terms_for_value(amplitude_, req.accuracy);
      certified = amplitude_ * std::pow(2.0, -static_cast<double>(n));
      cost = static_cast<double>(n);
      double tail = series_partial(t, n) - series_closed_form(t);
      return spec_->f_exact(req.point) + amplitude_ * tail;
    }
    case Quantity::g: {
      long n = terms_for_gradient(amplitude_, req.accuracy);
      certified = amplitude_ * static_cast<double>(n + 2) * std::pow(2.0, -static_cast<double>(n));
      cost = static_cast<double>(n);
      double tail = series_partial_derivative(t, n) - series_closed_form_derivative(t);
      Vector g = spec_->g_exact(req.point);
      g[0] += amplitude_ * tail;
      return g;
    }
    case Quantity::c:
      certified = 0.0;
      cost = 1.0;
      return spec_->c_exact(req.point);
    case Quantity::J:
      certified = 0.0;
      cost = 1.0;
      return spec_->J_exact(req.point);
  }
  return 0.0;
}

// -------------------------------------------------------------- partial ----

long PartialSumOracle::terms_needed(long summands, double amplitude, double eps) {
  if (eps <= 0.0) return summands;
  const double k = static_cast<double>(summands);
  double exact = k * (1.0 - eps / (2.0 * amplitude));
  long n = static_cast<long>(std::ceil(exact - 1e-9));
  return std::max<long>(1, std::min(summands, n));
}

OracleValue PartialSumOracle::compute(const OracleRequest& req, double& certified,
                                      double& cost) {
  const double theta = req.point[0];
  const double k = static_cast<double>(summands_);
  long n = terms_needed(summands_, amplitude_, req.accuracy);
  certified = 2.0 * amplitude_ * static_cast<double>(summands_ - n) / k;
  cost = static_cast<double>(n);

  // Prefix means of the per-term deviations; the full mean is exactly zero.
  double dev_sin = 0.0, dev_cos = 0.0;
  for (long i = 1; i <= n; ++i) {
    double phase = theta + 2.0 * M_PI * static_cast<double>(i) / k;
    dev_sin += std::sin(phase);
    dev_cos += std::cos(phase);
  }
  dev_sin *= amplitude_ / static_cast<double>(n);
  dev_cos *= amplitude_ / static_cast<double>(n);

  switch (req.quantity) {
    case Quantity::f:
      return spec_->f_exact(req.point) + dev_sin;
    case Quantity::g: {
      Vector g = spec_->g_exact(req.point);
      g[0] += dev_cos;
      return g;
    }
    case Quantity::c: {
      Vector c = spec_->c_exact(req.point);
      c.array() += dev_sin / std::sqrt(static_cast<double>(spec_->m));
      return c;
    }
    case Quantity::J: {
      Matrix J = spec_->J_exact(req.point);
      J.col(0).array() += dev_cos / std::sqrt(static_cast<double>(spec_->m));
      return J;
    }
  }
  return 0.0;
}

}  // namespace arlda
