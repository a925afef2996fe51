#include "arlda/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace arlda {

std::vector<std::string> problem_ids() {
  return {"quad", "lasso1d", "lassoNd", "nl-l1-regression", "rosenbrock-pen"};
}

namespace {

SuiteProblem make_quad() {
  SuiteProblem p;
  p.id = "quad";
  p.description = "smooth strongly convex quadratic, outer part inactive";
  p.probe_radius = 10.0;
  auto& s = p.spec;
  s.n = 2;
  s.m = 1;
  s.f_exact = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.g_exact = [](const Vector& x) { return x; };
  s.c_exact = [](const Vector&) { return Vector::Zero(1); };
  s.J_exact = [](const Vector&) { return Matrix::Zero(1, 2); };
  s.h = {OuterKind::zero, 1.0};
  s.L_g = 0.5;
  s.L_J = 0.0;
  s.psi_low = 0.0;
  s.x0 = Vector(2);
  s.x0 << 1.0, 1.0;
  return p;
}

SuiteProblem make_lasso1d() {
  SuiteProblem p;
  p.id = "lasso1d";
  p.description = "nonconvex double-well quartic plus l1 of the identity";
  p.probe_radius = 6.0;  // sup |f''| = 107 on this box
  auto& s = p.spec;
  s.n = 1;
  s.m = 1;
  s.f_exact = [](const Vector& x) {
    double t = x[0];
    return 0.25 * t * t * t * t - 0.5 * t * t;
  };
  s.g_exact = [](const Vector& x) {
    Vector g(1);
    double t = x[0];
    g[0] = t * t * t - t;
    return g;
  };
  s.c_exact = [](const Vector& x) { return x; };
  s.J_exact = [](const Vector&) { return Matrix::Identity(1, 1); };
  s.h = {OuterKind::l1, 1.0};
  s.L_g = 54.0;
  s.L_J = 0.0;
  s.psi_low = -0.25;  // inf f; the outer part is nonnegative
  s.x0 = Vector(1);
  s.x0 << 5.0;
  return p;
}

SuiteProblem make_lassoNd() {
  SuiteProblem p;
  p.id = "lassoNd";
  p.description = "separable nonconvex quartic with a rank-one coupling plus l1";
  p.probe_radius = 4.0;
  auto& s = p.spec;
  const Index n = 10;
  const double beta = 0.1;
  s.n = n;
  s.m = n;
  s.f_exact = [beta](const Vector& x) {
    double v = 0.0;
    for (Index i = 0; i < x.size(); ++i)
      v += 0.25 * std::pow(x[i], 4) - 0.5 * x[i] * x[i];
    double sum = x.sum();
    return v + 0.5 * beta * sum * sum;
  };
  s.g_exact = [beta](const Vector& x) {
    Vector g(x.size());
    double sum = x.sum();
    for (Index i = 0; i < x.size(); ++i)
      g[i] = x[i] * x[i] * x[i] - x[i] + beta * sum;
    return g;
  };
  s.c_exact = [](const Vector& x) { return x; };
  s.J_exact = [n](const Vector&) { return Matrix::Identity(n, n); };
  s.h = {OuterKind::l1, 1.0};
  s.L_g = 24.0;  // sup ||Hess|| <= 47 + beta*n on the probe box
  s.L_J = 0.0;
  s.psi_low = -2.5;  // n * inf(t^4/4 - t^2/2)
  s.x0 = Vector(n);
  for (Index i = 0; i < n; ++i) s.x0[i] = (i % 2 == 0) ? 1.6 : -1.3;
  return p;
}

struct TanhFitData {
  Vector t;
  Vector y;
};

TanhFitData tanh_fit_data() {
  TanhFitData d;
  const Index m = 12;
  d.t.resize(m);
  for (Index i = 0; i < m; ++i)
    d.t[i] = 0.1 + 1.9 * static_cast<double>(i) / static_cast<double>(m - 1);
  Vector a_true(5), b_true(5);
  a_true << 1.0, -0.7, 0.5, -0.3, 0.2;
  b_true << 0.6, 1.1, 1.6, 2.1, 2.6;
  d.y.resize(m);
  for (Index i = 0; i < m; ++i) {
    double v = 0.0;
    for (Index j = 0; j < 5; ++j) v += a_true[j] * std::tanh(b_true[j] * d.t[i]);
    d.y[i] = v;
  }
  // Two outliers give the l1 fit something to be robust against.
  d.y[3] += 0.25;
  d.y[8] -= 0.2;
  return d;
}

SuiteProblem make_nl_l1_regression() {
  SuiteProblem p;
  p.id = "nl-l1-regression";
  p.description = "l1 fit of a 5-term tanh expansion, f = 0, nonlinear residuals";
  p.probe_radius = 3.0;
  auto& s = p.spec;
  const Index n = 10;
  const Index m = 12;
  const TanhFitData data = tanh_fit_data();
  s.n = n;
  s.m = m;
  s.f_exact = [](const Vector&) { return 0.0; };
  s.g_exact = [n](const Vector&) { return Vector::Zero(n); };
  s.c_exact = [data](const Vector& x) {
    Vector c(data.t.size());
    for (Index i = 0; i < data.t.size(); ++i) {
      double v = 0.0;
      for (Index j = 0; j < 5; ++j) v += x[j] * std::tanh(x[5 + j] * data.t[i]);
      c[i] = v - data.y[i];
    }
    return c;
  };
  s.J_exact = [data, n](const Vector& x) {
    Matrix J(data.t.size(), n);
    for (Index i = 0; i < data.t.size(); ++i) {
      for (Index j = 0; j < 5; ++j) {
        double u = x[5 + j] * data.t[i];
        double th = std::tanh(u);
        double sech2 = 1.0 - th * th;
        J(i, j) = th;
        J(i, 5 + j) = x[j] * data.t[i] * sech2;
      }
    }
    return J;
  };
  s.h = {OuterKind::l1, 1.0};
  s.L_g = 0.0;
  s.L_J = 45.0;  // entrywise slopes on the probe box, t <= 2
  s.psi_low = 0.0;
  s.x0 = Vector(n);
  s.x0 << 1.25, -0.45, 0.75, -0.05, 0.45, 0.85, 1.35, 1.85, 2.35, 2.85;
  return p;
}

SuiteProblem make_rosenbrock_pen() {
  SuiteProblem p;
  p.id = "rosenbrock-pen";
  p.description = "Rosenbrock with an exact penalty on the unit-circle residual";
  p.probe_radius = 3.0;
  auto& s = p.spec;
  s.n = 2;
  s.m = 1;
  s.f_exact = [](const Vector& x) {
    double a = x[1] - x[0] * x[0];
    double b = 1.0 - x[0];
    return 100.0 * a * a + b * b;
  };
  s.g_exact = [](const Vector& x) {
    Vector g(2);
    double a = x[1] - x[0] * x[0];
    g[0] = -400.0 * a * x[0] - 2.0 * (1.0 - x[0]);
    g[1] = 200.0 * a;
    return g;
  };
  s.c_exact = [](const Vector& x) {
    Vector c(1);
    c[0] = x.squaredNorm() - 1.0;
    return c;
  };
  s.J_exact = [](const Vector& x) {
    Matrix J(1, 2);
    J << 2.0 * x[0], 2.0 * x[1];
    return J;
  };
  s.h = {OuterKind::linf, 1.0};
  s.L_g = 6700.0;  // Hessian row sums on the probe box
  s.L_J = 1.0;     // exact: ||J(x)-J(y)|| = 2||x-y||
  s.psi_low = 0.0;
  s.x0 = Vector(2);
  s.x0 << -1.2, 1.0;
  return p;
}

}  // namespace

SuiteProblem make_problem(const std::string& id, std::optional<OuterFunction> h_override) {
  SuiteProblem p;
  if (id == "quad")
    p = make_quad();
  else if (id == "lasso1d")
    p = make_lasso1d();
  else if (id == "lassoNd")
    p = make_lassoNd();
  else if (id == "nl-l1-regression")
    p = make_nl_l1_regression();
  else if (id == "rosenbrock-pen")
    p = make_rosenbrock_pen();
  else
    throw std::invalid_argument("unknown problem id '" + id + "'");

  if (h_override) p.spec.h = *h_override;
  p.spec.L_h = p.spec.h.lipschitz_constant(p.spec.m);
  return p;
}

}  // namespace arlda
