#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arlda/formulas.hpp"
#include "test_util.hpp"

using namespace arlda;
using arlda::testing::Rng;
using arlda::testing::snapshot_of;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

// Independent dense grid search for the 1-D decrease maximizers.
struct GridMax {
  double arg = 0.0;
  double value = -1e300;
};

template <class F>
GridMax grid_search_1d(F&& f, double lo, double hi, double step) {
  GridMax best;
  for (double s = lo; s <= hi + 1e-15; s += step) {
    double v = f(s);
    if (v > best.value) {
      best.value = v;
      best.arg = s;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("linearized decrease examples") {
  OuterFunction zero{OuterKind::zero, 1.0};
  auto snap = snapshot_of(vec2(0, 0), vec2(3, 4), Vector::Zero(1), Matrix::Zero(1, 2));

  CHECK(linearized_decrease(snap, zero, vec2(0, 0)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(linearized_decrease(snap, zero, vec2(-0.6, -0.8)) == doctest::Approx(5.0));

  OuterFunction l1{OuterKind::l1, 1.0};
  auto snap1 = snapshot_of(vec1(0), vec1(0), vec1(2), Matrix::Identity(1, 1));
  CHECK(linearized_decrease(snap1, l1, vec1(-1)) == doctest::Approx(1.0));
}

TEST_CASE("linearized decrease requires a complete snapshot") {
  InexactSnapshot snap(vec2(0, 0));
  snap.set_g(vec2(1, 1), 0.0);
  OuterFunction zero{OuterKind::zero, 1.0};
  CHECK_THROWS_AS(linearized_decrease(snap, zero, vec2(1, 0)), std::invalid_argument);
}

TEST_CASE("model decrease examples") {
  OuterFunction zero{OuterKind::zero, 1.0};
  auto snap = snapshot_of(vec2(0, 0), vec2(3, 4), Vector::Zero(1), Matrix::Zero(1, 2));
  CHECK(model_decrease(snap, zero, vec2(0, 0), 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(model_decrease(snap, zero, vec2(-3, -4), 1.0) == doctest::Approx(12.5));
}

TEST_CASE("model decrease against a dense 1-D grid search") {
  // g = -2, c = 0, J = 1, h = l1, sigma = 1
  OuterFunction l1{OuterKind::l1, 1.0};
  auto snap = snapshot_of(vec1(0), vec1(-2), vec1(0), Matrix::Identity(1, 1));

  auto dm = [&](double s) { return model_decrease(snap, l1, vec1(s), 1.0); };
  GridMax best = grid_search_1d(dm, -3.0, 3.0, 1e-4);
  CHECK(best.arg == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(best.value == doctest::Approx(0.5).epsilon(1e-6));

  CHECK(model_decrease(snap, l1, vec1(1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("decrease identity and zero-direction properties") {
  Rng rng(42);
  OuterFunction kinds[] = {{OuterKind::zero, 1.0},
                           {OuterKind::l1, 0.7},
                           {OuterKind::l2, 1.3},
                           {OuterKind::linf, 2.0},
                           {OuterKind::weighted_l1, 0.5}};
  for (const auto& h : kinds) {
    for (int trial = 0; trial < 25; ++trial) {
      Index n = 1 + static_cast<Index>(rng.uniform() * 4);
      Index m = 1 + static_cast<Index>(rng.uniform() * 4);
      auto snap = snapshot_of(rng.vector(n), rng.vector(n, -3, 3), rng.vector(m, -3, 3),
                              rng.matrix(m, n, -2, 2));
      Vector v = rng.vector(n, -5, 5);
      double sigma = rng.uniform(0.1, 10.0);

      CHECK(model_decrease(snap, h, v, sigma) ==
            doctest::Approx(linearized_decrease(snap, h, v) - 0.5 * sigma * v.squaredNorm())
                .epsilon(1e-12));
      CHECK(linearized_decrease(snap, h, Vector::Zero(n)) == doctest::Approx(0.0).epsilon(1e-14));
      if (h.kind == OuterKind::zero)
        CHECK(linearized_decrease(snap, h, v) ==
              doctest::Approx(-snap.g->value.dot(v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("make_decrease_report satisfies its internal identity") {
  Rng rng(7);
  OuterFunction l1{OuterKind::l1, 1.0};
  auto snap = snapshot_of(rng.vector(3), rng.vector(3), rng.vector(2), rng.matrix(2, 3));
  Vector v = rng.vector(3, -2, 2);
  DecreaseReport rep = make_decrease_report(snap, l1, v, 2.5);
  CHECK(rep.model_decrease ==
        doctest::Approx(rep.linearized_decrease - 1.25 * rep.norm_v * rep.norm_v)
            .epsilon(1e-12));
  CHECK(rep.norm_v == doctest::Approx(v.norm()));
}

TEST_CASE("error bound right-hand side") {
  CHECK(error_bound_rhs(0, 0, 0, 1.0, 1.0) == 0.0);
  CHECK(error_bound_rhs(0.1, 0.1, 0.1, 1.0, 1.0) == doctest::Approx(0.4));
  CHECK(error_bound_rhs(0.1, 0.05, 0.0, 2.0, 0.5) == doctest::Approx(0.25));

  // monotone nondecreasing in every argument
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    double eg = rng.uniform(0, 1), ec = rng.uniform(0, 1), eJ = rng.uniform(0, 1);
    double L = rng.uniform(0, 3), nv = rng.uniform(0, 5), bump = rng.uniform(0, 1);
    double base = error_bound_rhs(eg, ec, eJ, L, nv);
    CHECK(error_bound_rhs(eg + bump, ec, eJ, L, nv) >= base);
    CHECK(error_bound_rhs(eg, ec + bump, eJ, L, nv) >= base);
    CHECK(error_bound_rhs(eg, ec, eJ + bump, L, nv) >= base);
    CHECK(error_bound_rhs(eg, ec, eJ, L, nv + bump) >= base);
  }
}

TEST_CASE("theta threshold") {
  AccuracyState acc;
  acc.max_g = 0.2;
  acc.max_J = 0.0;
  acc.max_c = 0.0;
  // no c ceiling: the root collapses and theta = 2a/(omega*sigma_min)
  CHECK(theta_threshold(acc, 1.0, 0.5, 0.1) == doctest::Approx(2.0 * 0.2 / (0.5 * 0.1)));

  acc.max_g = acc.max_c = acc.max_J = 0.1;
  double theta = theta_threshold(acc, 1.0, 1.0 / 60.0, 0.1);
  double expected = (0.2 + std::sqrt(0.2 * 0.2 + 4.0 * 0.1)) / ((1.0 / 60.0) * 0.1);
  CHECK(theta == doctest::Approx(expected).epsilon(1e-14));
  CHECK(theta == doctest::Approx(518.0).epsilon(1e-4));

  acc.max_g = acc.max_c = acc.max_J = 0.0;
  CHECK(theta_threshold(acc, 1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("delta_k") {
  CHECK(delta_k_eps(0.01, 1.0) == doctest::Approx(6.25e-6));
  CHECK(delta_k_eps(0.5, 0.25) == doctest::Approx(0.03125));
  CHECK(delta_k_eps(1e-3, 10.0) == doctest::Approx(6.25e-9));
}

TEST_CASE("nu_k shrink budget") {
  AccuracyState acc;
  acc.max_g = acc.max_c = acc.max_J = 0.1;
  double L_h = 1.0;
  double omega = 1.0 / 60.0;
  double theta = theta_threshold(acc, L_h, omega, 0.1);
  double delta = delta_k_eps(0.01, 1.0);
  double nu = nu_k_bound(acc, L_h, theta, omega, 0.01, delta, 0.1);

  double a = (acc.max_g + L_h * acc.max_J) * std::max(1.0, theta) + 2.0 * L_h * acc.max_c;
  double b = omega * std::min(0.5 * 0.01, delta);
  CHECK(nu == doctest::Approx(std::abs(std::log(a) - std::log(b)) / std::abs(std::log(0.1)))
                  .epsilon(1e-14));
  CHECK(nu == doctest::Approx(9.0).epsilon(1e-2));

  // equal numerator arguments: zero shrinks needed
  AccuracyState acc2;
  acc2.max_g = 1.0;
  acc2.max_c = acc2.max_J = 0.0;
  // a = 1; pick omega*min(eps/2, delta) = 1 as well
  CHECK(nu_k_bound(acc2, 0.0, 1.0, 1.0, 2.5, 1.0, 0.1) == doctest::Approx(0.0));
  // one decade between the arguments is one shrink at gamma_eps = 0.1
  CHECK(nu_k_bound(acc2, 0.0, 1.0, 1.0, 0.3, 0.1, 0.1) == doctest::Approx(1.0));
}

TEST_CASE("sigma_max bound") {
  AlgoConstants k;
  k.gamma3 = 4.0;
  k.eta2 = 0.9;
  k.sigma0 = 1.0;
  k.kappa_omega = 1.0 / 60.0;
  CHECK(sigma_max_bound(0.0, 0.0, 1.0, k) == doctest::Approx(160.0));
  CHECK(sigma_max_bound(1.0, 1.0, 1.0, k) == doctest::Approx(320.0));
  k.sigma0 = 1e6;
  CHECK(sigma_max_bound(0.0, 0.0, 1.0, k) == doctest::Approx(1e6));

  ProblemSpec spec;
  spec.L_h = 1.0;
  CHECK(!sigma_max_bound(spec, k).has_value());
  spec.L_g = 0.0;
  spec.L_J = 0.0;
  k.sigma0 = 1.0;
  CHECK(sigma_max_bound(spec, k).value() == doctest::Approx(160.0));
}

TEST_CASE("tau bound") {
  AlgoConstants k;
  k.eta1 = 0.1;
  k.alpha = 0.5;
  k.gamma1 = 0.5;
  k.gamma2 = 2.0;

  // zero objective gap: the floor term is 1
  k.sigma0 = 1.0;
  CHECK(tau_bound(4.0, 0.0, k, 0.1) ==
        doctest::Approx(1.0 * 2.0 + std::log(4.0) / std::log(2.0)));

  // sigma_max = sigma0 kills the trailing term
  k.sigma0 = 160.0;
  CHECK(tau_bound(160.0, 1.0, k, 0.1) == doctest::Approx(5120002.0));
  CHECK(tau_bound(160.0, 1.0, k, 0.1) == doctest::Approx(5.12e6).epsilon(1e-3));
}

TEST_CASE("uniform nu bound for the monotonic variant") {
  AccuracyState acc;
  acc.max_g = acc.max_c = acc.max_J = 0.1;
  double nu = nu_eps_bound(acc, 1.0, 160.0, 1e-8, 0.1, 1e-3);
  CHECK(std::isfinite(nu));
  CHECK(nu > 0.0);
  // direct evaluation of the same display
  double theta = theta_uniform_bound(acc, 1.0, 160.0, 1e-8);
  double a = 0.2 * theta + 0.2;
  double expect =
      (std::abs(2.0 * std::log(1e-3)) + std::abs(std::log(a) + 2.0 * std::log(640.0))) /
      std::abs(std::log(0.1));
  CHECK(nu == doctest::Approx(expect).epsilon(1e-14));
}
