#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arlda/outer_function.hpp"
#include "test_util.hpp"

using namespace arlda;
using arlda::testing::Rng;

namespace {

const OuterFunction kCatalogue[] = {{OuterKind::zero, 1.0},
                                    {OuterKind::l1, 1.0},
                                    {OuterKind::l2, 1.5},
                                    {OuterKind::linf, 0.8},
                                    {OuterKind::weighted_l1, 2.0}};

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("kind parsing round-trips") {
  for (const char* name : {"zero", "l1", "l2", "linf", "weighted-l1"})
    CHECK(to_string(outer_kind_from_string(name)) == name);
  CHECK_THROWS_AS(outer_kind_from_string("cubic"), std::invalid_argument);
}

TEST_CASE("values are nonnegative and convex by midpoint sampling") {
  Rng rng(11);
  for (const auto& h : kCatalogue) {
    for (int t = 0; t < 50; ++t) {
      Index m = 1 + static_cast<Index>(rng.uniform() * 5);
      Vector u = rng.vector(m, -4, 4), v = rng.vector(m, -4, 4);
      CHECK(h.value(u) >= 0.0);
      double mid = h.value((u + v) / 2.0);
      CHECK(mid <= 0.5 * (h.value(u) + h.value(v)) + 1e-12);
    }
  }
}

TEST_CASE("Lipschitz constants match the catalogue and are attained") {
  const Index m = 4;
  const double sq = std::sqrt(4.0);
  CHECK(OuterFunction{OuterKind::zero, 1.0}.lipschitz_constant(m) == 0.0);
  CHECK(OuterFunction{OuterKind::l1, 1.0}.lipschitz_constant(m) == doctest::Approx(sq));
  CHECK(OuterFunction{OuterKind::l2, 1.5}.lipschitz_constant(m) == doctest::Approx(1.5));
  CHECK(OuterFunction{OuterKind::linf, 0.8}.lipschitz_constant(m) == doctest::Approx(0.8));
  CHECK(OuterFunction{OuterKind::weighted_l1, 2.0}.lipschitz_constant(m) ==
        doctest::Approx(2.0 * sq));

  Rng rng(5);
  for (const auto& h : kCatalogue) {
    double L = h.lipschitz_constant(m);
    for (int t = 0; t < 400; ++t) {
      Vector u = rng.vector(m, -3, 3), v = rng.vector(m, -3, 3);
      double gap = (u - v).norm();
      if (gap < 1e-9) continue;
      CHECK(std::abs(h.value(u) - h.value(v)) / gap <= L + 1e-12);
    }
    // constructed extremal pairs show the constant is exact, not just valid
    Vector ones = Vector::Ones(m);
    Vector e1 = Vector::Zero(m);
    e1[0] = 1.0;
    switch (h.kind) {
      case OuterKind::zero: break;
      case OuterKind::l1:
      case OuterKind::weighted_l1:
        CHECK(std::abs(h.value(ones) - h.value(Vector::Zero(m))) ==
              doctest::Approx(L * ones.norm()));
        break;
      case OuterKind::l2:
      case OuterKind::linf:
        CHECK(std::abs(h.value(e1) - h.value(Vector::Zero(m))) == doctest::Approx(L));
        break;
    }
  }
}

TEST_CASE("prox closed forms") {
  OuterFunction zero{OuterKind::zero, 1.0};
  Vector v = vec2(2.0, -0.5);
  CHECK((zero.prox(1.0, v) - v).norm() == doctest::Approx(0.0));

  OuterFunction l1{OuterKind::l1, 1.0};
  Vector p = l1.prox(1.0, v);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));

  OuterFunction l2{OuterKind::l2, 1.0};
  Vector w = vec2(3.0, 0.0);  // norm 3
  Vector q = l2.prox(1.0, w);
  CHECK((q - w * (2.0 / 3.0)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("prox minimizes its objective against random competitors") {
  Rng rng(17);
  for (const auto& h : kCatalogue) {
    for (int t = 0; t < 20; ++t) {
      Index m = 1 + static_cast<Index>(rng.uniform() * 4);
      Vector v = rng.vector(m, -4, 4);
      double lambda = rng.uniform(0.2, 3.0);
      Vector p = h.prox(lambda, v);
      double obj_p = h.value(p) + (p - v).squaredNorm() / (2.0 * lambda);
      for (int j = 0; j < 40; ++j) {
        Vector q = p + rng.vector(m, -0.5, 0.5);
        double obj_q = h.value(q) + (q - v).squaredNorm() / (2.0 * lambda);
        CHECK(obj_p <= obj_q + 1e-10);
      }
    }
  }
}

TEST_CASE("Moreau identity holds for every kind") {
  Rng rng(23);
  for (const auto& h : kCatalogue) {
    for (int t = 0; t < 40; ++t) {
      Index m = 1 + static_cast<Index>(rng.uniform() * 5);
      Vector v = rng.vector(m, -5, 5);
      for (double lambda : {0.3, 1.0, 2.7}) {
        Vector lhs = h.prox(lambda, v) + lambda * h.project_dual_ball(v / lambda);
        CHECK((lhs - v).lpNorm<Eigen::Infinity>() <= 1e-12);
      }
    }
  }
}

TEST_CASE("l1-ball projection is the nearest feasible point") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    Index m = 1 + static_cast<Index>(rng.uniform() * 5);
    Vector v = rng.vector(m, -3, 3);
    double r = rng.uniform(0.1, 2.5);
    Vector p = project_l1_ball(v, r);
    CHECK(p.lpNorm<1>() <= r + 1e-10);
    for (int j = 0; j < 50; ++j) {
      Vector q = rng.vector(m, -1.5, 1.5);
      double q1 = q.lpNorm<1>();
      if (q1 > r) q *= r / q1;
      CHECK((v - p).norm() <= (v - q).norm() + 1e-10);
    }
  }
  // inside the ball: unchanged
  Vector small = vec2(0.1, -0.2);
  CHECK((project_l1_ball(small, 1.0) - small).norm() == 0.0);
}
