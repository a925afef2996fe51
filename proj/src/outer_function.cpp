#include "arlda/outer_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace arlda {

OuterKind outer_kind_from_string(const std::string& name) {
  if (name == "zero") return OuterKind::zero;
  if (name == "l1") return OuterKind::l1;
  if (name == "l2") return OuterKind::l2;
  if (name == "linf") return OuterKind::linf;
  if (name == "weighted-l1" || name == "weighted_l1") return OuterKind::weighted_l1;
  throw std::invalid_argument("unknown outer function kind '" + name +
                              "' (expected zero|l1|l2|linf|weighted-l1)");
}

std::string to_string(OuterKind kind) {
  switch (kind) {
    case OuterKind::zero: return "zero";
    case OuterKind::l1: return "l1";
    case OuterKind::l2: return "l2";
    case OuterKind::linf: return "linf";
    case OuterKind::weighted_l1: return "weighted-l1";
  }
  return "?";
}

double OuterFunction::value(const Vector& v) const {
  switch (kind) {
    case OuterKind::zero: return 0.0;
    case OuterKind::l1:
    case OuterKind::weighted_l1: return weight * v.lpNorm<1>();
    case OuterKind::l2: return weight * v.norm();
    case OuterKind::linf: return v.size() == 0 ? 0.0 : weight * v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

double OuterFunction::lipschitz_constant(Index m) const {
  switch (kind) {
    case OuterKind::zero: return 0.0;
    case OuterKind::l1:
    case OuterKind::weighted_l1: return weight * std::sqrt(static_cast<double>(m));
    case OuterKind::l2: return weight;
    case OuterKind::linf: return weight;
  }
  return 0.0;
}

static Vector soft_threshold(const Vector& v, double t) {
  return v.unaryExpr([t](double a) {
    if (a > t) return a - t;
    if (a < -t) return a + t;
    return 0.0;
  });
}

Vector project_l1_ball(const Vector& v, double radius) {
  if (radius <= 0.0) return Vector::Zero(v.size());
  if (v.lpNorm<1>() <= radius) return v;
  // Sort |v| descending and find the soft-threshold level that lands the
  // image exactly on the ball boundary.
  std::vector<double> a(v.size());
  for (Index i = 0; i < v.size(); ++i) a[static_cast<size_t>(i)] = std::abs(v[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    cumsum += a[j];
    double cand = (cumsum - radius) / static_cast<double>(j + 1);
    if (j + 1 == a.size() || a[j + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  return soft_threshold(v, theta);
}

Vector OuterFunction::prox(double lambda, const Vector& v) const {
  if (lambda <= 0.0) throw std::invalid_argument("prox requires lambda > 0");
  switch (kind) {
    case OuterKind::zero:
      return v;
    case OuterKind::l1:
    case OuterKind::weighted_l1:
      return soft_threshold(v, lambda * weight);
    case OuterKind::l2: {
      double nv = v.norm();
      if (nv <= lambda * weight) return Vector::Zero(v.size());
      return v * (1.0 - lambda * weight / nv);
    }
    case OuterKind::linf:
      // Moreau: v = prox_{lambda h}(v) + P_{||.||_1 <= lambda*weight}(v)
      return v - project_l1_ball(v, lambda * weight);
  }
  return v;
}

Vector OuterFunction::project_dual_ball(const Vector& v) const {
  switch (kind) {
    case OuterKind::zero:
      return Vector::Zero(v.size());
    case OuterKind::l1:
    case OuterKind::weighted_l1:
      // dual of l1 is linf: clamp componentwise
      return v.unaryExpr([w = weight](double a) { return std::clamp(a, -w, w); });
    case OuterKind::l2: {
      double nv = v.norm();
      if (nv <= weight) return v;
      return v * (weight / nv);
    }
    case OuterKind::linf:
      return project_l1_ball(v, weight);
  }
  return v;
}

}  // namespace arlda
