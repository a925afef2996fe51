#pragma once

#include <string>

#include "arlda/types.hpp"

namespace arlda {

enum class OuterKind { zero, l1, l2, linf, weighted_l1 };

OuterKind outer_kind_from_string(const std::string& name);
std::string to_string(OuterKind kind);

// Convex outer function h of the composite objective f(x) + h(c(x)).
// The catalogue is closed: every kind is `weight` times a norm (or zero),
// so values, Lipschitz constants, proxes and dual-ball projections are all
// available in closed form.
struct OuterFunction {
  OuterKind kind = OuterKind::zero;
  double weight = 1.0;

  double value(const Vector& v) const;

  // Exact Lipschitz constant w.r.t. the Euclidean norm on R^m.
  double lipschitz_constant(Index m) const;

  // argmin_w h(w) + (1/(2*lambda)) * ||w - v||^2
  Vector prox(double lambda, const Vector& v) const;

  // Projection onto the dual-norm ball of radius `weight` (the prox of the
  // conjugate h*, which is scaling-invariant because h* is an indicator).
  Vector project_dual_ball(const Vector& v) const;
};

// Euclidean projection of v onto { u : ||u||_1 <= radius }.
Vector project_l1_ball(const Vector& v, double radius);

}  // namespace arlda
