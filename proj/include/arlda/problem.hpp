#pragma once

#include <functional>
#include <optional>

#include "arlda/outer_function.hpp"
#include "arlda/types.hpp"

namespace arlda {

// Composite problem min psi(x) = f(x) + h(c(x)) with exact reference
// callables. The exact maps are the ground truth the inexact oracles are
// certified against, and what verification uses.
struct ProblemSpec {
  Index n = 0;  // inner dimension
  Index m = 0;  // outer dimension
  std::function<double(const Vector&)> f_exact;
  std::function<Vector(const Vector&)> g_exact;
  std::function<Vector(const Vector&)> c_exact;
  std::function<Matrix(const Vector&)> J_exact;
  OuterFunction h;
  double L_h = 0.0;
  // Half-slope constants: ||g(x)-g(y)|| <= 2*L_g*||x-y|| on the region of
  // interest, likewise for J. Optional; enable the sigma and iteration audits.
  std::optional<double> L_g;
  std::optional<double> L_J;
  std::optional<double> psi_low;
  Vector x0;

  double psi(const Vector& x) const { return f_exact(x) + h.value(c_exact(x)); }
};

}  // namespace arlda
