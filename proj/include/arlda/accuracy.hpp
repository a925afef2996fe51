#pragma once

#include "arlda/constants.hpp"

namespace arlda {

// Current absolute accuracy budgets, their ceilings, and the relative level
// omega that ties them to algorithmic progress.
struct AccuracyState {
  double eps_f = 0.0;
  double eps_g = 0.0;
  double eps_c = 0.0;
  double eps_J = 0.0;
  double max_f = 0.0;
  double max_g = 0.0;
  double max_c = 0.0;
  double max_J = 0.0;
  double omega = 0.0;
  double gamma_eps = 0.1;

  static AccuracyState from_constants(const AlgoConstants& k) {
    AccuracyState a;
    a.max_f = k.eps_f_max;
    a.max_g = k.eps_g_max;
    a.max_c = k.eps_c_max;
    a.max_J = k.eps_J_max;
    a.eps_f = k.eps_f_max;
    a.eps_g = k.eps_g_max;
    a.eps_c = k.eps_c_max;
    a.eps_J = k.eps_J_max;
    a.gamma_eps = k.gamma_eps;
    return a;
  }

  // The shrink applied by the accuracy loops: g, c and J budgets only.
  void shrink_gcJ() {
    eps_g *= gamma_eps;
    eps_c *= gamma_eps;
    eps_J *= gamma_eps;
  }
};

}  // namespace arlda
