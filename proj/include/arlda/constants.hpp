#pragma once

#include <stdexcept>
#include <string>

namespace arlda {

// Algorithm constants. Defaults satisfy every initialization constraint and
// follow standard trust-region-style values.
struct AlgoConstants {
  double eta1 = 0.1;    // acceptance threshold
  double eta2 = 0.9;    // very-successful threshold
  double gamma1 = 0.5;  // sigma decrease factor
  double gamma2 = 2.0;  // sigma increase factor
  double gamma3 = 4.0;  // sigma increase cap factor
  double alpha = 0.5;
  double kappa_omega = 0.1 * 0.5 / 3.0;  // alpha*eta1/3
  double gamma_eps = 0.1;                // accuracy shrink factor
  double sigma0 = 1.0;
  double sigma_min = 1e-8;
  double eps_f_max = 0.1;
  double eps_g_max = 0.1;
  double eps_c_max = 0.1;
  double eps_J_max = 0.1;
  double epsilon = 1e-3;  // target accuracy, in (0,1)
  long max_iterations = 100000;
  bool monotonic = false;

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0,1)");
    if (!(sigma0 > 0.0)) fail("sigma0 must be positive");
    if (!(sigma_min > 0.0 && sigma_min <= sigma0)) fail("sigma_min must lie in (0, sigma0]");
    if (!(0.0 < eta1 && eta1 <= eta2 && eta2 < 1.0)) fail("need 0 < eta1 <= eta2 < 1");
    if (!(0.0 < gamma1 && gamma1 < 1.0 && 1.0 < gamma2 && gamma2 < gamma3))
      fail("need 0 < gamma1 < 1 < gamma2 < gamma3");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
    if (!(gamma_eps > 0.0 && gamma_eps < 1.0)) fail("gamma_eps must lie in (0,1)");
    if (!(kappa_omega > 0.0 && kappa_omega <= alpha * eta1 / 3.0))
      fail("kappa_omega must lie in (0, alpha*eta1/3]");
    if (!(eps_f_max >= 0.0 && eps_g_max >= 0.0 && eps_c_max >= 0.0 && eps_J_max >= 0.0))
      fail("accuracy maxima must be nonnegative");
    if (max_iterations < 1) fail("max_iterations must be at least 1");
  }
};

}  // namespace arlda
