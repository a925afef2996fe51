#pragma once

#include <Eigen/Core>

namespace arlda {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Quantity { f, g, c, J };

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::f: return "f";
    case Quantity::g: return "g";
    case Quantity::c: return "c";
    case Quantity::J: return "J";
  }
  return "?";
}

}  // namespace arlda
