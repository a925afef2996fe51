#pragma once

#include <optional>

#include "arlda/types.hpp"

namespace arlda {

// Cached inexact evaluations at one point. `eps` is the tightest accuracy
// the quantity has been requested at for this point; the cache never
// loosens, so a cached entry stays valid for any request with eps' >= eps.
struct InexactSnapshot {
  template <class V>
  struct Entry {
    V value;
    double eps = 0.0;
  };

  Vector point;
  std::optional<Entry<double>> f;
  std::optional<Entry<Vector>> g;
  std::optional<Entry<Vector>> c;
  std::optional<Entry<Matrix>> J;

  explicit InexactSnapshot(Vector x = Vector()) : point(std::move(x)) {}

  bool f_fresh(double eps) const { return f && f->eps <= eps; }
  bool g_fresh(double eps) const { return g && g->eps <= eps; }
  bool c_fresh(double eps) const { return c && c->eps <= eps; }
  bool J_fresh(double eps) const { return J && J->eps <= eps; }

  void set_f(double value, double eps) { store(f, value, eps); }
  void set_g(Vector value, double eps) { store(g, std::move(value), eps); }
  void set_c(Vector value, double eps) { store(c, std::move(value), eps); }
  void set_J(Matrix value, double eps) { store(J, std::move(value), eps); }

 private:
  template <class V>
  static void store(std::optional<Entry<V>>& slot, V value, double eps) {
    // Never loosen: ignore a store at a looser accuracy than the cache holds.
    if (slot && slot->eps <= eps) return;
    slot = Entry<V>{std::move(value), eps};
  }
};

}  // namespace arlda
