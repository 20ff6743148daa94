#pragma once

#include <functional>

namespace floqept::numerics {

struct Bracket {
  double lo = 0;
  double hi = 0;
  int iterations = 0;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// Shrinks [lo, hi] around the switch of a boolean indicator until narrower
// than width. pred(lo) must differ from pred(hi); the result keeps that
// property. Throws Error(numerical) otherwise.
Bracket bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi, double width,
                         int max_iter = 200);

// Root of a continuous f with a sign change on [lo, hi], by bisection.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   int max_iter = 200);

}  // namespace floqept::numerics
