#include "numerics/roots.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace floqept::numerics {

Bracket bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi, double width,
                         int max_iter) {
  if (!(hi > lo)) fail(ErrorKind::invalid_argument, "bisect: empty bracket");
  const bool plo = pred(lo);
  const bool phi = pred(hi);
  if (plo == phi) {
    std::ostringstream msg;
    msg << "bisect: indicator has no change on [" << lo << ", " << hi << "] (both "
        << (plo ? "true" : "false") << ")";
    fail(ErrorKind::numerical, msg.str());
  }
  Bracket b{lo, hi, 0};
  while (b.width() >= width && b.iterations < max_iter) {
    const double m = b.mid();
    if (pred(m) == plo) b.lo = m;
    else b.hi = m;
    ++b.iterations;
  }
  return b;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream msg;
    msg << "bisect_root: no sign change on [" << lo << ", " << hi << "]";
    fail(ErrorKind::numerical, msg.str());
  }
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0) return m;
    if (std::signbit(fm) == std::signbit(flo)) lo = m, flo = fm;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace floqept::numerics
