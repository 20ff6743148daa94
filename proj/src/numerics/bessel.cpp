#include "numerics/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "core/error.hpp"

namespace floqept::numerics {

namespace {

constexpr double series_limit = 12.0;

void check_range(double x) {
  if (!std::isfinite(x) || std::abs(x) > bessel_max_abs_x)
    fail(ErrorKind::range, "bessel_j: |x| = " + std::to_string(std::abs(x)) + " exceeds 50");
}

// Sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!), x >= 0.
double series(int m, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= h / i;
  if (term == 0.0) return 0.0;
  const double q = -h * h;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (term == 0.0 || (k > h && std::abs(term) <= 1e-17 * std::abs(sum))) break;
  }
  return sum;
}

// Miller backward recurrence, normalized by J0 + 2 sum J_2k = 1; x > 0.
std::vector<double> miller(int mmax, double x) {
  const int top = std::max(mmax, static_cast<int>(x));
  int start = top + 30 + static_cast<int>(std::sqrt(60.0 * top));
  if (start % 2) ++start;
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = 2.0 * k / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (int i = k - 1; i <= start; ++i) j[i] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  std::vector<double> out(static_cast<std::size_t>(mmax) + 1);
  for (int m = 0; m <= mmax; ++m) out[m] = j[m] / norm;
  return out;
}

}  // namespace

std::vector<double> bessel_j_all(int mmax, double x) {
  check_range(x);
  if (mmax < 0) fail(ErrorKind::invalid_argument, "bessel_j_all: negative order bound");
  std::vector<double> out(static_cast<std::size_t>(mmax) + 1);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
  } else if (ax <= series_limit) {
    for (int m = 0; m <= mmax; ++m) out[m] = series(m, ax);
  } else {
    out = miller(mmax, ax);
  }
  if (x < 0)
    for (int m = 1; m <= mmax; m += 2) out[m] = -out[m];
  return out;
}

double bessel_j(int m, double x) {
  check_range(x);
  const int am = std::abs(m);
  double v;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    v = am == 0 ? 1.0 : 0.0;
  } else if (ax <= series_limit) {
    v = series(am, ax);
  } else {
    v = miller(am, ax)[am];
  }
  if (x < 0 && am % 2) v = -v;
  if (m < 0 && am % 2) v = -v;
  return v;
}

double bessel_j_prime(int m, double x) {
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

}  // namespace floqept::numerics
