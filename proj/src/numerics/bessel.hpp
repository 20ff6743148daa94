#pragma once

#include <vector>

namespace floqept::numerics {

inline constexpr double bessel_max_abs_x = 50.0;

// J_m(x) for integer m (negative orders by reflection), |x| <= 50.
double bessel_j(int m, double x);

// J_0(x) .. J_mmax(x) in one pass.
std::vector<double> bessel_j_all(int mmax, double x);

// d/dx J_m(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2.
double bessel_j_prime(int m, double x);

}  // namespace floqept::numerics
