#pragma once

#include <span>

#include "numerics/complex_matrix.hpp"

namespace floqept::numerics {

// (1/N) sum_k x_k exp(-i 2 pi f (t0 + k dt)). Requires N >= 2 and |f| <= 1/(2 dt).
cplx spectral_amplitude(std::span<const cplx> samples, double dt, double f, double t0 = 0.0);
cplx spectral_amplitude(std::span<const double> samples, double dt, double f, double t0 = 0.0);

}  // namespace floqept::numerics
