#include "numerics/spectral.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace floqept::numerics {

namespace {

template <class T>
cplx project(std::span<const T> x, double dt, double f, double t0) {
  if (x.size() < 2) fail(ErrorKind::invalid_argument, "spectral_amplitude: need at least 2 samples");
  if (!(dt > 0)) fail(ErrorKind::invalid_argument, "spectral_amplitude: sample spacing must be positive");
  const double nyquist = 0.5 / dt;
  if (!(std::abs(f) <= nyquist))
    fail(ErrorKind::range, "spectral_amplitude: frequency " + std::to_string(f) +
                               " Hz above Nyquist " + std::to_string(nyquist) + " Hz");
  // Phasor recurrence, re-seeded every block to bound rounding drift.
  constexpr std::size_t block = 1024;
  const cplx step = std::polar(1.0, -2.0 * pi * f * dt);
  cplx acc = 0;
  cplx w = 1;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k % block == 0) w = std::polar(1.0, -2.0 * pi * f * (t0 + static_cast<double>(k) * dt));
    acc += x[k] * w;
    w *= step;
  }
  return acc / static_cast<double>(x.size());
}

}  // namespace

cplx spectral_amplitude(std::span<const cplx> samples, double dt, double f, double t0) {
  return project(samples, dt, f, t0);
}

cplx spectral_amplitude(std::span<const double> samples, double dt, double f, double t0) {
  return project(samples, dt, f, t0);
}

}  // namespace floqept::numerics
