#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "numerics/complex_matrix.hpp"

namespace floqept::numerics {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;        // 0 picks one from the span
  double max_step = 0.0;            // 0 means unlimited
  std::size_t max_steps = 200'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

struct Trajectory {
  std::vector<double> times;            // requested sample times, ascending
  std::vector<ComplexVec> states;       // state at each sample time
  ComplexVec final_state;
  OdeStats stats;
};

// dy/dt = f(t, y), written into dy.
using OdeRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dy)>;

// H(t) written into an n x n matrix.
using MatrixFunction = std::function<void(double t, ComplexMat& h)>;

// Dormand-Prince 5(4) with PI step control. Steps are clipped so every sample
// time is hit exactly. Sample times outside [t0, t1] are rejected.
Trajectory integrate(const OdeRhs& f, ComplexVec y0, double t0, double t1, const OdeOptions& opts,
                     std::span<const double> sample_times = {});

// ds/dt = -i H(t) s.
Trajectory integrate_linear(const MatrixFunction& h, ComplexVec s0, double t0, double t1,
                            const OdeOptions& opts, std::span<const double> sample_times = {});

// U(t1) for dU/dt = -i H(t) U with U(t0) = I.
ComplexMat fundamental_matrix(const MatrixFunction& h, std::size_t n, double t0, double t1,
                              const OdeOptions& opts, OdeStats* stats = nullptr);

}  // namespace floqept::numerics
