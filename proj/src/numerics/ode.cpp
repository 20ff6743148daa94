#include "numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace floqept::numerics {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double safety = 0.9;
constexpr double alpha = 0.7 / 5.0;
constexpr double beta = 0.4 / 5.0;
constexpr double min_factor = 0.2;
constexpr double max_factor = 10.0;

}  // namespace

Trajectory integrate(const OdeRhs& f, ComplexVec y0, double t0, double t1, const OdeOptions& opts,
                     std::span<const double> sample_times) {
  if (!(opts.rel_tol > 0) || !(opts.abs_tol > 0))
    fail(ErrorKind::invalid_argument, "integrate: tolerances must be positive");
  if (!(t1 >= t0)) fail(ErrorKind::invalid_argument, "integrate: t1 must not precede t0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || sample_times[i] > t1)
      fail(ErrorKind::invalid_argument, "integrate: sample time outside the span");
    if (i && sample_times[i] < sample_times[i - 1])
      fail(ErrorKind::invalid_argument, "integrate: sample times must ascend");
  }

  const std::size_t n = y0.size();
  Trajectory out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.states.reserve(sample_times.size());

  ComplexVec y = std::move(y0), ynew(n), tmp(n);
  std::vector<ComplexVec> k(7, ComplexVec(n));
  std::size_t next_sample = 0;
  double t = t0;
  while (next_sample < out.times.size() && out.times[next_sample] <= t) {
    out.states.push_back(y);
    ++next_sample;
  }
  if (t1 == t0) {
    out.final_state = y;
    return out;
  }

  auto eval = [&](double tt, const ComplexVec& yy, ComplexVec& dy) {
    f(tt, yy, dy);
    ++out.stats.evaluations;
  };

  eval(t, y, k[0]);
  double h = opts.initial_step;
  if (!(h > 0)) {
    // Hairer's starting-step heuristic.
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sc * sc);
      d1 += std::norm(k[0][i]) / (sc * sc);
    }
    d0 = std::sqrt(d0 / std::max<std::size_t>(n, 1));
    d1 = std::sqrt(d1 / std::max<std::size_t>(n, 1));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * (t1 - t0) : 0.01 * d0 / d1;
    h = std::min(h, t1 - t0);
  }
  if (opts.max_step > 0) h = std::min(h, opts.max_step);

  double err_prev = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps) fail(ErrorKind::numerical, "integrate: step budget exhausted");
    double target = t1;
    if (next_sample < out.times.size()) target = std::min(target, out.times[next_sample]);
    bool clipped = false;
    double hs = h;
    if (t + hs >= target) {
      hs = target - t;
      clipped = true;
    }
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
    if (hs < hmin && !clipped) {
      std::ostringstream msg;
      msg << "integrate: step size underflow at t = " << t << " (h = " << hs
          << "); system is stiff or tolerances too tight";
      fail(ErrorKind::numerical, msg.str());
    }

    auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0;
        for (auto [j, a] : terms) acc += a * k[j][i];
        tmp[i] = y[i] + hs * acc;
      }
    };
    stage({{0, a21}});
    eval(t + c2 * hs, tmp, k[1]);
    stage({{0, a31}, {1, a32}});
    eval(t + c3 * hs, tmp, k[2]);
    stage({{0, a41}, {1, a42}, {2, a43}});
    eval(t + c4 * hs, tmp, k[3]);
    stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    eval(t + c5 * hs, tmp, k[4]);
    stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    eval(t + hs, tmp, k[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    eval(t + hs, ynew, k[6]);

    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx e = hs * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                           e7 * k[6][i]);
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += std::norm(e) / (sc * sc);
    }
    err = std::sqrt(err / std::max<std::size_t>(n, 1));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      double fac = err == 0 ? max_factor
                            : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
      fac = std::clamp(fac, min_factor, max_factor);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_prev = std::max(err, 1e-4);
      t = clipped ? target : t + hs;
      y.swap(ynew);
      k[0].swap(k[6]);
      ++out.stats.accepted;
      last_rejected = false;
      // A clipped step keeps the controller's proposal for the next free step.
      if (!clipped) h = hs * fac;
      else h = std::max(h, hs * fac);
      if (opts.max_step > 0) h = std::min(h, opts.max_step);
      while (next_sample < out.times.size() && out.times[next_sample] <= t) {
        out.states.push_back(y);
        ++next_sample;
      }
    } else {
      const double fac = std::max(min_factor, safety * std::pow(err, -alpha));
      h = hs * fac;
      ++out.stats.rejected;
      last_rejected = true;
      if (h < hmin) {
        std::ostringstream msg;
        msg << "integrate: step size underflow at t = " << t << " (h = " << h
            << "); system is stiff or tolerances too tight";
        fail(ErrorKind::numerical, msg.str());
      }
    }
  }
  out.final_state = std::move(y);
  return out;
}

Trajectory integrate_linear(const MatrixFunction& h, ComplexVec s0, double t0, double t1,
                            const OdeOptions& opts, std::span<const double> sample_times) {
  const std::size_t n = s0.size();
  ComplexMat hm(n, n);
  OdeRhs f = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
    h(t, hm);
    for (std::size_t r = 0; r < n; ++r) {
      cplx acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += hm(r, c) * y[c];
      dy[r] = -I * acc;
    }
  };
  return integrate(f, std::move(s0), t0, t1, opts, sample_times);
}

ComplexMat fundamental_matrix(const MatrixFunction& h, std::size_t n, double t0, double t1,
                              const OdeOptions& opts, OdeStats* stats) {
  ComplexMat hm(n, n);
  // Column-major flattening of U: y[c * n + r] = U(r, c).
  OdeRhs f = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
    h(t, hm);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) {
        cplx acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += hm(r, k) * y[c * n + k];
        dy[c * n + r] = -I * acc;
      }
  };
  ComplexVec y0(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) y0[i * n + i] = 1.0;
  Trajectory tr = integrate(f, std::move(y0), t0, t1, opts);
  if (stats) *stats = tr.stats;
  ComplexMat u(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u(r, c) = tr.final_state[c * n + r];
  return u;
}

}  // namespace floqept::numerics
