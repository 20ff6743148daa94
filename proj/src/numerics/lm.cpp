#include "numerics/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace floqept::numerics {

namespace {

double norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> residuals(const Model& model, std::span<const double> xs,
                              std::span<const double> ys, std::span<const double> p) {
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) r[i] = model(xs[i], p) - ys[i];
  return r;
}

// Eigenvalues of a small symmetric matrix by cyclic Jacobi.
std::vector<double> sym_eigenvalues(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
  return ev;
}

// Solves the symmetric positive system a x = b by Cholesky; false if not positive.
bool cholesky_solve(std::vector<double> a, std::vector<double>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
    b[i] = v / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= a[k * n + i] * b[k];
    b[i] = v / a[i * n + i];
  }
  return true;
}

}  // namespace

std::vector<double> central_difference_jacobian(const Model& model, std::span<const double> xs,
                                                std::span<const double> p, double rel_step) {
  const std::size_t n = xs.size(), np = p.size();
  std::vector<double> jac(n * np);
  std::vector<double> q(p.begin(), p.end());
  for (std::size_t j = 0; j < np; ++j) {
    const double h = rel_step * std::max(std::abs(p[j]), 1e-3);
    q[j] = p[j] + h;
    std::vector<double> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = model(xs[i], q);
    q[j] = p[j] - h;
    for (std::size_t i = 0; i < n; ++i) jac[i * np + j] = (up[i] - model(xs[i], q)) / (2 * h);
    q[j] = p[j];
  }
  return jac;
}

FitResult lm_fit(const Model& model, std::span<const double> xs, std::span<const double> ys,
                 std::vector<double> p0, const LmOptions& opts, const ModelGradient& gradient) {
  const std::size_t n = xs.size(), np = p0.size();
  if (ys.size() != n) fail(ErrorKind::invalid_argument, "lm_fit: x and y lengths differ");
  if (np == 0) fail(ErrorKind::invalid_argument, "lm_fit: no parameters");
  if (n < np) fail(ErrorKind::invalid_argument, "lm_fit: fewer data points than parameters");

  auto jacobian = [&](std::span<const double> p) {
    if (!gradient) return central_difference_jacobian(model, xs, p, opts.fd_rel_step);
    std::vector<double> jac(n * np);
    for (std::size_t i = 0; i < n; ++i) gradient(xs[i], p, std::span<double>(jac).subspan(i * np, np));
    return jac;
  };
  auto normal = [&](const std::vector<double>& jac, const std::vector<double>& r,
                    std::vector<double>& jtj, std::vector<double>& g) {
    jtj.assign(np * np, 0.0);
    g.assign(np, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < np; ++a) {
        g[a] += jac[i * np + a] * r[i];
        for (std::size_t b = 0; b < np; ++b) jtj[a * np + b] += jac[i * np + a] * jac[i * np + b];
      }
  };
  auto condition = [&](const std::vector<double>& jtj) {
    auto ev = sym_eigenvalues(jtj, np);
    const double hi = *std::max_element(ev.begin(), ev.end());
    const double lo = *std::min_element(ev.begin(), ev.end());
    if (!(hi > 0)) return std::numeric_limits<double>::infinity();
    if (!(lo > 0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
  };

  FitResult res;
  std::vector<double> p = std::move(p0);
  std::vector<double> r = residuals(model, xs, ys, p);
  double rn = norm(r);
  res.residual_history.push_back(rn);
  std::vector<double> jac = jacobian(p), jtj, g;
  normal(jac, r, jtj, g);

  auto finish = [&](bool converged, std::string msg) {
    res.parameters = p;
    res.residuals = r;
    res.residual_norm = rn;
    res.gradient_norm = norm(g);
    res.jacobian_condition_proxy = condition(jtj);
    res.converged = converged;
    res.message = std::move(msg);
    return res;
  };

  for (double v : r)
    if (!std::isfinite(v)) return finish(false, "model is not finite at the initial parameters");
  if (!std::isfinite(condition(jtj)) || condition(jtj) > 1e14)
    return finish(false, "singular Jacobian at the initial parameters");

  double lambda = opts.lambda0;
  // Relative residual drop of the last accepted step; steps that still pay
  // off are taken even after the gradient test passes.
  double last_drop = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    const double gn = norm(g);
    if (gn < opts.gradient_tol * (1 + rn) && (last_drop < 1e-3 || rn == 0))
      return finish(true, "gradient below tolerance");

    std::vector<double> a = jtj, step(np);
    double maxdiag = 0;
    for (std::size_t k = 0; k < np; ++k) maxdiag = std::max(maxdiag, jtj[k * np + k]);
    for (std::size_t k = 0; k < np; ++k)
      a[k * np + k] += lambda * std::max(jtj[k * np + k], 1e-12 * maxdiag);
    for (std::size_t k = 0; k < np; ++k) step[k] = -g[k];
    if (!cholesky_solve(a, step, np)) {
      lambda *= opts.lambda_up;
      if (lambda > opts.lambda_max) return finish(false, "damping exceeded its bound");
      continue;
    }
    std::vector<double> trial(np);
    for (std::size_t k = 0; k < np; ++k) trial[k] = p[k] + step[k];
    std::vector<double> rt = residuals(model, xs, ys, trial);
    double rtn = norm(rt);
    bool finite = std::isfinite(rtn);
    if (finite && rtn <= rn) {
      double rel = 0;
      for (std::size_t k = 0; k < np; ++k)
        rel = std::max(rel, std::abs(step[k]) / std::max(std::abs(p[k]), 1e-300));
      p = std::move(trial);
      r = std::move(rt);
      const bool stalled = rtn == rn;
      last_drop = rn > 0 ? (rn - rtn) / rn : 0.0;
      rn = rtn;
      res.residual_history.push_back(rn);
      jac = jacobian(p);
      normal(jac, r, jtj, g);
      lambda = std::max(lambda * opts.lambda_down, 1e-20);
      if (rel < opts.step_tol || stalled) {
        res.iterations = it + 1;
        const bool ok = norm(g) < opts.gradient_tol * (1 + rn);
        return finish(ok, ok ? "gradient below tolerance" : "parameter step stalled");
      }
    } else {
      lambda *= opts.lambda_up;
      if (lambda > opts.lambda_max) {
        res.iterations = it + 1;
        const bool ok = norm(g) < opts.gradient_tol * (1 + rn);
        return finish(ok, ok ? "gradient below tolerance" : "damping exceeded its bound");
      }
    }
  }
  res.iterations = opts.max_iterations;
  const bool ok = norm(g) < opts.gradient_tol * (1 + rn);
  return finish(ok, ok ? "gradient below tolerance" : "iteration limit reached");
}

}  // namespace floqept::numerics
