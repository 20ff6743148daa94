#include "analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "numerics/bessel.hpp"
#include "numerics/roots.hpp"

namespace floqept::analysis {

std::string_view to_string(EpRoute r) {
  switch (r) {
    case EpRoute::closed_form: return "closed-form";
    case EpRoute::monodromy: return "monodromy";
    case EpRoute::spectral: return "spectral-pipeline";
  }
  return "closed-form";
}

EpRoute parse_route(std::string_view s) {
  if (s == "closed-form" || s == "closed_form" || s == "rwa") return EpRoute::closed_form;
  if (s == "monodromy") return EpRoute::monodromy;
  if (s == "spectral-pipeline" || s == "spectral") return EpRoute::spectral;
  fail(ErrorKind::invalid_argument, "unknown EP route '" + std::string(s) + "'");
}

namespace {

ModelParams with_order(const ModelParams& tmpl, int n) {
  if (n < 0) fail(ErrorKind::invalid_argument, "EP search: band order n must be non-negative");
  ModelParams p = tmpl;
  p.n1 = p.n2 + n;
  return p;
}

double sign_of(double d0) { return d0 > 0 ? 1.0 : -1.0; }

}  // namespace

bool ep_indicator(const ModelParams& tmpl, int n, EpRoute route, double delta0_abs, const SimConfig& cfg,
                  const EpOptions& opts) {
  ModelParams p = with_order(tmpl, n);
  p.delta0 = sign_of(tmpl.delta0) * delta0_abs;
  switch (route) {
    case EpRoute::closed_form: {
      const double ge = opts.gamma_eff ? *opts.gamma_eff : engine::effective_coupling(p);
      return engine::floquet_eigenvalues(p.delta0, p.omega_b, n, ge).tag == PhaseTag::broken;
    }
    case EpRoute::monodromy:
      return engine::monodromy_quasienergies(p, cfg).real_gap() > opts.monodromy_gap;
    case EpRoute::spectral:
      return !observables::measure_separation(p, cfg, opts.separation).merged;
  }
  return false;
}

EpResult locate_ep(const ModelParams& tmpl, int n, EpRoute route, const SimConfig& cfg, const EpOptions& opts) {
  const ModelParams p = with_order(tmpl, n);
  require_valid(p, cfg);
  EpResult r;
  r.route = route;
  const double lo = n * p.omega_b;
  // past half a zone the folded quasi-energies and the spectral windows alias
  const double hi = lo + std::min(10.0 * p.gamma_c, 0.45 * p.omega_b);
  const bool zero_coupling =
      p.gamma_c == 0 || (route == EpRoute::closed_form && opts.gamma_eff && *opts.gamma_eff == 0) ||
      (route == EpRoute::closed_form && !opts.gamma_eff && engine::effective_coupling(p) == 0);
  if (zero_coupling) {
    r.delta0_abs = r.lo = r.hi = lo;
    return r;
  }
  auto pred = [&](double d) { return ep_indicator(tmpl, n, route, d, cfg, opts); };
  if (pred(lo)) {
    std::ostringstream msg;
    msg << "EP search (" << to_string(route) << "): indicator reports broken at zero mismatch |delta0| = " << lo;
    fail(ErrorKind::numerical, msg.str());
  }
  numerics::Bracket b;
  try {
    b = numerics::bisect_predicate(pred, lo, hi, opts.bracket_width);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "EP search (" << to_string(route) << "): no bifurcation in bracket [" << lo << ", " << hi
        << "] Hz: " << e.what();
    fail(ErrorKind::numerical, msg.str());
  }
  r.lo = b.lo;
  r.hi = b.hi;
  r.iterations = b.iterations;
  r.delta0_abs = b.mid();
  r.mu = r.delta0_abs - lo;
  r.gamma_eff = 0.5 * r.mu;
  return r;
}

double coupling_model(double omega_b, double gamma_c, double delta_b) {
  const double x = delta_b / omega_b;
  return gamma_c * std::abs(numerics::bessel_j(0, x) * numerics::bessel_j(1, x));
}

GammaCurve fit_gamma_curve(std::vector<GammaPoint> points) {
  GammaCurve gc;
  gc.points = std::move(points);
  std::vector<double> xs, ys;
  for (const auto& pt : gc.points)
    if (pt.resolved) xs.push_back(pt.omega_b), ys.push_back(pt.gamma_eff);
  if (xs.size() < 3) {
    gc.message = "fit rejected: fewer than 3 resolved EP points";
    return gc;
  }
  const auto top = std::max_element(ys.begin(), ys.end());
  if (*top < 0.5) {
    gc.message = "fit rejected: every extracted coupling is below 0.5 Hz (no Floquet coupling; delta_b = 0?)";
    return gc;
  }
  // max |J0 J1| = 0.3391 at x = 1.0820.
  const double w_at_max = xs[static_cast<std::size_t>(top - ys.begin())];
  std::vector<double> p0{*top / 0.3391, 1.082 * w_at_max};
  numerics::Model model = [](double w, std::span<const double> p) {
    return coupling_model(w, p[0], p[1]);
  };
  gc.fit = numerics::lm_fit(model, xs, ys, p0);
  gc.residual_norm = gc.fit.residual_norm;
  if (!gc.fit.converged) {
    std::ostringstream msg;
    msg << "fit did not converge (" << gc.fit.message << "); residuals:";
    for (std::size_t i = 0; i < xs.size(); ++i) msg << ' ' << xs[i] << ':' << gc.fit.residuals[i];
    gc.message = msg.str();
    return gc;
  }
  gc.fitted = true;
  gc.gamma_c = std::abs(gc.fit.parameters[0]);
  gc.delta_b = std::abs(gc.fit.parameters[1]);
  gc.message = "ok";
  return gc;
}

GammaCurve gamma_curve(const ModelParams& tmpl, const std::vector<double>& omega_grid, const SimConfig& cfg,
                       EpRoute route, const EpOptions& opts, int jobs) {
  std::vector<GammaPoint> pts(omega_grid.size());
  EpOptions inner = opts;
  inner.separation.jobs = 1;
  parallel_for(omega_grid.size(), jobs, [&](std::size_t i) {
    ModelParams p = tmpl;
    p.omega_b = omega_grid[i];
    SimConfig c = cfg;
    c.truncation_m = std::max(c.truncation_m, required_truncation(p));
    pts[i].omega_b = p.omega_b;
    try {
      pts[i].gamma_eff = locate_ep(p, tmpl.n(), route, c, inner).gamma_eff;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::numerical) throw;
      pts[i].resolved = false;
      pts[i].note = e.what();
    }
  });
  return fit_gamma_curve(std::move(pts));
}

numerics::FitResult fit_sideband_heights(const std::vector<HeightPoint>& heights, int m) {
  if (m < 0) fail(ErrorKind::invalid_argument, "fit_sideband_heights: m must be non-negative");
  if (heights.size() < 3) fail(ErrorKind::invalid_argument, "fit_sideband_heights: need at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& h : heights) {
    if (!(h.omega_b > 0)) fail(ErrorKind::invalid_argument, "fit_sideband_heights: omega_b must be positive");
    xs.push_back(h.omega_b);
    ys.push_back(h.height);
  }
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*hi - *lo <= 1e-14 * std::max(std::abs(*hi), 1e-300)) {
    numerics::FitResult r;
    r.converged = false;
    r.message = "degenerate data: all heights equal, k is not identifiable";
    r.parameters = {*hi, 0.0};
    return r;
  }
  auto j2 = [m](double x) {
    if (std::abs(x) > numerics::bessel_max_abs_x) return 0.0;
    const double j = numerics::bessel_j(m, x);
    return j * j;
  };
  // Grid search on k with alpha solved linearly.
  const double wmin = *std::min_element(xs.begin(), xs.end());
  const double wmax = *std::max_element(xs.begin(), xs.end());
  const double k_lo = 0.02 * wmin, k_hi = std::min(20.0 * wmax, 0.99 * numerics::bessel_max_abs_x * wmin);
  double best_k = k_lo, best_a = 0, best_r = std::numeric_limits<double>::infinity();
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, double(i) / steps);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double b = j2(k / xs[j]);
      num += b * ys[j];
      den += b * b;
    }
    if (den <= 0) continue;
    const double a = num / den;
    double r = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) r += std::pow(a * j2(k / xs[j]) - ys[j], 2);
    if (r < best_r) best_r = r, best_k = k, best_a = a;
  }
  numerics::Model model = [m](double w, std::span<const double> p) {
    const double x = p[1] / w;
    if (std::abs(x) > numerics::bessel_max_abs_x) return std::numeric_limits<double>::quiet_NaN();
    const double j = numerics::bessel_j(m, x);
    return p[0] * j * j;
  };
  numerics::ModelGradient grad = [m](double w, std::span<const double> p, std::span<double> g) {
    const double x = p[1] / w;
    const double j = numerics::bessel_j(m, x);
    g[0] = j * j;
    g[1] = p[0] * 2 * j * numerics::bessel_j_prime(m, x) / w;
  };
  return numerics::lm_fit(model, xs, ys, {best_a, best_k}, {}, grad);
}

double coefficient_of_determination(const std::vector<double>& y, const std::vector<double>& residuals) {
  if (y.empty() || y.size() != residuals.size())
    fail(ErrorKind::invalid_argument, "coefficient_of_determination: size mismatch");
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += residuals[i] * residuals[i];
  }
  return ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
}

std::vector<std::vector<HeightPoint>> simulate_sideband_heights(const ModelParams& tmpl,
                                                                const std::vector<double>& omega_grid,
                                                                const std::vector<int>& orders,
                                                                const SimConfig& cfg, int jobs) {
  std::vector<std::vector<HeightPoint>> out(orders.size(), std::vector<HeightPoint>(omega_grid.size()));
  parallel_for(omega_grid.size(), jobs, [&](std::size_t i) {
    ModelParams p = tmpl;
    p.omega_b = omega_grid[i];
    SimConfig c = cfg;
    c.truncation_m = std::max({c.truncation_m, required_truncation(p)});
    for (int m : orders) c.truncation_m = std::max(c.truncation_m, std::abs(m) + 4);
    require_valid(p, c);
    const engine::LabFrameModel model(p);
    const double half_width = std::min(0.25 * p.omega_b, 8.0 * std::max(p.gamma12, 1.0));
    const double step = std::max(p.gamma12, 1.0) / 25.0;
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const double center = p.delta0 + orders[k] * p.omega_b;
      std::vector<double> xs, ys;
      for (double d = center - half_width; d <= center + half_width; d += step) {
        xs.push_back(d);
        ys.push_back(
            engine::steady_state_response(model, c.truncation_m, engine::Probe{Channel::ch1, d, 1.0}).power(Channel::ch1));
      }
      auto peaks = observables::detect_peaks(xs, ys, 0.05);
      double h = 0;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& pk : peaks)
        if (std::abs(pk.center - center) < best) best = std::abs(pk.center - center), h = pk.height;
      if (peaks.empty()) h = *std::max_element(ys.begin(), ys.end());
      out[k][i] = {p.omega_b, h};
    }
  });
  return out;
}

double solve_drive_depth(double gamma_c, double omega_b, int n1, int n2, double target, double x_lo,
                         double x_hi) {
  if (!(x_hi > x_lo)) fail(ErrorKind::invalid_argument, "solve_drive_depth: empty x bracket");
  auto f = [&](double x) {
    return gamma_c * std::abs(numerics::bessel_j(n1, x) * numerics::bessel_j(n2, x)) - target;
  };
  return omega_b * numerics::bisect_root(f, x_lo, x_hi, 1e-13);
}

std::vector<double> drive_depth_roots(double gamma_c, int n1, int n2, double target, double x_max) {
  auto f = [&](double x) {
    return gamma_c * std::abs(numerics::bessel_j(n1, x) * numerics::bessel_j(n2, x)) - target;
  };
  std::vector<double> roots;
  const int n = 20000;
  double xa = 1e-9, fa = f(xa);
  for (int i = 1; i <= n; ++i) {
    const double xb = x_max * i / n, fb = f(xb);
    if (fa == 0) roots.push_back(xa);
    else if ((fa < 0) != (fb < 0)) roots.push_back(numerics::bisect_root(f, xa, xb, 1e-13));
    xa = xb;
    fa = fb;
  }
  return roots;
}

std::vector<PhaseCell> phase_diagram(const ModelParams& tmpl, const std::vector<double>& delta0_abs,
                                     const std::vector<double>& omega_grid, int n, double resolution) {
  std::vector<PhaseCell> cells;
  cells.reserve(delta0_abs.size() * omega_grid.size());
  for (double w : omega_grid) {
    const double ge = engine::effective_coupling(tmpl.gamma_c, tmpl.delta_b, w, tmpl.n2 + n, tmpl.n2);
    for (double d : delta0_abs) {
      PhaseCell c;
      c.delta0_abs = d;
      c.omega_b = w;
      c.mu = std::abs(d) - n * w;
      c.gamma_eff = ge;
      const double gap = std::abs(c.mu) - 2 * ge;
      if (std::abs(gap) < resolution) c.tag = PhaseTag::ep;
      else c.tag = gap < 0 ? PhaseTag::unbroken : PhaseTag::broken;
      cells.push_back(c);
    }
  }
  return cells;
}

}  // namespace floqept::analysis
