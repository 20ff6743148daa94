#include "observables/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "numerics/ode.hpp"
#include "numerics/spectral.hpp"

namespace floqept::observables {

using engine::LabFrameModel;
using engine::Probe;
using numerics::cplx;

SpectrumTrace synthesize_spectrum(const ModelParams& p, const SimConfig& cfg,
                                  const std::vector<Channel>& probed, const SpectrumOptions& opts) {
  require_valid(p, cfg);
  if (probed.empty()) fail(ErrorKind::invalid_argument, "synthesize_spectrum: no probed channel");
  const LabFrameModel model(p);
  const int mt = cfg.truncation_m;
  const auto detunings = cfg.grid.points();
  const std::size_t n = detunings.size();

  SpectrumTrace tr;
  tr.params = p;
  tr.cfg = cfg;
  tr.probed = probed;
  tr.truncation = mt;
  tr.grid.resize(n);
  for (auto& v : tr.power) v.assign(n, 0.0);
  if (opts.sidebands)
    for (auto& s : tr.sideband) s.assign(2 * mt + 1, std::vector<double>(n, 0.0));

  parallel_for(n, opts.jobs, [&](std::size_t i) {
    const double delta = detunings[i];
    tr.grid[i] = delta + p.stark_shift;
    for (Channel c : probed) {
      engine::SidebandResponse r;
      try {
        r = engine::steady_state_response(model, mt, Probe{c, delta, 1.0});
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "spectrum grid point " << i << " (detuning " << delta << " Hz): " << e.what();
        throw Error(e.kind(), msg.str());
      }
      for (Channel out : {Channel::ch1, Channel::ch2}) {
        tr.power[index(out)][i] += r.power(out);
        if (opts.sidebands)
          for (int m = -mt; m <= mt; ++m) tr.sideband[index(out)][m + mt][i] += r.sideband_power(out, m);
      }
    }
  });
  return tr;
}

PeakSet detect_peaks(const std::vector<double>& x, const std::vector<double>& y, double prominence) {
  if (x.empty() || y.empty()) fail(ErrorKind::invalid_argument, "detect_peaks: empty trace");
  if (x.size() != y.size()) fail(ErrorKind::invalid_argument, "detect_peaks: grid and trace lengths differ");
  if (!(prominence > 0)) fail(ErrorKind::invalid_argument, "detect_peaks: prominence must be positive");
  const std::size_t n = y.size();
  PeakSet peaks;
  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0) || n < 3) return peaks;
  const double threshold = prominence * ymax;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left_min = y[i], right_min = y[i];
    for (std::size_t j = i; j-- > 0 && y[j] <= y[i];) left_min = std::min(left_min, y[j]);
    for (std::size_t j = i + 1; j < n && y[j] <= y[i]; ++j) right_min = std::min(right_min, y[j]);
    if (y[i] - std::max(left_min, right_min) <= threshold) continue;

    Peak pk;
    const double denom = y[i - 1] - 2 * y[i] + y[i + 1];
    const double off = denom != 0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
    const double h = 0.5 * (x[i + 1] - x[i - 1]);
    pk.center = x[i] + off * h;
    pk.height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * off;
    const double half = 0.5 * pk.height;
    double xl = x.front(), xr = x.back();
    for (std::size_t j = i; j-- > 0;)
      if (y[j] < half) {
        xl = x[j] + (half - y[j]) / (y[j + 1] - y[j]) * (x[j + 1] - x[j]);
        break;
      }
    for (std::size_t j = i + 1; j < n; ++j)
      if (y[j] < half) {
        xr = x[j - 1] + (y[j - 1] - half) / (y[j - 1] - y[j]) * (x[j] - x[j - 1]);
        break;
      }
    pk.fwhm = xr - xl;
    if (pk.fwhm > 0) peaks.push_back(pk);
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.center < b.center; });
  return peaks;
}

PeakSet detect_peaks(const SpectrumTrace& trace, double prominence, Channel c) {
  return detect_peaks(trace.grid, trace.channel(c), prominence);
}

void label_sidebands(PeakSet& peaks, double origin, double spacing) {
  for (auto& pk : peaks) {
    const double k = std::round((pk.center - origin) / spacing);
    if (std::abs(pk.center - origin - k * spacing) < 0.25 * spacing) pk.label = static_cast<int>(k);
    else pk.label.reset();
  }
}

namespace {

struct WindowPeak {
  double center = 0;
  double height = 0;
  double fwhm = 0;
};

// Scans the read channel over [lo, hi] and returns the peak nearest `bare`,
// refined on a fine local grid.
WindowPeak window_peak(const LabFrameModel& model, int mt, Channel probe, Channel read, double bare,
                       double lo, double hi, const SeparationOptions& opts) {
  auto response = [&](double delta) {
    return engine::steady_state_response(model, mt, Probe{probe, delta, 1.0}).power(read);
  };
  const std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / opts.coarse_step)) + 1;
  std::vector<double> xs(n), ys(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    xs[i] = lo + static_cast<double>(i) * opts.coarse_step;
    ys[i] = response(xs[i]);
  });
  auto peaks = detect_peaks(xs, ys, opts.prominence);
  if (peaks.empty()) {
    std::ostringstream msg;
    msg << "no resolvable " << to_string(read) << " peak in window [" << lo << ", " << hi << "] Hz";
    fail(ErrorKind::numerical, msg.str());
  }
  const Peak* best = &peaks.front();
  for (const auto& pk : peaks)
    if (std::abs(pk.center - bare) < std::abs(best->center - bare)) best = &pk;

  const double span = 2 * opts.coarse_step;
  const std::size_t nf = static_cast<std::size_t>(std::llround(2 * span / opts.fine_step)) + 1;
  std::vector<double> fx(nf), fy(nf);
  const double flo = best->center - span;
  parallel_for(nf, opts.jobs, [&](std::size_t i) {
    fx[i] = flo + static_cast<double>(i) * opts.fine_step;
    fy[i] = response(fx[i]);
  });
  std::size_t k = static_cast<std::size_t>(std::max_element(fy.begin(), fy.end()) - fy.begin());
  WindowPeak out{fx[k], fy[k], best->fwhm};
  if (k > 0 && k + 1 < nf) {
    const double denom = fy[k - 1] - 2 * fy[k] + fy[k + 1];
    if (denom != 0) {
      const double off = 0.5 * (fy[k - 1] - fy[k + 1]) / denom;
      out.center = fx[k] + off * opts.fine_step;
      out.height = fy[k] - 0.25 * (fy[k - 1] - fy[k + 1]) * off;
    }
  }
  return out;
}

}  // namespace

SeparationPoint measure_separation(const ModelParams& p, const SimConfig& cfg, const SeparationOptions& opts) {
  require_valid(p, cfg);
  if (!(opts.coarse_step > 0) || !(opts.fine_step > 0) || opts.fine_step > opts.coarse_step)
    fail(ErrorKind::invalid_argument, "separation: need 0 < fine_step <= coarse_step");
  const LabFrameModel model(p);
  // The CH2 window sits on the n-th sideband; it needs n harmonics beyond the drive spread.
  const int mt = std::max(cfg.truncation_m, required_truncation(p) + std::abs(p.n()));
  const double half = 0.5 * p.omega_b;
  const double bare1 = p.delta0;
  const double bare2 = p.signed_order() * p.omega_b;
  Readout readout = opts.readout;
  if (readout == Readout::automatic) readout = p.gamma_c > 0 ? Readout::transfer : Readout::self;
  auto probe_for = [&](Channel read) { return readout == Readout::transfer ? other(read) : read; };

  const WindowPeak a = window_peak(model, mt, probe_for(Channel::ch1), Channel::ch1, bare1, bare1 - half,
                                   bare1 + half, opts);
  const WindowPeak b = window_peak(model, mt, probe_for(Channel::ch2), Channel::ch2, bare2, bare2 - half,
                                   bare2 + half, opts);
  SeparationPoint pt;
  pt.delta0_abs = std::abs(p.delta0);
  pt.ch1_center = a.center + p.stark_shift;
  pt.ch2_center = b.center + p.stark_shift;
  pt.fwhm = std::max(a.fwhm, b.fwhm);
  pt.resolution = std::max(2 * opts.fine_step, 0.2 * pt.fwhm);
  const double sep = std::abs(a.center - b.center);
  pt.merged = sep < pt.resolution;
  pt.separation = pt.merged ? 0.0 : sep;
  const double mu = p.mismatch();
  const double ge = engine::effective_coupling(p);
  pt.eigen_separation = std::sqrt(std::max(0.0, mu * mu - 4 * ge * ge));
  return pt;
}

std::vector<SeparationPoint> separation_curve(const ModelParams& tmpl, const std::vector<double>& delta0_abs,
                                              const SimConfig& cfg, const SeparationOptions& opts) {
  std::vector<SeparationPoint> out(delta0_abs.size());
  const double sign = tmpl.delta0 < 0 ? -1.0 : 1.0;
  SeparationOptions inner = opts;
  inner.jobs = 1;
  parallel_for(delta0_abs.size(), opts.jobs, [&](std::size_t i) {
    ModelParams p = tmpl;
    p.delta0 = sign * std::abs(delta0_abs[i]);
    out[i] = measure_separation(p, cfg, inner);
  });
  return out;
}

BeatMeasurement beat_frequency(const ModelParams& p, const SimConfig& cfg, const BeatOptions& opts) {
  require_valid(p, cfg);
  BeatMeasurement bm;
  const double mu = std::abs(p.mismatch());
  const double duration = std::max(cfg.sim_duration, mu > 0 ? 20.0 / mu : 0.0);
  const double fs = opts.samples_per_period * p.omega_b;
  const double dt = 1.0 / fs;
  const std::size_t ns = static_cast<std::size_t>(std::floor(duration * fs));
  bm.duration = static_cast<double>(ns) * dt;
  bm.resolution = 1.0 / bm.duration;
  bm.nyquist = 0.5 * fs;

  ModelParams q = p;
  q.gamma12 = 0;  // a common decay only rescales both modes
  const LabFrameModel model(q);
  numerics::MatrixFunction h = [&](double t, numerics::ComplexMat& m) {
    model.hamiltonian(t, m);
    m *= 2.0 * numerics::pi;
  };
  numerics::OdeOptions o;
  o.rel_tol = cfg.rel_tol;
  o.abs_tol = cfg.abs_tol;

  const double t0 = p.gamma12 > 0 ? 5.0 / p.gamma12 : 0.0;
  numerics::ComplexVec s{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  if (t0 > 0) s = numerics::integrate_linear(h, s, 0.0, t0, o).final_state;

  // The state is renormalized between chunks; log_scale keeps |s1|^2 on one
  // continuous scale across them.
  double log_scale = 0;
  auto renorm = [&] {
    const double nrm = numerics::norm2(s);
    if (!(nrm > 0) || !std::isfinite(nrm)) fail(ErrorKind::numerical, "beat: state collapsed");
    for (auto& z : s) z /= nrm;
    log_scale += 2 * std::log(nrm);
  };
  renorm();
  log_scale = 0;
  std::vector<double> trace(ns);
  const std::size_t chunk = 4096;
  for (std::size_t start = 0; start < ns; start += chunk) {
    const std::size_t stop = std::min(ns, start + chunk);
    std::vector<double> ts(stop - start);
    for (std::size_t k = start; k < stop; ++k) ts[k - start] = t0 + static_cast<double>(k) * dt;
    const double t_end = t0 + static_cast<double>(stop) * dt;
    auto tr = numerics::integrate_linear(h, s, ts.front(), t_end, o, ts);
    for (std::size_t k = start; k < stop; ++k) {
      const double v = std::norm(tr.states[k - start][0]);
      trace[k] = v > 0 ? std::log(v) + log_scale : -1e300;
    }
    s = tr.final_state;
    renorm();
  }
  const double top = *std::max_element(trace.begin(), trace.end());
  for (double& v : trace) v = std::exp(v - top);
  double mean = 0;
  for (double v : trace) mean += v;
  mean /= static_cast<double>(ns);
  for (double& v : trace) v -= mean;

  const double df = 0.5 / bm.duration;
  const double f_lo = 2.0 / bm.duration;
  const double f_hi = std::min(0.5 * p.omega_b, 0.9 * bm.nyquist);
  std::vector<double> fs_scan, amp;
  for (double f = f_lo; f <= f_hi; f += df) {
    fs_scan.push_back(f);
    amp.push_back(std::abs(numerics::spectral_amplitude(trace, dt, f, t0)));
  }
  if (fs_scan.size() < 3) {
    bm.note = "scan range too short";
    return bm;
  }
  const std::size_t k = static_cast<std::size_t>(std::max_element(amp.begin(), amp.end()) - amp.begin());
  std::vector<double> sorted = amp;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  bm.confidence = median > 0 ? amp[k] / median : 0.0;
  if (k == 0 || k + 1 == amp.size()) {
    bm.note = "dominant component at the scan boundary";
    return bm;
  }
  if (bm.confidence < opts.confidence_threshold) {
    bm.note = "no component above the confidence threshold";
    return bm;
  }
  const double fine = df / 10;
  double best_f = fs_scan[k], best_a = amp[k];
  std::vector<double> ff, fa;
  for (int i = -10; i <= 10; ++i) {
    const double f = fs_scan[k] + i * fine;
    ff.push_back(f);
    fa.push_back(std::abs(numerics::spectral_amplitude(trace, dt, f, t0)));
  }
  const std::size_t j = static_cast<std::size_t>(std::max_element(fa.begin(), fa.end()) - fa.begin());
  best_f = ff[j];
  best_a = fa[j];
  if (j > 0 && j + 1 < fa.size()) {
    const double denom = fa[j - 1] - 2 * fa[j] + fa[j + 1];
    if (denom != 0) {
      const double off = 0.5 * (fa[j - 1] - fa[j + 1]) / denom;
      best_f = ff[j] + off * fine;
      best_a = fa[j] - 0.25 * (fa[j - 1] - fa[j + 1]) * off;
    }
  }
  bm.found = true;
  bm.frequency = best_f;
  bm.amplitude = 2 * best_a;
  return bm;
}

}  // namespace floqept::observables
