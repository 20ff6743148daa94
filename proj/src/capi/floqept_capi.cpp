#include "floqept/floqept.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "analysis/analysis.hpp"
#include "core/error.hpp"
#include "core/model.hpp"
#include "engine/floquet.hpp"
#include "numerics/bessel.hpp"
#include "observables/observables.hpp"

struct floqept_config {
  floqept::ModelParams params;
  floqept::SimConfig cfg;
};

struct floqept_spectrum {
  floqept::observables::SpectrumTrace trace;
};

struct floqept_peaks {
  floqept::observables::PeakSet peaks;
};

struct floqept_gamma_curve {
  floqept::analysis::GammaCurve curve;
};

namespace {

using namespace floqept;

thread_local std::string g_last_error;

floqept_status to_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return FLOQEPT_ERR_INVALID_ARGUMENT;
    case ErrorKind::validation: return FLOQEPT_ERR_VALIDATION;
    case ErrorKind::numerical: return FLOQEPT_ERR_NUMERICAL;
    case ErrorKind::io: return FLOQEPT_ERR_IO;
    case ErrorKind::range: return FLOQEPT_ERR_RANGE;
  }
  return FLOQEPT_ERR_INTERNAL;
}

template <class F>
floqept_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return FLOQEPT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FLOQEPT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLOQEPT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FLOQEPT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorKind::invalid_argument, std::string(what) + " is NULL");
}

floqept_phase to_c(engine::PhaseTag t) {
  switch (t) {
    case engine::PhaseTag::unbroken: return FLOQEPT_UNBROKEN;
    case engine::PhaseTag::ep: return FLOQEPT_EP;
    case engine::PhaseTag::broken: return FLOQEPT_BROKEN;
  }
  return FLOQEPT_BROKEN;
}

floqept_branches to_c(const engine::Branches& b) {
  return {b.plus().real(), b.plus().imag(), b.minus().real(), b.minus().imag(), to_c(b.tag)};
}

analysis::EpRoute to_cpp(floqept_route r) {
  switch (r) {
    case FLOQEPT_ROUTE_CLOSED_FORM: return analysis::EpRoute::closed_form;
    case FLOQEPT_ROUTE_MONODROMY: return analysis::EpRoute::monodromy;
    case FLOQEPT_ROUTE_SPECTRAL: return analysis::EpRoute::spectral;
  }
  fail(ErrorKind::invalid_argument, "unknown route");
}

floqept_route to_c(analysis::EpRoute r) {
  switch (r) {
    case analysis::EpRoute::closed_form: return FLOQEPT_ROUTE_CLOSED_FORM;
    case analysis::EpRoute::monodromy: return FLOQEPT_ROUTE_MONODROMY;
    case analysis::EpRoute::spectral: return FLOQEPT_ROUTE_SPECTRAL;
  }
  return FLOQEPT_ROUTE_CLOSED_FORM;
}

Channel to_cpp(floqept_channel c) {
  if (c == FLOQEPT_CH1) return Channel::ch1;
  if (c == FLOQEPT_CH2) return Channel::ch2;
  fail(ErrorKind::invalid_argument, "unknown channel");
}

observables::SeparationOptions to_cpp(const floqept_separation_options* o) {
  observables::SeparationOptions s;
  if (!o) return s;
  s.coarse_step = o->coarse_step;
  s.fine_step = o->fine_step;
  s.prominence = o->prominence;
  switch (o->readout) {
    case FLOQEPT_READOUT_AUTO: s.readout = observables::Readout::automatic; break;
    case FLOQEPT_READOUT_TRANSFER: s.readout = observables::Readout::transfer; break;
    case FLOQEPT_READOUT_SELF: s.readout = observables::Readout::self; break;
    default: fail(ErrorKind::invalid_argument, "unknown readout");
  }
  s.jobs = o->jobs;
  return s;
}

analysis::EpOptions to_cpp(const floqept_ep_options* o) {
  analysis::EpOptions e;
  if (!o) return e;
  e.bracket_width = o->bracket_width;
  e.monodromy_gap = o->monodromy_gap;
  if (o->has_gamma_eff) e.gamma_eff = o->gamma_eff;
  e.separation = to_cpp(&o->separation);
  return e;
}

floqept_separation_point to_c(const observables::SeparationPoint& p) {
  return {p.delta0_abs, p.separation, p.merged ? 1 : 0, p.ch1_center, p.ch2_center,
          p.fwhm,       p.resolution, p.eigen_separation};
}

void copy_message(char* dst, std::size_t cap, const std::string& src) {
  std::snprintf(dst, cap, "%s", src.c_str());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_int_key(const std::string& k) { return k == "n1" || k == "n2" || k == "truncation_m"; }

const std::vector<std::string>& keys() {
  static const std::vector<std::string> k = setting_keys();
  return k;
}

}  // namespace

extern "C" {

const char* floqept_version(void) { return FLOQEPT_VERSION_STRING; }

const char* floqept_last_error(void) { return g_last_error.c_str(); }

const char* floqept_status_name(floqept_status s) {
  switch (s) {
    case FLOQEPT_OK: return "ok";
    case FLOQEPT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case FLOQEPT_ERR_VALIDATION: return "validation";
    case FLOQEPT_ERR_NUMERICAL: return "numerical";
    case FLOQEPT_ERR_IO: return "io";
    case FLOQEPT_ERR_RANGE: return "range";
    case FLOQEPT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* floqept_phase_name(floqept_phase p) {
  switch (p) {
    case FLOQEPT_UNBROKEN: return "unbroken";
    case FLOQEPT_EP: return "EP";
    case FLOQEPT_BROKEN: return "broken";
  }
  return "unknown";
}

const char* floqept_route_name(floqept_route r) {
  switch (r) {
    case FLOQEPT_ROUTE_CLOSED_FORM: return "closed-form";
    case FLOQEPT_ROUTE_MONODROMY: return "monodromy";
    case FLOQEPT_ROUTE_SPECTRAL: return "spectral-pipeline";
  }
  return "unknown";
}

floqept_status floqept_route_parse(const char* text, floqept_route* out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = to_c(analysis::parse_route(text));
  });
}

floqept_status floqept_config_create(floqept_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new floqept_config{};
  });
}

floqept_status floqept_config_clone(const floqept_config* cfg, floqept_config** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    *out = new floqept_config(*cfg);
  });
}

void floqept_config_destroy(floqept_config* cfg) { delete cfg; }

floqept_status floqept_config_set(floqept_config* cfg, const char* key, const char* value) {
  return guard([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    apply_setting(cfg->params, cfg->cfg, key, value);
  });
}

floqept_status floqept_config_set_double(floqept_config* cfg, const char* key, double value) {
  return guard([&] {
    need(cfg, "config");
    need(key, "key");
    std::string text;
    if (is_int_key(key)) {
      if (!(std::abs(value) < 1e9) || std::trunc(value) != value)
        fail(ErrorKind::invalid_argument, std::string("setting '") + key + "' needs an integer");
      text = std::to_string(static_cast<long long>(value));
    } else {
      text = format_double(value);
    }
    apply_setting(cfg->params, cfg->cfg, key, text);
  });
}

floqept_status floqept_config_get_double(const floqept_config* cfg, const char* key, double* out) {
  return guard([&] {
    need(cfg, "config");
    need(key, "key");
    need(out, "out");
    const auto& p = cfg->params;
    const auto& c = cfg->cfg;
    const std::string k = key;
    if (k == "delta0") *out = p.delta0;
    else if (k == "gamma_c") *out = p.gamma_c;
    else if (k == "gamma12") *out = p.gamma12;
    else if (k == "delta_b") *out = p.delta_b;
    else if (k == "omega_b") *out = p.omega_b;
    else if (k == "delta_zeeman0") *out = p.delta_zeeman0;
    else if (k == "stark_shift") *out = p.stark_shift;
    else if (k == "n1") *out = p.n1;
    else if (k == "n2") *out = p.n2;
    else if (k == "truncation_m") *out = c.truncation_m;
    else if (k == "rel_tol") *out = c.rel_tol;
    else if (k == "abs_tol") *out = c.abs_tol;
    else if (k == "grid_start") *out = c.grid.start;
    else if (k == "grid_stop") *out = c.grid.stop;
    else if (k == "grid_step") *out = c.grid.step;
    else if (k == "sim_duration") *out = c.sim_duration;
    else fail(ErrorKind::invalid_argument, "unknown setting '" + k + "'");
  });
}

size_t floqept_config_key_count(void) { return keys().size(); }

const char* floqept_config_key(size_t i) { return i < keys().size() ? keys()[i].c_str() : nullptr; }

floqept_status floqept_config_load_text(floqept_config* cfg, const char* text) {
  return guard([&] {
    need(cfg, "config");
    need(text, "text");
    floqept_config tmp = *cfg;
    std::istringstream in(text);
    load_settings(in, tmp.params, tmp.cfg);
    *cfg = tmp;
  });
}

floqept_status floqept_config_load_file(floqept_config* cfg, const char* path) {
  return guard([&] {
    need(cfg, "config");
    need(path, "path");
    floqept_config tmp = *cfg;
    load_settings_file(path, tmp.params, tmp.cfg);
    *cfg = tmp;
  });
}

floqept_status floqept_config_format(const floqept_config* cfg, char* buf, size_t capacity, size_t* needed) {
  return guard([&] {
    need(cfg, "config");
    if (capacity > 0) need(buf, "buf");
    const std::string text = format_settings(cfg->params, cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (capacity == 0) return;
    if (capacity < text.size() + 1) fail(ErrorKind::range, "buffer too small for settings text");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

floqept_status floqept_config_validate(const floqept_config* cfg) {
  return guard([&] {
    need(cfg, "config");
    require_valid(cfg->params, cfg->cfg);
  });
}

int floqept_required_truncation(const floqept_config* cfg) {
  return cfg ? required_truncation(cfg->params) : -1;
}

floqept_status floqept_static_eigen(const floqept_config* cfg, floqept_branches* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    require_valid(cfg->params, cfg->cfg);
    *out = to_c(engine::static_eigenvalues(cfg->params.delta0, cfg->params.gamma_c));
  });
}

floqept_status floqept_rwa_eigen(const floqept_config* cfg, floqept_branches* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    require_valid(cfg->params, cfg->cfg);
    const auto& p = cfg->params;
    *out = to_c(engine::floquet_eigenvalues(p.delta0, p.omega_b, p.n(), engine::effective_coupling(p)));
  });
}

floqept_status floqept_effective_coupling(const floqept_config* cfg, double* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    *out = engine::effective_coupling(cfg->params);
  });
}

floqept_status floqept_monodromy(const floqept_config* cfg, floqept_quasienergies* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    const auto q = engine::monodromy_quasienergies(cfg->params, cfg->cfg);
    for (int i = 0; i < 2; ++i) {
      out->re[i] = q.values[i].real();
      out->im[i] = q.values[i].imag();
      out->zone_offset[i] = q.zone_offsets[i];
    }
    out->real_gap = q.real_gap();
    out->determinant_abs = q.determinant_abs;
    out->determinant_expected = q.determinant_expected;
    out->steps = q.steps;
  });
}

floqept_status floqept_steady_state_power(const floqept_config* cfg, floqept_channel probe, double detuning,
                                          double power_out[2]) {
  return guard([&] {
    need(cfg, "config");
    need(power_out, "power_out");
    const auto r = engine::steady_state_response(cfg->params, cfg->cfg, {to_cpp(probe), detuning, 1.0});
    power_out[0] = r.power(Channel::ch1);
    power_out[1] = r.power(Channel::ch2);
  });
}

floqept_status floqept_spectrum_compute(const floqept_config* cfg, unsigned probe_mask, int jobs, int with_sidebands,
                                        floqept_spectrum** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    std::vector<Channel> probed;
    if (probe_mask & 1u) probed.push_back(Channel::ch1);
    if (probe_mask & 2u) probed.push_back(Channel::ch2);
    if (probed.empty() || (probe_mask & ~3u)) fail(ErrorKind::invalid_argument, "probe_mask must be 1, 2 or 3");
    observables::SpectrumOptions o;
    o.jobs = jobs;
    o.sidebands = with_sidebands != 0;
    auto* s = new floqept_spectrum{observables::synthesize_spectrum(cfg->params, cfg->cfg, probed, o)};
    *out = s;
  });
}

void floqept_spectrum_destroy(floqept_spectrum* s) { delete s; }

size_t floqept_spectrum_size(const floqept_spectrum* s) { return s ? s->trace.grid.size() : 0; }

int floqept_spectrum_truncation(const floqept_spectrum* s) { return s ? s->trace.truncation : 0; }

const double* floqept_spectrum_grid(const floqept_spectrum* s) { return s ? s->trace.grid.data() : nullptr; }

const double* floqept_spectrum_power(const floqept_spectrum* s, floqept_channel c) {
  if (!s || (c != FLOQEPT_CH1 && c != FLOQEPT_CH2)) return nullptr;
  return s->trace.power[static_cast<std::size_t>(c)].data();
}

const double* floqept_spectrum_sideband(const floqept_spectrum* s, floqept_channel c, int m) {
  if (!s || !s->trace.has_sidebands() || (c != FLOQEPT_CH1 && c != FLOQEPT_CH2)) return nullptr;
  const int mt = s->trace.truncation;
  if (m < -mt || m > mt) return nullptr;
  return s->trace.sideband[static_cast<std::size_t>(c)][static_cast<std::size_t>(m + mt)].data();
}

floqept_status floqept_detect_peaks(const double* x, const double* y, size_t n, double prominence,
                                    floqept_peaks** out) {
  return guard([&] {
    need(out, "out");
    if (n > 0) {
      need(x, "x");
      need(y, "y");
    }
    std::vector<double> xs(x, x + n), ys(y, y + n);
    *out = new floqept_peaks{observables::detect_peaks(xs, ys, prominence)};
  });
}

void floqept_peaks_destroy(floqept_peaks* p) { delete p; }

size_t floqept_peaks_count(const floqept_peaks* p) { return p ? p->peaks.size() : 0; }

floqept_status floqept_peaks_get(const floqept_peaks* p, size_t i, floqept_peak* out) {
  return guard([&] {
    need(p, "peaks");
    need(out, "out");
    if (i >= p->peaks.size()) fail(ErrorKind::range, "peak index out of range");
    const auto& pk = p->peaks[i];
    *out = {pk.center, pk.height, pk.fwhm, pk.label ? 1 : 0, pk.label.value_or(0)};
  });
}

floqept_status floqept_peaks_label(floqept_peaks* p, double origin, double spacing) {
  return guard([&] {
    need(p, "peaks");
    if (!(spacing > 0)) fail(ErrorKind::invalid_argument, "spacing must be positive");
    observables::label_sidebands(p->peaks, origin, spacing);
  });
}

void floqept_separation_options_init(floqept_separation_options* o) {
  if (!o) return;
  const observables::SeparationOptions d;
  *o = {d.coarse_step, d.fine_step, d.prominence, FLOQEPT_READOUT_AUTO, d.jobs};
}

floqept_status floqept_separation(const floqept_config* cfg, const floqept_separation_options* opts,
                                  floqept_separation_point* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    *out = to_c(observables::measure_separation(cfg->params, cfg->cfg, to_cpp(opts)));
  });
}

floqept_status floqept_separation_curve(const floqept_config* cfg, const double* delta0_abs, size_t n,
                                        const floqept_separation_options* opts, floqept_separation_point* out) {
  return guard([&] {
    need(cfg, "config");
    if (n > 0) {
      need(delta0_abs, "delta0_abs");
      need(out, "out");
    }
    const auto curve = observables::separation_curve(cfg->params, std::vector<double>(delta0_abs, delta0_abs + n),
                                                     cfg->cfg, to_cpp(opts));
    for (std::size_t i = 0; i < n; ++i) out[i] = to_c(curve[i]);
  });
}

floqept_status floqept_beat_frequency(const floqept_config* cfg, double samples_per_period,
                                      double confidence_threshold, floqept_beat* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    observables::BeatOptions o;
    if (samples_per_period > 0) o.samples_per_period = samples_per_period;
    if (confidence_threshold > 0) o.confidence_threshold = confidence_threshold;
    const auto b = observables::beat_frequency(cfg->params, cfg->cfg, o);
    out->found = b.found ? 1 : 0;
    out->frequency = b.frequency;
    out->amplitude = b.amplitude;
    out->confidence = b.confidence;
    out->duration = b.duration;
    out->resolution = b.resolution;
    out->nyquist = b.nyquist;
    copy_message(out->note, sizeof out->note, b.note);
  });
}

void floqept_ep_options_init(floqept_ep_options* o) {
  if (!o) return;
  const analysis::EpOptions d;
  o->bracket_width = d.bracket_width;
  o->monodromy_gap = d.monodromy_gap;
  o->has_gamma_eff = 0;
  o->gamma_eff = 0;
  floqept_separation_options_init(&o->separation);
}

floqept_status floqept_locate_ep(const floqept_config* cfg, int n, floqept_route route,
                                 const floqept_ep_options* opts, floqept_ep_result* out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    const auto r = analysis::locate_ep(cfg->params, n, to_cpp(route), cfg->cfg, to_cpp(opts));
    *out = {r.delta0_abs, r.mu, r.gamma_eff, to_c(r.route), r.lo, r.hi, r.iterations};
  });
}

floqept_status floqept_ep_indicator(const floqept_config* cfg, int n, floqept_route route, double delta0_abs,
                                    const floqept_ep_options* opts, int* broken) {
  return guard([&] {
    need(cfg, "config");
    need(broken, "broken");
    *broken = analysis::ep_indicator(cfg->params, n, to_cpp(route), delta0_abs, cfg->cfg, to_cpp(opts)) ? 1 : 0;
  });
}

floqept_status floqept_gamma_curve_compute(const floqept_config* cfg, const double* omegas, size_t n,
                                           floqept_route route, const floqept_ep_options* opts, int jobs,
                                           floqept_gamma_curve** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    if (n > 0) need(omegas, "omegas");
    *out = new floqept_gamma_curve{analysis::gamma_curve(cfg->params, std::vector<double>(omegas, omegas + n),
                                                         cfg->cfg, to_cpp(route), to_cpp(opts), jobs)};
  });
}

floqept_status floqept_gamma_curve_fit(const floqept_gamma_point* points, size_t n, floqept_gamma_curve** out) {
  return guard([&] {
    need(out, "out");
    if (n > 0) need(points, "points");
    std::vector<analysis::GammaPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({points[i].omega_b, points[i].gamma_eff, points[i].resolved != 0, {}});
    *out = new floqept_gamma_curve{analysis::fit_gamma_curve(std::move(pts))};
  });
}

void floqept_gamma_curve_destroy(floqept_gamma_curve* g) { delete g; }

size_t floqept_gamma_curve_size(const floqept_gamma_curve* g) { return g ? g->curve.points.size() : 0; }

floqept_status floqept_gamma_curve_point(const floqept_gamma_curve* g, size_t i, floqept_gamma_point* out) {
  return guard([&] {
    need(g, "curve");
    need(out, "out");
    if (i >= g->curve.points.size()) fail(ErrorKind::range, "point index out of range");
    const auto& p = g->curve.points[i];
    *out = {p.omega_b, p.gamma_eff, p.resolved ? 1 : 0};
  });
}

const char* floqept_gamma_curve_point_note(const floqept_gamma_curve* g, size_t i) {
  if (!g || i >= g->curve.points.size()) return "";
  return g->curve.points[i].note.c_str();
}

int floqept_gamma_curve_fitted(const floqept_gamma_curve* g) { return g && g->curve.fitted ? 1 : 0; }
double floqept_gamma_curve_gamma_c(const floqept_gamma_curve* g) { return g ? g->curve.gamma_c : 0; }
double floqept_gamma_curve_delta_b(const floqept_gamma_curve* g) { return g ? g->curve.delta_b : 0; }
double floqept_gamma_curve_residual_norm(const floqept_gamma_curve* g) { return g ? g->curve.residual_norm : 0; }
int floqept_gamma_curve_iterations(const floqept_gamma_curve* g) { return g ? g->curve.fit.iterations : 0; }
const char* floqept_gamma_curve_message(const floqept_gamma_curve* g) { return g ? g->curve.message.c_str() : ""; }

double floqept_coupling_model(double omega_b, double gamma_c, double delta_b) {
  try {
    return analysis::coupling_model(omega_b, gamma_c, delta_b);
  } catch (...) {
    return std::nan("");
  }
}

floqept_status floqept_bessel_j(int m, double x, double* out) {
  return guard([&] {
    need(out, "out");
    *out = numerics::bessel_j(m, x);
  });
}

floqept_status floqept_fit_sideband_heights(const double* omegas, const double* heights, size_t n, int m,
                                            floqept_fit_result* out) {
  return guard([&] {
    need(out, "out");
    if (n > 0) {
      need(omegas, "omegas");
      need(heights, "heights");
    }
    std::vector<analysis::HeightPoint> pts;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({omegas[i], heights[i]});
      y.push_back(heights[i]);
    }
    const auto r = analysis::fit_sideband_heights(pts, m);
    out->alpha = r.parameters.size() > 0 ? r.parameters[0] : 0;
    out->k = r.parameters.size() > 1 ? std::abs(r.parameters[1]) : 0;
    out->residual_norm = r.residual_norm;
    out->gradient_norm = r.gradient_norm;
    out->r_squared = r.residuals.size() == y.size() ? analysis::coefficient_of_determination(y, r.residuals) : 0;
    out->converged = r.converged ? 1 : 0;
    out->iterations = r.iterations;
    copy_message(out->message, sizeof out->message, r.message);
  });
}

floqept_status floqept_simulate_sideband_heights(const floqept_config* cfg, const double* omegas, size_t n_omegas,
                                                 const int* orders, size_t n_orders, int jobs, double* heights_out) {
  return guard([&] {
    need(cfg, "config");
    if (n_omegas > 0) need(omegas, "omegas");
    if (n_orders > 0) need(orders, "orders");
    if (n_omegas * n_orders > 0) need(heights_out, "heights_out");
    const auto h = analysis::simulate_sideband_heights(cfg->params, std::vector<double>(omegas, omegas + n_omegas),
                                                       std::vector<int>(orders, orders + n_orders), cfg->cfg, jobs);
    for (std::size_t k = 0; k < n_orders; ++k)
      for (std::size_t i = 0; i < n_omegas; ++i) heights_out[k * n_omegas + i] = h[k][i].height;
  });
}

floqept_status floqept_solve_drive_depth(double gamma_c, double omega_b, int n1, int n2, double target, double x_lo,
                                         double x_hi, double* delta_b_out) {
  return guard([&] {
    need(delta_b_out, "delta_b_out");
    *delta_b_out = analysis::solve_drive_depth(gamma_c, omega_b, n1, n2, target, x_lo, x_hi);
  });
}

floqept_status floqept_drive_depth_roots(double gamma_c, int n1, int n2, double target, double x_max, double* roots,
                                         size_t capacity, size_t* count) {
  return guard([&] {
    need(count, "count");
    if (capacity > 0) need(roots, "roots");
    const auto r = analysis::drive_depth_roots(gamma_c, n1, n2, target, x_max);
    *count = r.size();
    for (std::size_t i = 0; i < r.size() && i < capacity; ++i) roots[i] = r[i];
  });
}

floqept_status floqept_phase_diagram(const floqept_config* cfg, const double* delta0_abs, size_t n_delta0,
                                     const double* omegas, size_t n_omega, int n, double resolution,
                                     floqept_phase_cell* out) {
  return guard([&] {
    need(cfg, "config");
    if (n_delta0 > 0) need(delta0_abs, "delta0_abs");
    if (n_omega > 0) need(omegas, "omegas");
    if (n_delta0 * n_omega > 0) need(out, "out");
    if (n < 0) fail(ErrorKind::validation, "order n must be non-negative");
    if (!(resolution >= 0)) fail(ErrorKind::invalid_argument, "resolution must be non-negative");
    for (std::size_t i = 0; i < n_omega; ++i)
      if (!(omegas[i] > 0)) fail(ErrorKind::validation, "omega_b grid values must be positive");
    const auto cells = analysis::phase_diagram(cfg->params, std::vector<double>(delta0_abs, delta0_abs + n_delta0),
                                               std::vector<double>(omegas, omegas + n_omega), n, resolution);
    for (std::size_t i = 0; i < cells.size(); ++i)
      out[i] = {cells[i].delta0_abs, cells[i].omega_b, cells[i].mu, cells[i].gamma_eff, to_c(cells[i].tag)};
  });
}

}  // extern "C"
