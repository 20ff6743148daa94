#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace cli {

namespace {

double sign_of(double v) { return v < 0 ? -1.0 : 1.0; }

int order_n(const floqept_config* c) {
  return static_cast<int>(get(c, "n1")) - static_cast<int>(get(c, "n2"));
}

floqept_route parse_route(const std::string& s) {
  floqept_route r{};
  check(floqept_route_parse(s.c_str(), &r), "route");
  return r;
}

floqept_channel parse_channel(const std::string& s) {
  if (s == "ch1" || s == "CH1" || s == "1") return FLOQEPT_CH1;
  if (s == "ch2" || s == "CH2" || s == "2") return FLOQEPT_CH2;
  throw CliError(2, "unknown channel '" + s + "' (expected ch1 or ch2)");
}

std::vector<floqept_channel> parse_channels(const std::string& s) {
  if (s == "both") return {FLOQEPT_CH1, FLOQEPT_CH2};
  return {parse_channel(s)};
}

const char* channel_name(floqept_channel c) { return c == FLOQEPT_CH1 ? "ch1" : "ch2"; }

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CliError(2, what + " must be lo:hi");
  auto lo = parse_range(text.substr(0, colon)), hi = parse_range(text.substr(colon + 1));
  if (lo.size() != 1 || hi.size() != 1 || !(hi[0] > lo[0])) throw CliError(2, what + " must be lo:hi with lo < hi");
  return {lo[0], hi[0]};
}

// |delta0| values of a sweep, or the template's own point.
std::vector<double> delta0_points(const floqept_config* c, const std::string& sweep) {
  if (sweep.empty()) return {std::abs(get(c, "delta0"))};
  auto v = parse_range(sweep);
  for (double& d : v) d = std::abs(d);
  return v;
}

struct PeaksDeleter {
  void operator()(floqept_peaks* p) const { floqept_peaks_destroy(p); }
};
struct SpectrumDeleter {
  void operator()(floqept_spectrum* s) const { floqept_spectrum_destroy(s); }
};
struct CurveDeleter {
  void operator()(floqept_gamma_curve* g) const { floqept_gamma_curve_destroy(g); }
};

struct LinearFit {
  double slope = 0, intercept = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LinearFit f;
  if (den != 0) {
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
  }
  return f;
}

// Monodromy quasi-energies moved to the zone of the resonant pair, common decay removed.
floqept_branches monodromy_branches(const floqept_config* c, double gap) {
  floqept_quasienergies q{};
  check(floqept_monodromy(c, &q), "monodromy");
  const double d0 = get(c, "delta0"), w = get(c, "omega_b"), g12 = get(c, "gamma12");
  const double center = 0.5 * (d0 + sign_of(d0) * order_n(c) * w);
  double re[2], im[2];
  for (int i = 0; i < 2; ++i) {
    re[i] = q.re[i] + std::round((center - q.re[i]) / w) * w;
    im[i] = q.im[i] + g12;
  }
  // Same branch order as the rwa route: by Re when split in Re, else by Im.
  const bool broken = q.real_gap > gap;
  const bool swap = broken ? re[1] > re[0] : im[1] > im[0];
  if (swap) std::swap(re[0], re[1]), std::swap(im[0], im[1]);
  floqept_branches b{re[0], im[0], re[1], im[1], FLOQEPT_EP};
  if (broken) b.phase = FLOQEPT_BROKEN;
  else if (std::abs(im[0] - im[1]) > gap) b.phase = FLOQEPT_UNBROKEN;
  return b;
}

json peak_json(const floqept_peak& p) {
  json j{{"center", p.center}, {"height", p.height}, {"fwhm", p.fwhm}};
  j["sideband"] = p.has_label ? json(p.label) : json(nullptr);
  return j;
}

}  // namespace

void Run::write_csv(const std::string& name, const CsvWriter& w) {
  const auto p = path(name);
  w.write(p);
  outputs.push_back(p);
}

floqept_separation_options SeparationArgs::to_c(int jobs) const {
  floqept_separation_options o;
  floqept_separation_options_init(&o);
  o.coarse_step = coarse_step;
  o.fine_step = fine_step;
  o.prominence = prominence;
  if (readout == "auto") o.readout = FLOQEPT_READOUT_AUTO;
  else if (readout == "transfer") o.readout = FLOQEPT_READOUT_TRANSFER;
  else if (readout == "self") o.readout = FLOQEPT_READOUT_SELF;
  else throw CliError(2, "unknown readout '" + readout + "' (auto, transfer, self)");
  o.jobs = jobs;
  return o;
}

floqept_ep_options EpArgs::to_c(int jobs) const {
  floqept_ep_options o;
  floqept_ep_options_init(&o);
  o.bracket_width = bracket_width;
  o.monodromy_gap = gap;
  if (gamma_eff) {
    o.has_gamma_eff = 1;
    o.gamma_eff = *gamma_eff;
  }
  o.separation = sep.to_c(jobs);
  return o;
}

void cmd_eigen(Run& r, const EigenArgs& a) {
  std::vector<std::string> routes;
  const std::string route = a.static_only ? "static" : a.route;
  if (route == "all") routes = {"static", "rwa", "monodromy"};
  else if (route == "static") routes = {"static"};
  else if (route == "rwa" || route == "closed-form") routes = {"rwa"};
  else if (route == "monodromy") routes = {"monodromy"};
  else throw CliError(2, "unknown eigen route '" + route + "' (static, rwa, monodromy, all)");
  check(floqept_config_validate(r.cfg.get()), "eigen");

  const auto points = delta0_points(r.cfg.get(), a.sweep);
  const double sign = sign_of(get(r.cfg.get(), "delta0"));
  CsvWriter csv({"delta0_abs", "route", "re_nu_plus", "im_nu_plus", "re_nu_minus", "im_nu_minus", "phase_tag"});
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, std::vector<floqept_branches>> by_route;
  json transitions = json::array();
  for (double d : points) {
    auto c = clone(r.cfg.get());
    set(c.get(), "delta0", sign * d);
    for (const auto& rt : routes) {
      floqept_branches b{};
      if (rt == "static") check(floqept_static_eigen(c.get(), &b), "static eigenvalues");
      else if (rt == "rwa") check(floqept_rwa_eigen(c.get(), &b), "rwa eigenvalues");
      else b = monodromy_branches(c.get(), a.gap);
      auto& hist = by_route[rt];
      if (!hist.empty() && hist.back().phase != b.phase)
        transitions.push_back({{"route", rt},
                               {"from", floqept_phase_name(hist.back().phase)},
                               {"to", floqept_phase_name(b.phase)},
                               {"delta0_abs", d}});
      hist.push_back(b);
      ++counts[rt][floqept_phase_name(b.phase)];
      csv << d << rt << b.re_plus << b.im_plus << b.re_minus << b.im_minus << floqept_phase_name(b.phase);
      csv.end_row();
    }
  }
  r.write_csv(r.stem + ".csv", csv);

  double ge = 0;
  check(floqept_effective_coupling(r.cfg.get(), &ge));
  r.summary["rows"] = csv.rows();
  r.summary["routes"] = routes;
  r.summary["effective_coupling"] = ge;
  r.summary["phase_counts"] = counts;
  r.summary["transitions"] = transitions;
  if (by_route.count("rwa") && by_route.count("monodromy")) {
    double dev = 0;
    const auto& x = by_route["rwa"];
    const auto& y = by_route["monodromy"];
    for (std::size_t i = 0; i < x.size(); ++i)
      dev = std::max({dev, std::abs(x[i].re_plus - y[i].re_plus), std::abs(x[i].re_minus - y[i].re_minus),
                      std::abs(x[i].im_plus - y[i].im_plus), std::abs(x[i].im_minus - y[i].im_minus)});
    r.summary["rwa_vs_monodromy_max_abs_deviation"] = dev;
  }
}

void cmd_spectrum(Run& r, const SpectrumArgs& a) {
  floqept_config* c = r.cfg.get();
  const double w = get(c, "omega_b"), d0 = get(c, "delta0"), stark = get(c, "stark_shift");

  if (!a.heights_omegas.empty()) {
    // Sideband heights of the CH1 self spectrum across drive frequencies.
    const auto omegas = parse_range(a.heights_omegas);
    const auto orders = parse_int_list(a.orders);
    std::vector<double> h(omegas.size() * orders.size());
    check(floqept_simulate_sideband_heights(c, omegas.data(), omegas.size(), orders.data(), orders.size(), r.jobs,
                                            h.data()),
          "sideband heights");
    r.stem = "heights";
    CsvWriter csv({"omega_b", "m", "height"});
    json fits = json::array();
    for (std::size_t k = 0; k < orders.size(); ++k) {
      for (std::size_t i = 0; i < omegas.size(); ++i) {
        csv << omegas[i] << orders[k] << h[k * omegas.size() + i];
        csv.end_row();
      }
      if (omegas.size() >= 3 && orders[k] >= 0) {
        floqept_fit_result f{};
        check(floqept_fit_sideband_heights(omegas.data(), h.data() + k * omegas.size(), omegas.size(), orders[k], &f),
              "height fit");
        fits.push_back({{"m", orders[k]},
                        {"alpha", f.alpha},
                        {"k", f.k},
                        {"r_squared", f.r_squared},
                        {"converged", f.converged != 0},
                        {"message", f.message}});
      }
    }
    r.write_csv("heights.csv", csv);
    r.summary["mode"] = "sideband-heights";
    r.summary["points"] = csv.rows();
    r.summary["fits"] = fits;
    return;
  }

  unsigned mask = 0;
  for (auto ch : parse_channels(a.probe)) mask |= 1u << ch;
  const auto reads = parse_channels(a.read);
  const int mt = static_cast<int>(get(c, "truncation_m"));
  const int nsb = std::min(a.sidebands, mt);
  floqept_spectrum* raw = nullptr;
  check(floqept_spectrum_compute(c, mask, r.jobs, nsb >= 0, &raw), "spectrum");
  std::unique_ptr<floqept_spectrum, SpectrumDeleter> spec(raw);
  const std::size_t n = floqept_spectrum_size(raw);
  const double* grid = floqept_spectrum_grid(raw);

  std::vector<std::string> header{"detuning"};
  for (auto ch : reads) header.push_back(std::string("power_") + channel_name(ch));
  for (auto ch : reads)
    for (int m = -nsb; m <= nsb; ++m) header.push_back(std::string(channel_name(ch)) + "_sb_" + std::to_string(m));
  CsvWriter csv(header);
  for (std::size_t i = 0; i < n; ++i) {
    csv << grid[i];
    for (auto ch : reads) csv << floqept_spectrum_power(raw, ch)[i];
    for (auto ch : reads)
      for (int m = -nsb; m <= nsb; ++m) csv << floqept_spectrum_sideband(raw, ch, m)[i];
    csv.end_row();
  }
  r.write_csv(r.stem + ".csv", csv);

  CsvWriter pcsv({"channel", "center", "height", "fwhm", "sideband"});
  json peaks = json::object();
  for (auto ch : reads) {
    floqept_peaks* pr = nullptr;
    check(floqept_detect_peaks(grid, floqept_spectrum_power(raw, ch), n, a.prominence, &pr), "peak detection");
    std::unique_ptr<floqept_peaks, PeaksDeleter> pk(pr);
    check(floqept_peaks_label(pr, (ch == FLOQEPT_CH1 ? d0 : 0.0) + stark, w));
    json list = json::array();
    for (std::size_t i = 0; i < floqept_peaks_count(pr); ++i) {
      floqept_peak p{};
      check(floqept_peaks_get(pr, i, &p));
      pcsv << channel_name(ch) << p.center << p.height << p.fwhm << (p.has_label ? std::to_string(p.label) : "");
      pcsv.end_row();
      list.push_back(peak_json(p));
    }
    peaks[channel_name(ch)] = list;
  }
  r.write_csv(r.stem + "_peaks.csv", pcsv);
  r.summary["grid_points"] = n;
  r.summary["probe"] = a.probe;
  r.summary["read"] = a.read;
  r.summary["truncation"] = floqept_spectrum_truncation(raw);
  r.summary["prominence"] = a.prominence;
  r.summary["peaks"] = peaks;
}

void cmd_separation(Run& r, const SeparationCmdArgs& a) {
  floqept_config* c = r.cfg.get();
  const auto points = delta0_points(c, a.sweep);
  const auto opts = a.sep.to_c(r.jobs);
  std::vector<floqept_separation_point> out(points.size());
  check(floqept_separation_curve(c, points.data(), points.size(), &opts, out.data()), "separation");
  const double w = get(c, "omega_b");
  const int n = order_n(c);
  CsvWriter csv({"delta0_abs", "mu", "separation", "merged", "ch1_center", "ch2_center", "fwhm", "resolution",
                 "eigen_separation"});
  int merged = 0;
  json bif = nullptr;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& p = out[i];
    csv << p.delta0_abs << (p.delta0_abs - n * w) << p.separation << p.merged << p.ch1_center << p.ch2_center
        << p.fwhm << p.resolution << p.eigen_separation;
    csv.end_row();
    merged += p.merged;
    if (bif.is_null() && i > 0 && out[i - 1].merged && !p.merged)
      bif = {{"last_merged_delta0_abs", out[i - 1].delta0_abs},
             {"first_resolved_delta0_abs", p.delta0_abs},
             {"mu_star_estimate", 0.5 * (out[i - 1].delta0_abs + p.delta0_abs) - n * w}};
  }
  r.write_csv(r.stem + ".csv", csv);
  double ge = 0;
  check(floqept_effective_coupling(c, &ge));
  r.summary["points"] = out.size();
  r.summary["merged_points"] = merged;
  r.summary["order_n"] = n;
  r.summary["effective_coupling"] = ge;
  r.summary["predicted_mu_star"] = 2 * ge;
  r.summary["bifurcation"] = bif;
  if (out.size() == 1) {
    r.summary["separation"] = out[0].separation;
    r.summary["merged"] = out[0].merged != 0;
  }
}

void cmd_beat(Run& r, const BeatArgs& a) {
  floqept_config* c = r.cfg.get();
  const auto points = delta0_points(c, a.sweep);
  const double sign = sign_of(get(c, "delta0")), w = get(c, "omega_b");
  const int n = order_n(c);
  CsvWriter csv({"delta0_abs", "mismatch", "found", "beat_hz", "amplitude", "confidence", "resolution", "note"});
  std::vector<double> xs, ys;
  json last = nullptr;
  for (double d : points) {
    auto cc = clone(c);
    set(cc.get(), "delta0", sign * d);
    floqept_beat b{};
    check(floqept_beat_frequency(cc.get(), a.samples_per_period, a.confidence, &b), "beat");
    const double mu = d - n * w;
    csv << d << mu << b.found << b.frequency << b.amplitude << b.confidence << b.resolution << b.note;
    csv.end_row();
    if (b.found) xs.push_back(std::abs(mu)), ys.push_back(b.frequency);
    last = {{"found", b.found != 0},
            {"beat_hz", b.found ? json(b.frequency) : json(nullptr)},
            {"mismatch", mu},
            {"resolution", b.resolution},
            {"duration", b.duration},
            {"confidence", b.confidence},
            {"note", b.note}};
  }
  r.write_csv(r.stem + ".csv", csv);
  r.summary["points"] = points.size();
  r.summary["found"] = xs.size();
  if (points.size() == 1) {
    for (auto& [k, v] : last.items()) r.summary[k] = v;
  } else if (xs.size() >= 2) {
    const auto f = least_squares(xs, ys);
    r.summary["fit"] = {{"slope", f.slope}, {"intercept", f.intercept}};
  }
}

void cmd_ep(Run& r, const EpArgs& a) {
  floqept_config* c = r.cfg.get();
  const int n = order_n(c);
  const double w = get(c, "omega_b");
  if (a.target_gamma_eff) {
    if (a.x_range.empty()) throw CliError(2, "--target-gamma-eff needs --x-range lo:hi");
    const auto [lo, hi] = parse_pair(a.x_range, "--x-range");
    double db = 0;
    const int n2 = static_cast<int>(get(c, "n2"));
    check(floqept_solve_drive_depth(get(c, "gamma_c"), w, n2 + n, n2, *a.target_gamma_eff, lo, hi, &db),
          "drive depth");
    set(c, "delta_b", db);
    const int need = floqept_required_truncation(c);
    if (get(c, "truncation_m") < need) {
      set(c, "truncation_m", static_cast<double>(need));
      r.summary["truncation_raised_to"] = need;
    }
    r.summary["solved_delta_b"] = db;
    r.summary["target_gamma_eff"] = *a.target_gamma_eff;
  }
  std::vector<floqept_route> routes;
  if (a.route == "all") routes = {FLOQEPT_ROUTE_CLOSED_FORM, FLOQEPT_ROUTE_MONODROMY, FLOQEPT_ROUTE_SPECTRAL};
  else routes = {parse_route(a.route)};
  const auto opts = a.to_c(r.jobs);
  CsvWriter csv({"route", "n", "omega_b", "delta_b", "delta0_abs", "mu", "gamma_eff", "lo", "hi", "iterations"});
  json results = json::array();
  for (auto rt : routes) {
    floqept_ep_result e{};
    check(floqept_locate_ep(c, n, rt, &opts, &e), std::string("EP search (") + floqept_route_name(rt) + ")");
    csv << floqept_route_name(rt) << n << w << get(c, "delta_b") << e.delta0_abs << e.mu << e.gamma_eff << e.lo
        << e.hi << e.iterations;
    csv.end_row();
    results.push_back({{"route", floqept_route_name(rt)},
                       {"delta0_abs", e.delta0_abs},
                       {"mu", e.mu},
                       {"gamma_eff", e.gamma_eff},
                       {"bracket", {e.lo, e.hi}},
                       {"iterations", e.iterations}});
  }
  r.write_csv(r.stem + ".csv", csv);
  double ge = 0;
  check(floqept_effective_coupling(c, &ge));
  r.summary["order_n"] = n;
  r.summary["predicted_gamma_eff"] = a.gamma_eff ? *a.gamma_eff : ge;
  r.summary["predicted_mu_star"] = 2 * (a.gamma_eff ? *a.gamma_eff : ge);
  r.summary["results"] = results;
}

void cmd_gamma_curve(Run& r, const GammaArgs& a) {
  floqept_config* c = r.cfg.get();
  if (a.omegas.empty()) throw CliError(2, "gamma-curve needs --omegas");
  const auto omegas = parse_range(a.omegas);
  const auto opts = a.ep.to_c(1);
  floqept_gamma_curve* raw = nullptr;
  check(floqept_gamma_curve_compute(c, omegas.data(), omegas.size(), parse_route(a.route), &opts, r.jobs, &raw),
        "gamma curve");
  std::unique_ptr<floqept_gamma_curve, CurveDeleter> g(raw);
  const bool fitted = floqept_gamma_curve_fitted(raw) != 0;
  const double gc = floqept_gamma_curve_gamma_c(raw), db = floqept_gamma_curve_delta_b(raw);
  const double gc0 = get(c, "gamma_c"), db0 = get(c, "delta_b");
  CsvWriter csv({"omega_b", "gamma_eff", "resolved", "model_gamma_eff", "template_gamma_eff", "note"});
  for (std::size_t i = 0; i < floqept_gamma_curve_size(raw); ++i) {
    floqept_gamma_point p{};
    check(floqept_gamma_curve_point(raw, i, &p));
    csv << p.omega_b << p.gamma_eff << p.resolved << (fitted ? floqept_coupling_model(p.omega_b, gc, db) : 0.0)
        << floqept_coupling_model(p.omega_b, gc0, db0) << floqept_gamma_curve_point_note(raw, i);
    csv.end_row();
  }
  r.write_csv(r.stem + ".csv", csv);
  r.summary["route"] = a.route;
  r.summary["points"] = omegas.size();
  r.summary["fitted"] = fitted;
  r.summary["gamma_c"] = fitted ? json(gc) : json(nullptr);
  r.summary["delta_b"] = fitted ? json(db) : json(nullptr);
  r.summary["residual_norm"] = floqept_gamma_curve_residual_norm(raw);
  r.summary["iterations"] = floqept_gamma_curve_iterations(raw);
  r.summary["message"] = floqept_gamma_curve_message(raw);
  r.summary["template"] = {{"gamma_c", gc0}, {"delta_b", db0}};
  if (!fitted) throw CliError(3, std::string("gamma-curve fit failed: ") + floqept_gamma_curve_message(raw));
}

void cmd_fit(Run& r, const FitArgs& a) {
  if (a.input.empty()) throw CliError(2, "fit needs --input");
  const auto t = read_csv(a.input);
  const bool heights = a.model == "bessel-heights";
  if (!heights && a.model != "gamma-curve")
    throw CliError(2, "unknown fit model '" + a.model + "' (bessel-heights, gamma-curve)");
  int cx = t.column("omega_b");
  int cy = t.column(heights ? "height" : "gamma_eff");
  if (cx < 0) cx = 0;
  if (cy < 0) cy = 1;
  if (static_cast<std::size_t>(std::max(cx, cy)) >= t.header.size())
    throw CliError(2, a.input + ": need omega_b and value columns");
  const int cm = t.column("m"), cr = t.column("resolved");
  std::vector<double> xs, ys;
  for (const auto& row : t.rows) {
    if (heights && cm >= 0 && parse_int_list(row[cm]).at(0) != a.m) continue;
    if (!heights && cr >= 0 && parse_range(row[cr]).at(0) == 0) continue;
    xs.push_back(parse_range(row[cx]).at(0));
    ys.push_back(parse_range(row[cy]).at(0));
  }
  CsvWriter csv({"omega_b", "observed", "model", "residual"});
  auto rows = [&](auto model) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double m = model(xs[i]);
      csv << xs[i] << ys[i] << m << (m - ys[i]);
      csv.end_row();
    }
  };
  r.summary["model"] = a.model;
  r.summary["input"] = a.input;
  r.summary["points"] = xs.size();
  bool ok = false;
  if (heights) {
    floqept_fit_result f{};
    check(floqept_fit_sideband_heights(xs.data(), ys.data(), xs.size(), a.m, &f), "height fit");
    rows([&](double w) {
      double j = 0;
      check(floqept_bessel_j(a.m, f.k / w, &j));
      return f.alpha * j * j;
    });
    ok = f.converged != 0;
    r.summary["m"] = a.m;
    r.summary["alpha"] = f.alpha;
    r.summary["k"] = f.k;
    r.summary["r_squared"] = f.r_squared;
    r.summary["residual_norm"] = f.residual_norm;
    r.summary["iterations"] = f.iterations;
    r.summary["converged"] = ok;
    r.summary["message"] = f.message;
  } else {
    std::vector<floqept_gamma_point> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({xs[i], ys[i], 1});
    floqept_gamma_curve* raw = nullptr;
    check(floqept_gamma_curve_fit(pts.data(), pts.size(), &raw), "coupling fit");
    std::unique_ptr<floqept_gamma_curve, CurveDeleter> g(raw);
    ok = floqept_gamma_curve_fitted(raw) != 0;
    const double gc = floqept_gamma_curve_gamma_c(raw), db = floqept_gamma_curve_delta_b(raw);
    rows([&](double w) { return floqept_coupling_model(w, gc, db); });
    r.summary["gamma_c"] = gc;
    r.summary["delta_b"] = db;
    r.summary["residual_norm"] = floqept_gamma_curve_residual_norm(raw);
    r.summary["converged"] = ok;
    r.summary["message"] = floqept_gamma_curve_message(raw);
  }
  r.write_csv(r.stem + ".csv", csv);
  if (!ok) throw CliError(3, "fit did not converge: " + r.summary["message"].get<std::string>());
}

void cmd_phase_diagram(Run& r, const PhaseArgs& a) {
  floqept_config* c = r.cfg.get();
  if (a.delta0_range.empty()) throw CliError(2, "phase-diagram needs --delta0-range");
  const auto d0 = parse_range(a.delta0_range);
  const auto omegas = a.omegas.empty() ? std::vector<double>{get(c, "omega_b")} : parse_range(a.omegas);
  const int n = order_n(c);
  std::vector<floqept_phase_cell> cells(d0.size() * omegas.size());
  check(floqept_phase_diagram(c, d0.data(), d0.size(), omegas.data(), omegas.size(), n, a.resolution, cells.data()),
        "phase diagram");
  CsvWriter csv({"omega_b", "delta0_abs", "mu", "gamma_eff", "phase_tag"});
  std::map<std::string, int> counts;
  json transitions = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    csv << cell.omega_b << cell.delta0_abs << cell.mu << cell.gamma_eff << floqept_phase_name(cell.phase);
    csv.end_row();
    ++counts[floqept_phase_name(cell.phase)];
    if (i % d0.size() != 0 && cells[i - 1].phase != cell.phase)
      transitions.push_back({{"omega_b", cell.omega_b},
                             {"delta0_abs", cell.delta0_abs},
                             {"from", floqept_phase_name(cells[i - 1].phase)},
                             {"to", floqept_phase_name(cell.phase)}});
  }
  r.write_csv(r.stem + ".csv", csv);
  r.summary["order_n"] = n;
  r.summary["cells"] = cells.size();
  r.summary["resolution"] = a.resolution;
  r.summary["phase_counts"] = counts;
  r.summary["transitions"] = transitions;
}

}  // namespace cli
