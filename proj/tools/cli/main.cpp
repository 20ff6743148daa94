#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "support.hpp"

namespace cli {
namespace {

constexpr int schema_version = 1;

struct ParamFlag {
  const char* flag;
  const char* key;
  std::optional<double> value;
};

// Options consumed by the runner itself; everything else is replayed from a manifest.
bool is_runner_option(const std::string& tok) {
  for (const char* o : {"--out", "--manifest", "--config"})
    if (tok == o) return true;
  return false;
}

bool is_runner_option_inline(const std::string& tok) {
  for (const char* o : {"--out=", "--manifest=", "--config="})
    if (tok.rfind(o, 0) == 0) return true;
  return false;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run(std::vector<std::string> args);

int rerun_manifest(const std::string& path, const std::optional<std::string>& out_override) {
  const json m = json::parse(read_text(path), nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw CliError(2, path + ": not a JSON manifest");
  if (m.value("schema_version", 0) != schema_version)
    throw CliError(2, path + ": unsupported manifest schema_version");
  if (!m.contains("argv") || !m.contains("settings") || !m.contains("out_dir"))
    throw CliError(2, path + ": manifest lacks argv, settings or out_dir");
  std::vector<std::string> args{"floqept"};
  for (const auto& a : m["argv"]) args.push_back(a.get<std::string>());
  args.push_back("--no-env-config");
  for (const auto& [k, v] : m["settings"].items()) {
    if (!v.is_number()) throw CliError(2, path + ": setting '" + k + "' is not a number");
    args.push_back("--set");
    args.push_back(k + "=" + v.dump());
  }
  args.push_back("--out");
  args.push_back(out_override ? *out_override : m["out_dir"].get<std::string>());
  return run(std::move(args));
}

void add_separation_options(CLI::App* sub, SeparationArgs& s) {
  sub->add_option("--coarse-step", s.coarse_step, "Window scan step in Hz")->capture_default_str();
  sub->add_option("--fine-step", s.fine_step, "Local refinement step in Hz")->capture_default_str();
  sub->add_option("--prominence", s.prominence, "Peak prominence relative to the window maximum")
      ->capture_default_str();
  sub->add_option("--readout", s.readout, "auto, transfer or self")->capture_default_str();
}

void add_ep_options(CLI::App* sub, EpArgs& e) {
  sub->add_option("--gamma-eff", e.gamma_eff, "Closed-form route: fixed effective coupling in Hz");
  sub->add_option("--bracket-width", e.bracket_width, "Bisection stops below this width (Hz)")->capture_default_str();
  sub->add_option("--gap", e.gap, "Monodromy route: broken when the folded gap exceeds this (Hz)")
      ->capture_default_str();
  add_separation_options(sub, e.sep);
}

int run(std::vector<std::string> args) {
  CLI::App app{"Floquet dissipative-coupling exceptional-point simulator", "floqept"};
  app.set_version_flag("--version", std::string(floqept_version()));
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::optional<std::string> config_path, manifest_path, out_dir;
  std::vector<std::string> sets;
  std::optional<int> order;
  std::string grid;
  int jobs = 1;
  bool no_env = false;
  std::vector<ParamFlag> flags{{"--delta0", "delta0", {}},
                               {"--gamma-c", "gamma_c", {}},
                               {"--gamma12", "gamma12", {}},
                               {"--delta-b", "delta_b", {}},
                               {"--omega-b", "omega_b", {}},
                               {"--delta-zeeman0", "delta_zeeman0", {}},
                               {"--stark-shift", "stark_shift", {}},
                               {"--n1", "n1", {}},
                               {"--n2", "n2", {}},
                               {"--truncation-m", "truncation_m", {}},
                               {"--rel-tol", "rel_tol", {}},
                               {"--abs-tol", "abs_tol", {}},
                               {"--sim-duration", "sim_duration", {}}};

  app.add_option("--config", config_path, "Settings file (key = value); default $FLOQEPT_CONFIG");
  app.add_option("--set", sets, "Override one setting, key=value (repeatable)");
  for (auto& f : flags) app.add_option(f.flag, f.value, std::string("Setting ") + f.key);
  app.add_option("--n", order, "Floquet order n (sets n1 = n2 + n)");
  app.add_option("--grid", grid, "Probe detuning grid start:stop:step (Hz)");
  app.add_option("--out", out_dir, "Output directory (default .)");
  app.add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::Range(1, 1024));
  app.add_option("--manifest", manifest_path, "Re-run the command recorded in a manifest sidecar");
  app.add_flag("--no-env-config", no_env, "Ignore $FLOQEPT_CONFIG")->group("");

  EigenArgs eigen;
  auto* s_eigen = app.add_subcommand("eigen", "Eigenvalue branches (static, rwa, monodromy)");
  s_eigen->add_option("--route", eigen.route, "static, rwa, monodromy or all")->capture_default_str();
  s_eigen->add_flag("--static", eigen.static_only, "Static two-mode branches only");
  s_eigen->add_option("--sweep-delta0", eigen.sweep, "|delta0| sweep start:stop:step");
  s_eigen->add_option("--gap", eigen.gap, "Monodromy phase tag threshold in Hz")->capture_default_str();

  SpectrumArgs spectrum;
  auto* s_spec = app.add_subcommand("spectrum", "Steady-state response spectra and peak table");
  s_spec->add_option("--probe", spectrum.probe, "ch1, ch2 or both")->capture_default_str();
  s_spec->add_option("--read", spectrum.read, "ch1, ch2 or both")->capture_default_str();
  s_spec->add_option("--sidebands", spectrum.sidebands, "Emit per-sideband columns up to this |m|");
  s_spec->add_option("--prominence", spectrum.prominence, "Peak prominence relative to the maximum")
      ->capture_default_str();
  s_spec->add_option("--heights-omegas", spectrum.heights_omegas,
                     "Sideband-height mode: omega_b sweep start:stop:step");
  s_spec->add_option("--orders", spectrum.orders, "Sideband orders for height mode")->capture_default_str();

  SeparationCmdArgs separation;
  auto* s_sep = app.add_subcommand("separation", "Peak separation of the two channels");
  s_sep->add_option("--sweep-delta0", separation.sweep, "|delta0| sweep start:stop:step");
  add_separation_options(s_sep, separation.sep);

  BeatArgs beat;
  auto* s_beat = app.add_subcommand("beat", "Beat frequency of the time-domain CH1 power");
  s_beat->add_option("--sweep-delta0", beat.sweep, "|delta0| sweep start:stop:step");
  s_beat->add_option("--samples-per-period", beat.samples_per_period, "Sampling rate in units of omega_b")
      ->capture_default_str();
  s_beat->add_option("--confidence", beat.confidence, "Minimum peak-to-median ratio")->capture_default_str();

  EpArgs ep;
  auto* s_ep = app.add_subcommand("ep", "Exceptional-point search by bisection");
  s_ep->add_option("--route", ep.route, "closed-form, monodromy, spectral-pipeline or all")->capture_default_str();
  s_ep->add_option("--target-gamma-eff", ep.target_gamma_eff, "Solve delta_b for this effective coupling first");
  s_ep->add_option("--x-range", ep.x_range, "Bracket lo:hi on delta_b/omega_b for the drive-depth solve");
  add_ep_options(s_ep, ep);

  GammaArgs gamma;
  auto* s_gamma = app.add_subcommand("gamma-curve", "Effective coupling versus omega_b from EP locations, with fit");
  s_gamma->add_option("--omegas", gamma.omegas, "omega_b grid start:stop:step")->required();
  s_gamma->add_option("--route", gamma.route, "EP route")->capture_default_str();
  add_ep_options(s_gamma, gamma.ep);

  FitArgs fit;
  auto* s_fit = app.add_subcommand("fit", "Fit Bessel models to CSV data");
  s_fit->add_option("--model", fit.model, "bessel-heights or gamma-curve")->required();
  s_fit->add_option("--input", fit.input, "CSV with omega_b and height (or gamma_eff) columns")->required();
  s_fit->add_option("--m", fit.m, "Sideband order for bessel-heights")->capture_default_str();

  PhaseArgs phase;
  auto* s_phase = app.add_subcommand("phase-diagram", "Phase classification over (|delta0|, omega_b)");
  s_phase->add_option("--delta0-range", phase.delta0_range, "|delta0| grid start:stop:step")->required();
  s_phase->add_option("--omegas", phase.omegas, "omega_b grid start:stop:step (default: configured omega_b)");
  s_phase->add_option("--resolution", phase.resolution, "EP band half-width in Hz")->capture_default_str();

  auto* s_validate = app.add_subcommand("validate", "Validate the resolved settings and print them");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto subs = app.get_subcommands();
  if (subs.empty()) {
    if (manifest_path) return rerun_manifest(*manifest_path, out_dir);
    std::cerr << app.help();
    return 2;
  }
  if (manifest_path) throw CliError(2, "--manifest re-runs a recorded command and takes no subcommand");
  CLI::App* sub = subs.front();

  Run r;
  r.cfg = make_config();
  r.jobs = jobs;
  r.subcommand = sub->get_name();
  r.stem = r.subcommand;
  for (char& ch : r.stem)
    if (ch == '-') ch = '_';
  r.out_dir = out_dir.value_or(".");

  if (config_path) {
    check(floqept_config_load_file(r.cfg.get(), config_path->c_str()), "--config");
  } else if (const char* env = std::getenv("FLOQEPT_CONFIG"); env && *env && !no_env) {
    check(floqept_config_load_file(r.cfg.get(), env), "FLOQEPT_CONFIG");
  }
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw CliError(2, "--set expects key=value, got '" + s + "'");
    set(r.cfg.get(), s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& f : flags)
    if (f.value) set(r.cfg.get(), f.key, *f.value);
  if (order) set(r.cfg.get(), "n1", get(r.cfg.get(), "n2") + *order);
  if (!grid.empty()) {
    const auto colon1 = grid.find(':');
    const auto colon2 = grid.find(':', colon1 == std::string::npos ? colon1 : colon1 + 1);
    if (colon1 == std::string::npos || colon2 == std::string::npos)
      throw CliError(2, "--grid expects start:stop:step");
    set(r.cfg.get(), "grid_start", grid.substr(0, colon1));
    set(r.cfg.get(), "grid_stop", grid.substr(colon1 + 1, colon2 - colon1 - 1));
    set(r.cfg.get(), "grid_step", grid.substr(colon2 + 1));
  }

  if (sub == s_validate) {
    const auto st = floqept_config_validate(r.cfg.get());
    const std::string report = st == FLOQEPT_OK ? "" : floqept_last_error();
    std::cout << format_config(r.cfg.get());
    if (st != FLOQEPT_OK) {
      std::cerr << report << '\n';
      return exit_code(st);
    }
    std::cout << "# settings are valid\n";
    return 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  ensure_dir(r.out_dir);
  int status = 0;
  std::string failure;
  try {
    if (sub == s_eigen) cmd_eigen(r, eigen);
    else if (sub == s_spec) cmd_spectrum(r, spectrum);
    else if (sub == s_sep) cmd_separation(r, separation);
    else if (sub == s_beat) cmd_beat(r, beat);
    else if (sub == s_ep) cmd_ep(r, ep);
    else if (sub == s_gamma) cmd_gamma_curve(r, gamma);
    else if (sub == s_fit) cmd_fit(r, fit);
    else if (sub == s_phase) cmd_phase_diagram(r, phase);
  } catch (const CliError& e) {
    // Validation and I/O failures leave nothing behind; result-level failures
    // still get their summary so the diagnostics are inspectable.
    if (r.outputs.empty()) throw;
    status = e.code();
    failure = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary = json::object();
  summary["schema_version"] = schema_version;
  summary["subcommand"] = r.subcommand;
  summary["tool_version"] = floqept_version();
  summary["settings"] = settings_json(r.cfg.get());
  summary["status"] = status == 0 ? "ok" : "failed";
  if (status) summary["error"] = failure;
  for (auto& [k, v] : r.summary.items()) summary[k] = v;
  const std::string summary_path = r.path(r.stem + ".json");
  write_text(summary_path, summary.dump(2) + "\n");
  r.outputs.push_back(summary_path);

  std::vector<std::string> replay;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok == "--no-env-config" || is_runner_option_inline(tok)) continue;
    if (tok == "--set") {  // settings are recorded resolved
      ++i;
      continue;
    }
    if (tok.rfind("--set=", 0) == 0) continue;
    if (is_runner_option(tok)) {
      ++i;
      continue;
    }
    replay.push_back(tok);
  }
  json manifest = json::object();
  manifest["schema_version"] = schema_version;
  manifest["tool"] = "floqept";
  manifest["tool_version"] = floqept_version();
  manifest["subcommand"] = r.subcommand;
  manifest["argv"] = replay;
  manifest["settings"] = settings_json(r.cfg.get());
  manifest["out_dir"] = r.out_dir;
  manifest["outputs"] = r.outputs;
  manifest["started_utc"] = started;
  manifest["wall_seconds"] = wall;
  manifest["status"] = status;
  const std::string manifest_path_out = r.path(r.stem + ".manifest.json");
  write_text(manifest_path_out, manifest.dump(2) + "\n");

  for (const auto& o : r.outputs) std::cout << o << '\n';
  std::cout << manifest_path_out << '\n';
  if (status) std::cerr << "floqept: " << failure << '\n';
  return status;
}

}  // namespace
}  // namespace cli

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return cli::run(std::move(args));
  } catch (const cli::CliError& e) {
    std::cerr << "floqept: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "floqept: internal error: " << e.what() << '\n';
    return 5;
  }
}
