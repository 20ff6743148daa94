#include "core/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "core/error.hpp"

namespace floqept {

std::string_view to_string(Channel c) { return c == Channel::ch1 ? "ch1" : "ch2"; }

double ModelParams::mismatch() const {
  return std::abs(delta0) - static_cast<double>(n()) * omega_b;
}

int ModelParams::signed_order() const { return delta0 < 0.0 ? -n() : n(); }

std::size_t FrequencyGrid::size() const {
  if (!(step > 0.0) || !(stop > start)) return 0;
  return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

std::vector<double> FrequencyGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.field << ": " << v.message << '\n';
  return os.str();
}

int required_truncation(const ModelParams& params) {
  if (!(params.omega_b > 0.0) || !std::isfinite(params.delta_b)) return 3;
  return static_cast<int>(std::ceil(params.delta_b / params.omega_b)) + 3;
}

ValidationReport validate(const ModelParams& params, const SimConfig& cfg) {
  ValidationReport report;
  auto add = [&](std::string field, std::string message) {
    report.violations.push_back({std::move(field), std::move(message)});
  };
  const std::pair<const char*, double> finite_fields[] = {
      {"delta0", params.delta0},           {"gamma_c", params.gamma_c},
      {"gamma12", params.gamma12},         {"delta_b", params.delta_b},
      {"omega_b", params.omega_b},         {"delta_zeeman0", params.delta_zeeman0},
      {"stark_shift", params.stark_shift}, {"rel_tol", cfg.rel_tol},
      {"abs_tol", cfg.abs_tol},            {"grid_start", cfg.grid.start},
      {"grid_stop", cfg.grid.stop},        {"grid_step", cfg.grid.step},
      {"sim_duration", cfg.sim_duration}};
  for (const auto& [name, value] : finite_fields)
    if (!std::isfinite(value)) add(name, "must be finite");

  if (!(params.omega_b > 0.0)) add("omega_b", "omega_b must be positive");
  if (params.gamma_c < 0.0) add("gamma_c", "gamma_c must be non-negative");
  if (params.gamma12 < 0.0) add("gamma12", "gamma12 must be non-negative");
  if (params.delta_b < 0.0) add("delta_b", "delta_b must be non-negative");
  if (params.n() < 0) add("n1", "n1 - n2 must be non-negative");

  if (cfg.truncation_m < 1) {
    add("truncation_m", "truncation_m must be at least 1");
  } else if (params.omega_b > 0.0 && params.delta_b >= 0.0 &&
             cfg.truncation_m < required_truncation(params)) {
    add("truncation_m", "truncation_m must be at least " +
                            std::to_string(required_truncation(params)) +
                            " (ceil(delta_b/omega_b) + 3)");
  }
  if (!(cfg.rel_tol > 0.0)) add("rel_tol", "rel_tol must be positive");
  if (!(cfg.abs_tol > 0.0)) add("abs_tol", "abs_tol must be positive");
  if (!(cfg.grid.step > 0.0)) add("grid_step", "grid step must be positive");
  if (!(cfg.grid.start < cfg.grid.stop)) add("grid_start", "grid start must be below stop");
  if (!(cfg.sim_duration > 0.0)) add("sim_duration", "sim_duration must be positive");
  return report;
}

void require_valid(const ModelParams& params, const SimConfig& cfg) {
  auto report = validate(params, cfg);
  if (!report.ok()) fail(ErrorKind::validation, "invalid parameters:\n" + report.to_string());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  // strtod rather than from_chars: GCC 11 lacks floating-point from_chars.
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    fail(ErrorKind::invalid_argument,
         "setting '" + std::string(key) + "': not a number: '" + buf + "'");
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    fail(ErrorKind::invalid_argument,
         "setting '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip
  return std::string(buf, r.ptr);
}

}  // namespace

std::vector<std::string> setting_keys() {
  return {"delta0",       "gamma_c", "gamma12", "delta_b",    "omega_b",   "delta_zeeman0",
          "stark_shift",  "n1",      "n2",      "truncation_m", "rel_tol", "abs_tol",
          "grid_start",   "grid_stop", "grid_step", "sim_duration"};
}

void apply_setting(ModelParams& p, SimConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "delta0") p.delta0 = parse_double(key, value);
  else if (key == "gamma_c") p.gamma_c = parse_double(key, value);
  else if (key == "gamma12") p.gamma12 = parse_double(key, value);
  else if (key == "delta_b") p.delta_b = parse_double(key, value);
  else if (key == "omega_b") p.omega_b = parse_double(key, value);
  else if (key == "delta_zeeman0") p.delta_zeeman0 = parse_double(key, value);
  else if (key == "stark_shift") p.stark_shift = parse_double(key, value);
  else if (key == "n1") p.n1 = parse_int(key, value);
  else if (key == "n2") p.n2 = parse_int(key, value);
  else if (key == "truncation_m") c.truncation_m = parse_int(key, value);
  else if (key == "rel_tol") c.rel_tol = parse_double(key, value);
  else if (key == "abs_tol") c.abs_tol = parse_double(key, value);
  else if (key == "grid_start") c.grid.start = parse_double(key, value);
  else if (key == "grid_stop") c.grid.stop = parse_double(key, value);
  else if (key == "grid_step") c.grid.step = parse_double(key, value);
  else if (key == "sim_duration") c.sim_duration = parse_double(key, value);
  else fail(ErrorKind::invalid_argument, "unknown setting '" + std::string(key) + "'");
}

void load_settings(std::istream& in, ModelParams& params, SimConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::invalid_argument,
           "line " + std::to_string(lineno) + ": expected 'key = value'");
    apply_setting(params, cfg, body.substr(0, eq), body.substr(eq + 1));
  }
}

void load_settings_file(const std::string& path, ModelParams& params, SimConfig& cfg) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open settings file '" + path + "'");
  load_settings(in, params, cfg);
}

std::string format_settings(const ModelParams& p, const SimConfig& c) {
  std::ostringstream os;
  os << "delta0 = " << fmt(p.delta0) << '\n'
     << "gamma_c = " << fmt(p.gamma_c) << '\n'
     << "gamma12 = " << fmt(p.gamma12) << '\n'
     << "delta_b = " << fmt(p.delta_b) << '\n'
     << "omega_b = " << fmt(p.omega_b) << '\n'
     << "delta_zeeman0 = " << fmt(p.delta_zeeman0) << '\n'
     << "stark_shift = " << fmt(p.stark_shift) << '\n'
     << "n1 = " << p.n1 << '\n'
     << "n2 = " << p.n2 << '\n'
     << "truncation_m = " << c.truncation_m << '\n'
     << "rel_tol = " << fmt(c.rel_tol) << '\n'
     << "abs_tol = " << fmt(c.abs_tol) << '\n'
     << "grid_start = " << fmt(c.grid.start) << '\n'
     << "grid_stop = " << fmt(c.grid.stop) << '\n'
     << "grid_step = " << fmt(c.grid.step) << '\n'
     << "sim_duration = " << fmt(c.sim_duration) << '\n';
  return os.str();
}

}  // namespace floqept
