#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace floqept {

enum class Channel { ch1 = 0, ch2 = 1 };

inline constexpr std::size_t index(Channel c) { return static_cast<std::size_t>(c); }
inline constexpr Channel other(Channel c) {
  return c == Channel::ch1 ? Channel::ch2 : Channel::ch1;
}
std::string_view to_string(Channel c);

// Physical parameters of the two-channel model. Every rate and frequency is an
// ordinary frequency in Hz; evolution operators carry the 2*pi explicitly, so
// a mode with eigenvalue nu evolves as exp(-2*pi*i*nu*t) with t in seconds.
struct ModelParams {
  double delta0 = -3050.0;         // single-photon detuning difference CH1 - CH2
  double gamma_c = 93.0;           // bare dissipative coupling rate
  double gamma12 = 50.0;           // common spin-wave decay rate
  double delta_b = 4300.0;         // Zeeman modulation depth
  double omega_b = 3000.0;         // modulation frequency
  double delta_zeeman0 = 17000.0;  // static common Zeeman shift (frame only)
  double stark_shift = 0.0;        // common spectral offset of all spectra
  int n1 = 1;                      // Floquet band of the CH1 partner
  int n2 = 0;                      // Floquet band of the CH2 partner

  int n() const { return n1 - n2; }
  double modulation_index() const { return delta_b / omega_b; }
  // mu = |delta0| - n * omega_b, the detuning between the CH1 carrier and the
  // n-th sideband frame.
  double mismatch() const;
  // Signed sideband order n~ = sign(delta0) * n; delta0 == 0 counts as positive.
  int signed_order() const;
};

struct FrequencyGrid {
  double start = -4000.0;
  double stop = 4000.0;
  double step = 1.0;

  // Points start, start + step, ... up to and including stop (within 1e-9 step).
  std::size_t size() const;
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  std::vector<double> points() const;
};

struct SimConfig {
  int truncation_m = 8;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  FrequencyGrid grid{};
  double sim_duration = 1.0;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Smallest truncation accepted for the current drive: ceil(delta_b/omega_b) + 3.
int required_truncation(const ModelParams& params);

ValidationReport validate(const ModelParams& params, const SimConfig& cfg);

// Throws Error(validation) carrying the rendered report.
void require_valid(const ModelParams& params, const SimConfig& cfg);

// Flat `key = value` settings. Keys: delta0 gamma_c gamma12 delta_b omega_b
// delta_zeeman0 stark_shift n1 n2 truncation_m rel_tol abs_tol grid_start
// grid_stop grid_step sim_duration. Lines starting with '#' are comments.
void apply_setting(ModelParams& params, SimConfig& cfg, std::string_view key,
                   std::string_view value);
void load_settings(std::istream& in, ModelParams& params, SimConfig& cfg);
void load_settings_file(const std::string& path, ModelParams& params, SimConfig& cfg);
std::string format_settings(const ModelParams& params, const SimConfig& cfg);
std::vector<std::string> setting_keys();

}  // namespace floqept
