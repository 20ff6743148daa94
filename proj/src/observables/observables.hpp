#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "engine/floquet.hpp"

namespace floqept::observables {

struct SpectrumTrace {
  std::vector<double> grid;                  // reported detuning: probe detuning + stark_shift
  std::array<std::vector<double>, 2> power;  // time-averaged spin-wave power per channel
  int truncation = 0;
  // sideband[channel][m + truncation][i]; empty unless requested.
  std::array<std::vector<std::vector<double>>, 2> sideband;
  std::vector<Channel> probed;
  ModelParams params;
  SimConfig cfg;

  const std::vector<double>& channel(Channel c) const { return power[index(c)]; }
  bool has_sidebands() const { return !sideband[0].empty(); }
};

struct SpectrumOptions {
  int jobs = 1;
  bool sidebands = false;
};

// Powers summed incoherently over the probed channels (each probe solved
// separately with unit amplitude).
SpectrumTrace synthesize_spectrum(const ModelParams& p, const SimConfig& cfg,
                                  const std::vector<Channel>& probed, const SpectrumOptions& opts = {});

struct Peak {
  double center = 0;
  double height = 0;
  double fwhm = 0;
  std::optional<int> label;
};

using PeakSet = std::vector<Peak>;

// Local maxima whose topographic prominence exceeds prominence * max(trace).
// Centres and heights from the parabola through the top three samples, FWHM
// from linearly interpolated half-height crossings.
PeakSet detect_peaks(const std::vector<double>& x, const std::vector<double>& y, double prominence);
PeakSet detect_peaks(const SpectrumTrace& trace, double prominence, Channel c);

// Label = round((center - origin) / spacing) when the peak lies within a
// quarter spacing of that sideband.
void label_sidebands(PeakSet& peaks, double origin, double spacing);

enum class Readout { automatic, transfer, self };

struct SeparationOptions {
  double coarse_step = 1.0;  // Hz, window scan
  double fine_step = 0.02;   // Hz, local refinement and merge floor
  double prominence = 0.02;  // relative to the window maximum
  Readout readout = Readout::automatic;
  int jobs = 1;
};

struct SeparationPoint {
  double delta0_abs = 0;
  double separation = 0;        // 0 when merged
  bool merged = false;
  double ch1_center = 0;
  double ch2_center = 0;
  double fwhm = 0;
  double resolution = 0;        // max(2 fine steps, 0.2 fwhm)
  double eigen_separation = 0;  // Re sqrt(mu^2 - 4 ge^2)
};

// One two-channel measurement at the template's delta0. CH1 is searched within
// +-w/2 of delta0, CH2 within +-w/2 of its n-th sideband n~ w; each picks the
// peak nearest its bare frequency. The truncation is raised to the validation
// minimum plus |n| when it is below that. The automatic readout uses the transfer
// spectra (probe one channel, read the other) when gamma_c > 0 and the self
// spectra otherwise.
SeparationPoint measure_separation(const ModelParams& p, const SimConfig& cfg,
                                   const SeparationOptions& opts = {});

// delta0 = sign(template delta0) * |delta0| for every grid value.
std::vector<SeparationPoint> separation_curve(const ModelParams& tmpl, const std::vector<double>& delta0_abs,
                                              const SimConfig& cfg, const SeparationOptions& opts = {});

struct BeatOptions {
  double samples_per_period = 16;  // sampling rate in units of omega_b
  double confidence_threshold = 8; // peak amplitude over the median of the scan
};

struct BeatMeasurement {
  bool found = false;
  double frequency = 0;
  double amplitude = 0;
  double confidence = 0;
  double duration = 0;     // integrated span after the transient
  double resolution = 0;   // 1 / duration
  double nyquist = 0;
  std::string note;
};

// Integrates the lab-frame model seeded with (1, 1)/sqrt(2), the common decay
// removed, discards 5/gamma12, then records the CH1 power |s1|^2 over
// max(sim_duration, 20/|mu|). The dominant component below w/2 is located by
// a projection scan and parabolic refinement.
BeatMeasurement beat_frequency(const ModelParams& p, const SimConfig& cfg, const BeatOptions& opts = {});

}  // namespace floqept::observables
