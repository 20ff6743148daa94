#pragma once

#include <optional>
#include <string>
#include <vector>

#include "support.hpp"

namespace cli {

// State shared by every subcommand run.
struct Run {
  Config cfg;
  std::string out_dir = ".";
  int jobs = 1;
  std::string subcommand;
  std::string stem;                  // base name of the primary outputs
  std::vector<std::string> outputs;  // paths written
  json summary = json::object();     // subcommand results

  std::string path(const std::string& name) const { return join_path(out_dir, name); }
  void write_csv(const std::string& name, const CsvWriter& w);
};

struct SeparationArgs {
  double coarse_step = 1.0;
  double fine_step = 0.02;
  double prominence = 0.02;
  std::string readout = "auto";
  floqept_separation_options to_c(int jobs) const;
};

struct EigenArgs {
  std::string route = "rwa";
  bool static_only = false;
  std::string sweep;
  double gap = 1.0;
};

struct SpectrumArgs {
  std::string probe = "ch1";
  std::string read = "both";
  int sidebands = -1;
  double prominence = 1e-3;
  std::string heights_omegas;
  std::string orders = "0,1,2";
};

struct SeparationCmdArgs {
  std::string sweep;
  SeparationArgs sep;
};

struct BeatArgs {
  std::string sweep;
  double samples_per_period = 16;
  double confidence = 8;
};

struct EpArgs {
  std::string route = "closed-form";
  std::optional<double> gamma_eff;
  double bracket_width = 0.5;
  double gap = 1.0;
  std::optional<double> target_gamma_eff;
  std::string x_range;
  SeparationArgs sep;
  floqept_ep_options to_c(int jobs) const;
};

struct GammaArgs {
  std::string omegas;
  std::string route = "spectral-pipeline";
  EpArgs ep;
};

struct FitArgs {
  std::string model;
  std::string input;
  int m = 1;
};

struct PhaseArgs {
  std::string delta0_range;
  std::string omegas;
  double resolution = 1.0;
};

void cmd_eigen(Run& r, const EigenArgs& a);
void cmd_spectrum(Run& r, const SpectrumArgs& a);
void cmd_separation(Run& r, const SeparationCmdArgs& a);
void cmd_beat(Run& r, const BeatArgs& a);
void cmd_ep(Run& r, const EpArgs& a);
void cmd_gamma_curve(Run& r, const GammaArgs& a);
void cmd_fit(Run& r, const FitArgs& a);
void cmd_phase_diagram(Run& r, const PhaseArgs& a);

}  // namespace cli
